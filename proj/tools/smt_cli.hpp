#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smt/smt.hpp"

namespace smt::cli {

// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;
inline constexpr int exit_io = 4;

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

inline std::string error_class(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const UnderdeterminedError*>(&e)) return "underdetermined";
    if (dynamic_cast<const RankDeficientError*>(&e)) return "rank-deficient";
    if (dynamic_cast<const BreakdownError*>(&e)) return "breakdown";
    if (dynamic_cast<const SingularError*>(&e)) return "singular";
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
    if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
    if (dynamic_cast<const NotSupported*>(&e)) return "not-supported";
    if (dynamic_cast<const InvalidArgument*>(&e)) return "invalid-argument";
    return "internal";
}

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return exit_io;
    if (dynamic_cast<const NumericalError*>(&e)) return exit_numerical;
    if (dynamic_cast<const InvalidArgument*>(&e) || dynamic_cast<const NotSupported*>(&e)) return exit_usage;
    return exit_failure;
}

inline Operand as_operand(MatrixValue v, const std::string& path) {
    switch (v.index()) {
    case 0: return std::get<Circulant>(std::move(v));
    case 1: return std::get<Toeplitz>(std::move(v));
    case 2: return std::get<DenseMatrix>(std::move(v));
    default: throw InvalidArgument("'" + path + "' holds a vector, expected a matrix");
    }
}

inline Vector as_vector(MatrixValue v, const std::string& path) {
    if (auto* x = std::get_if<Vector>(&v)) return std::move(*x);
    throw InvalidArgument("'" + path + "' does not hold a vector");
}

inline double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw InvalidArgument("parameter '" + key + "': '" + text + "' is not a number");
    return v;
}

// "--key value" / "--key=value" pairs left over after option parsing.
inline std::map<std::string, double> parse_extra_params(const std::vector<std::string>& extra) {
    std::map<std::string, double> params;
    for (std::size_t i = 0; i < extra.size(); ++i) {
        const std::string& a = extra[i];
        if (a.rfind("--", 0) != 0) throw InvalidArgument("unexpected argument '" + a + "'");
        std::string key = a.substr(2), value;
        if (auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.resize(eq);
        } else {
            if (i + 1 >= extra.size()) throw InvalidArgument("parameter '" + key + "' needs a value");
            value = extra[++i];
        }
        params[key] = parse_number(key, value);
    }
    return params;
}

inline std::string format_entry(cplx z, bool real) {
    char buf[64];
    if (real)
        std::snprintf(buf, sizeof buf, "%11.4g", z.real());
    else
        std::snprintf(buf, sizeof buf, "%11.4g%+.4gi", z.real(), z.imag());
    return buf;
}

inline void print_dense(std::ostream& out, const DenseMatrix& A) {
    bool real = true;
    for (const cplx& z : A.data()) real = real && z.imag() == 0.0;
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) out << (j ? " " : "") << format_entry(A(i, j), real);
        out << '\n';
    }
}

inline void print_summary(std::ostream& out, const MatrixValue& v) {
    std::visit(
        [&out](const auto& x) {
            using X = std::remove_cvref_t<decltype(x)>;
            if constexpr (std::same_as<X, Circulant>) {
                out << "circulant " << x.dim() << "x" << x.dim() << '\n';
                out << "col: " << x.dim() << " entries, ev: " << x.ev().size() << '\n';
            } else if constexpr (std::same_as<X, Toeplitz>) {
                out << "toeplitz " << x.rows() << "x" << x.cols() << '\n';
                out << "t: " << x.t().size() << " entries, cev: ";
                if (x.has_cev())
                    out << x.cev().size();
                else
                    out << "absent (" << x.embedding_size() << " on first use)";
                out << " (" << to_string(x.embedding()) << ")\n";
            } else if constexpr (std::same_as<X, DenseMatrix>) {
                out << "dense " << x.rows() << "x" << x.cols() << '\n';
                out << "entries: " << x.rows() * x.cols() << '\n';
            } else {
                out << "vector " << x.size() << '\n';
            }
        },
        v);
}

inline std::pair<std::size_t, std::size_t> dims_of(const MatrixValue& v) {
    return std::visit(
        [](const auto& x) -> std::pair<std::size_t, std::size_t> {
            using X = std::remove_cvref_t<decltype(x)>;
            if constexpr (std::same_as<X, Vector>)
                return {x.size(), 1};
            else
                return shape(x);
        },
        v);
}

inline Vector apply_operand(const Operand& A, const Vector& x) {
    switch (kind_of(A)) {
    case Kind::circulant: return matvec(std::get<Circulant>(A), x);
    case Kind::toeplitz: return matvec(std::get<Toeplitz>(A), x);
    case Kind::dense: return matvec(std::get<DenseMatrix>(A), x);
    default: throw InvalidArgument("operand is not a matrix");
    }
}

inline Toeplitz toeplitz_of(const Operand& A, const Config& cfg, const char* method) {
    if (auto* T = std::get_if<Toeplitz>(&A)) return *T;
    if (auto* C = std::get_if<Circulant>(&A)) return to_toeplitz(*C, cfg);
    throw InvalidArgument(std::string("method '") + method + "' needs a Toeplitz or circulant matrix");
}

struct SolveArgs {
    std::string matrix, rhs, out, method = "auto", precond = "none", precond_file;
    double tol = 1e-6;
    std::size_t maxit = 20;
};

struct BenchArgs {
    std::string kind = "matvec", policy = "pow2", out;
    std::vector<std::size_t> sizes;
    std::size_t reps = 3, cutoff = 2048;
    std::uint64_t seed = 1;
};

struct GenArgs {
    std::string name, out;
    std::size_t rows = 0, cols = 0;
    std::uint64_t seed = 0;
    bool complex = false;
    std::vector<std::string> params;
};

inline int cmd_gen(const GenArgs& a, const std::vector<std::string>& extra, const Config& cfg, std::ostream& out,
                   std::ostream& err) {
    GallerySpec spec;
    spec.name = a.name;
    spec.rows = a.rows;
    spec.cols = a.cols;
    spec.seed = a.seed;
    spec.complex = a.complex;
    std::vector<std::string> kv;
    for (const std::string& p : a.params) kv.push_back("--" + p);
    kv.insert(kv.end(), extra.begin(), extra.end());
    spec.params = parse_extra_params(kv);

    const MatrixValue v = to_matrix_value(smtgallery(spec, cfg));
    const auto [m, n] = dims_of(v);
    if (a.out.empty() || a.out == "-") {
        write_matrix(out, v);
        err << "gen " << a.name << ": " << kind_name(v) << " " << m << "x" << n << '\n';
    } else {
        write_matrix_file(a.out, v);
        out << "gen " << a.name << ": " << kind_name(v) << " " << m << "x" << n << " -> " << a.out << '\n';
    }
    return exit_ok;
}

inline int cmd_info(const std::string& path, const Config& cfg, std::ostream& out) {
    const MatrixValue v = read_matrix_file(path, cfg);
    print_summary(out, v);
    const auto [m, n] = dims_of(v);
    if (cfg.display == Display::full && m <= 12 && n <= 12) {
        if (auto* x = std::get_if<Vector>(&v)) {
            DenseMatrix A(x->size(), 1);
            for (std::size_t i = 0; i < x->size(); ++i) A(i, 0) = (*x)[i];
            print_dense(out, A);
        } else {
            print_dense(out, full(as_operand(v, path)));
        }
    }
    return exit_ok;
}

inline int cmd_precond(const std::string& kind, const std::string& path, const std::string& out_path,
                       const Config& cfg, std::ostream& out) {
    const Operand A = as_operand(read_matrix_file(path, cfg), path);
    const Circulant C = smtcprec(kind, A);
    if (out_path.empty() || out_path == "-") {
        write_matrix(out, C);
    } else {
        write_matrix_file(out_path, C);
        out << "precond " << kind << ": circulant " << C.dim() << " -> " << out_path << '\n';
    }
    return exit_ok;
}

inline int cmd_solve(const SolveArgs& a, const std::vector<std::string>& argv, const Config& cfg,
                     std::ostream& out) {
    const auto t_start = Clock::now();
    const Operand A = as_operand(read_matrix_file(a.matrix, cfg), a.matrix);
    const auto [m, n] = shape(A);
    Vector b;
    if (a.rhs.empty()) {
        b = apply_operand(A, ones(n));
    } else {
        b = as_vector(read_matrix_file(a.rhs, cfg), a.rhs);
        if (b.size() != m) throw DimensionError("right-hand side has length " + std::to_string(b.size()) +
                                                ", matrix has " + std::to_string(m) + " rows");
    }
    const double t_read = seconds_since(t_start);

    std::string method = a.method;
    if (method == "auto" && (a.precond != "none" || !a.precond_file.empty())) method = "pcg";

    const auto t_setup = Clock::now();
    std::optional<Circulant> M;
    if (!a.precond_file.empty()) {
        const MatrixValue pv = read_matrix_file(a.precond_file, cfg);
        if (!std::holds_alternative<Circulant>(pv))
            throw InvalidArgument("'" + a.precond_file + "' does not hold a circulant");
        M = std::get<Circulant>(pv);
    } else if (a.precond != "none") {
        M = smtcprec(a.precond, A);
    }
    const double setup_seconds = seconds_since(t_setup);

    const auto t_solve = Clock::now();
    Solution s;
    if (method == "auto") {
        s = left_divide(A, b, cfg);
    } else if (method == "levinson") {
        s.x = levinson_solve(toeplitz_of(A, cfg, "levinson"), b);
        s.report.solver = "levinson";
    } else if (method == "lstsq") {
        if (auto* D = std::get_if<DenseMatrix>(&A)) {
            s.x = qr_lstsq(*D, b);
            s.report.solver = "dense-qr";
        } else {
            s.x = toep_lstsq(toeplitz_of(A, cfg, "lstsq"), b, &s.report);
        }
    } else if (method == "pcg") {
        if (m != n) throw DimensionError("pcg needs a square matrix");
        s = pcg([&A](const Vector& x) { return apply_operand(A, x); }, b, M, a.tol, a.maxit);
    } else {
        throw InvalidArgument("unknown method '" + method + "'");
    }
    const double solve_seconds = seconds_since(t_solve);
    if (method != "pcg") {
        const double nb = norm2(b);
        s.report.relative_residual = nb == 0.0 ? 0.0 : norm2(b - apply_operand(A, s.x)) / nb;
    }

    if (!a.out.empty()) write_matrix_file(a.out, s.x);

    nlohmann::ordered_json report;
    report["command"] = argv;
    nlohmann::ordered_json config;
    for (const auto& [k, v] : describe(cfg)) config[k] = v;
    report["config"] = config;
    report["method"] = method;
    report["precond"] = a.precond_file.empty() ? a.precond : "file:" + a.precond_file;
    report["solver"] = s.report.solver;
    report["iterations"] = s.report.iterations;
    report["relative_residual"] = s.report.relative_residual;
    report["flag"] = to_string(s.report.flag);
    report["timings"] = {{"read_seconds", t_read},
                         {"setup_seconds", setup_seconds},
                         {"solve_seconds", solve_seconds},
                         {"total_seconds", seconds_since(t_start)}};
    report["outputs"] = {{"solution", a.out.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(a.out)}};
    out << report.dump(2) << '\n';
    return s.report.flag == SolveFlag::breakdown ? exit_numerical : exit_ok;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out) {
    BenchOptions opt;
    if (a.kind == "matvec")
        opt.kind = BenchKind::matvec;
    else if (a.kind == "solve")
        opt.kind = BenchKind::solve;
    else
        throw InvalidArgument("unknown bench kind '" + a.kind + "'");
    if (a.policy == "pow2")
        opt.policies = {Embedding::next_pow2};
    else if (a.policy == "tight")
        opt.policies = {Embedding::tight};
    else if (a.policy == "both")
        opt.policies = {Embedding::next_pow2, Embedding::tight};
    else
        throw InvalidArgument("unknown policy '" + a.policy + "'");
    opt.sizes = a.sizes;
    opt.repetitions = a.reps;
    opt.dense_cutoff = a.cutoff;
    opt.seed = a.seed;
    const auto rows = run_bench(opt);
    if (a.out.empty() || a.out == "-") {
        write_csv(out, rows);
    } else {
        std::ofstream f(a.out);
        if (!f) throw IoError("cannot open '" + a.out + "' for writing");
        write_csv(f, rows);
        if (!f.flush()) throw IoError("write failed for '" + a.out + "'");
        out << "bench " << a.kind << ": " << rows.size() << " rows -> " << a.out << '\n';
    }
    return exit_ok;
}

} // namespace detail

/// Runs one command line.  Output goes to `out`, diagnostics to `err`; the
/// return value is the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Structured matrix toolbox: circulant and Toeplitz generation, preconditioning and solves."};
    app.name("smt");
    app.require_subcommand(1);

    std::string embedding, display, config_file;
    bool no_toeprem = false, no_intsolve = false, no_intsolvels = false;
    app.add_option("--embedding", embedding, "Circulant embedding size for Toeplitz products")
        ->check(CLI::IsMember({"tight", "pow2"}));
    app.add_flag("--no-toeprem", no_toeprem, "Defer embedding eigenvalues to first use");
    app.add_flag("--no-intsolve", no_intsolve, "Use the registered square solver instead of Levinson");
    app.add_flag("--no-intsolvels", no_intsolvels, "Use the registered least-squares solver");
    app.add_option("--display", display, "Object display for info")->check(CLI::IsMember({"compact", "full"}));
    app.add_option("--config", config_file, "key=value settings file");

    detail::GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Write a gallery matrix; extra --key value pairs set its parameters");
    gen->add_option("name", gen_args.name, "Gallery name")->required();
    gen->add_option("size", gen_args.rows, "Rows (and columns unless --cols)")->required();
    gen->add_option("--cols", gen_args.cols, "Columns for rectangular generators");
    gen->add_option("--seed", gen_args.seed, "Seed for random generators");
    gen->add_flag("--complex", gen_args.complex, "Complex entries for random generators");
    gen->add_option("-p,--param", gen_args.params, "Parameter as key=value");
    gen->add_option("-o,--out", gen_args.out, "Output file (stdout if omitted)");
    gen->allow_extras();

    std::string info_path;
    auto* info = app.add_subcommand("info", "Describe a matrix file");
    info->add_option("path", info_path)->required();

    std::string pc_kind, pc_path, pc_out;
    auto* precond = app.add_subcommand("precond", "Write a circulant preconditioner for a matrix file");
    precond->add_option("kind", pc_kind, "strang, optimal or superoptimal")->required();
    precond->add_option("matrix", pc_path)->required();
    precond->add_option("-o,--out", pc_out, "Output file (stdout if omitted)");

    detail::SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "Solve A x = b and print a JSON run report");
    solve->add_option("matrix", solve_args.matrix)->required();
    solve->add_option("rhs", solve_args.rhs, "Right-hand side vector file (default A*ones)");
    solve->add_option("--method", solve_args.method)->check(CLI::IsMember({"auto", "levinson", "pcg", "lstsq"}));
    solve->add_option("--precond", solve_args.precond)
        ->check(CLI::IsMember({"none", "strang", "optimal", "superoptimal"}));
    solve->add_option("--precond-file", solve_args.precond_file, "Circulant preconditioner file");
    solve->add_option("--tol", solve_args.tol);
    solve->add_option("--maxit", solve_args.maxit);
    solve->add_option("-o,--out", solve_args.out, "Solution vector file");

    detail::BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Time fast against dense products or solves; CSV output");
    bench->add_option("kind", bench_args.kind)->check(CLI::IsMember({"matvec", "solve"}));
    bench->add_option("--sizes", bench_args.sizes)->delimiter(',')->required();
    bench->add_option("--reps", bench_args.reps);
    bench->add_option("--policy", bench_args.policy)->check(CLI::IsMember({"pow2", "tight", "both"}));
    bench->add_option("--dense-cutoff", bench_args.cutoff);
    bench->add_option("--seed", bench_args.seed);
    bench->add_option("-o,--out", bench_args.out, "CSV file (stdout if omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "smt: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        Config cfg = config_get();
        if (!config_file.empty()) cfg = load_config_file(config_file, cfg);
        if (!embedding.empty()) cfg = with_setting(cfg, "embedding", embedding);
        if (!display.empty()) cfg = with_setting(cfg, "display", display);
        if (no_toeprem) cfg.toeprem = false;
        if (no_intsolve) cfg.intsolve = false;
        if (no_intsolvels) cfg.intsolvels = false;

        if (gen->parsed()) return detail::cmd_gen(gen_args, gen->remaining(), cfg, out, err);
        if (info->parsed()) return detail::cmd_info(info_path, cfg, out);
        if (precond->parsed()) return detail::cmd_precond(pc_kind, pc_path, pc_out, cfg, out);
        if (solve->parsed()) return detail::cmd_solve(solve_args, args, cfg, out);
        if (bench->parsed()) return detail::cmd_bench(bench_args, out);
    } catch (const std::exception& e) {
        err << "smt: error (" << detail::error_class(e) << "): " << e.what() << '\n';
        return detail::exit_code_for(e);
    }
    return exit_usage;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace smt::cli
