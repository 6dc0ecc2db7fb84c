#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"
#include "dense.hpp"
#include "error.hpp"
#include "gallery.hpp"
#include "solvers.hpp"
#include "toeplitz.hpp"

namespace smt {

enum class BenchKind { matvec, solve };

struct BenchOptions {
    BenchKind kind = BenchKind::matvec;
    std::vector<std::size_t> sizes;
    std::size_t repetitions = 3;
    std::vector<Embedding> policies = {Embedding::next_pow2};
    std::size_t dense_cutoff = 2048; // no dense timing above this order
    std::uint64_t seed = 1;
};

struct BenchRow {
    std::string op;
    std::size_t n = 0;
    Embedding policy = Embedding::next_pow2;
    double fast_seconds = 0.0;
    std::optional<double> dense_seconds;
    std::optional<double> max_rel_err;
};

inline double median(std::vector<double> v) {
    if (v.empty()) throw InvalidArgument("median of empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

/// Median wall time of `reps` calls of f.
template <class F>
double time_median(std::size_t reps, F&& f) {
    std::vector<double> samples;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        samples.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return median(std::move(samples));
}

namespace detail {

inline double max_rel_err(const Vector& fast, const Vector& ref) {
    const double scale = std::max(norm_inf(ref), std::numeric_limits<double>::min());
    double e = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) e = std::max(e, std::abs(fast[i] - ref[i]));
    return e / scale;
}

inline BenchRow bench_matvec(std::size_t n, Embedding policy, const BenchOptions& opt) {
    Config cfg;
    cfg.embedding = policy;
    GallerySpec spec{"tprandn", n, n, {}, opt.seed, true};
    const Toeplitz T = std::get<Toeplitz>(smtgallery(spec, cfg));
    GalleryRng rng(opt.seed + 1);
    Vector x(n);
    for (cplx& z : x) z = {rng.normal(), rng.normal()};

    BenchRow row;
    row.op = "matvec";
    row.n = n;
    row.policy = policy;
    Vector y;
    row.fast_seconds = time_median(opt.repetitions, [&] { y = matvec(T, x); });
    if (n <= opt.dense_cutoff) {
        const DenseMatrix A = full(T);
        Vector ref;
        row.dense_seconds = time_median(opt.repetitions, [&] { ref = matvec(A, x); });
        row.max_rel_err = max_rel_err(y, ref);
    }
    return row;
}

inline BenchRow bench_solve(std::size_t n, Embedding policy, const BenchOptions& opt) {
    Config cfg;
    cfg.embedding = policy;
    const Toeplitz T = std::get<Toeplitz>(smtgallery("tkms", n, {}, cfg));
    const Vector b = matvec(T, ones(n));

    BenchRow row;
    row.op = "solve";
    row.n = n;
    row.policy = policy;
    Vector x;
    row.fast_seconds = time_median(opt.repetitions, [&] { x = levinson_solve(T, b); });
    if (n <= opt.dense_cutoff) {
        const DenseMatrix A = full(T);
        Vector ref;
        row.dense_seconds = time_median(opt.repetitions, [&] { ref = lu_solve(A, b); });
        row.max_rel_err = max_rel_err(x, ref);
    }
    return row;
}

} // namespace detail

/// Matvec: random complex Toeplitz against its dense copy.  Solve: Levinson
/// against dense LU on KMS matrices.
inline std::vector<BenchRow> run_bench(const BenchOptions& opt) {
    if (opt.sizes.empty()) throw InvalidArgument("bench: no sizes given");
    if (opt.repetitions < 1) throw InvalidArgument("bench: repetitions must be at least 1");
    std::vector<BenchRow> rows;
    for (std::size_t n : opt.sizes) {
        if (n < 1) throw InvalidArgument("bench: sizes must be positive");
        for (Embedding p : opt.policies)
            rows.push_back(opt.kind == BenchKind::matvec ? detail::bench_matvec(n, p, opt)
                                                         : detail::bench_solve(n, p, opt));
    }
    return rows;
}

/// Missing dense columns are written as empty fields.
inline void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
    os << "op,n,policy,fast_seconds,dense_seconds,max_rel_err\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    for (const BenchRow& r : rows) {
        os << r.op << ',' << r.n << ',' << to_string(r.policy) << ',' << num(r.fast_seconds) << ','
           << (r.dense_seconds ? num(*r.dense_seconds) : "") << ',' << (r.max_rel_err ? num(*r.max_rel_err) : "")
           << '\n';
    }
}

/// Median fast matvec time at n_large over that at n_small.
inline double matvec_time_ratio(std::size_t n_small, std::size_t n_large, std::size_t reps,
                                Embedding policy = Embedding::next_pow2) {
    BenchOptions opt;
    opt.sizes = {n_small, n_large};
    opt.repetitions = reps;
    opt.policies = {policy};
    opt.dense_cutoff = 0;
    const auto rows = run_bench(opt);
    return rows[1].fast_seconds / rows[0].fast_seconds;
}

} // namespace smt
