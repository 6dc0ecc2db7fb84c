#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smt_cli.hpp"
#include "support.hpp"

using namespace smt;
using namespace smt::test;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("smt_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, GenGaussianHeader) {
    const Result r = run({"gen", "gaussian", "7", "-o", path("g.smt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(path("g.smt"));
    EXPECT_EQ(text.substr(0, text.find('\n')), "smt toeplitz 7 7");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 14);
}

TEST_F(Cli, GenIsSeeded) {
    ASSERT_EQ(run({"gen", "crrand", "4", "--seed", "1", "-o", path("a.smt")}).code, 0);
    ASSERT_EQ(run({"gen", "crrand", "4", "--seed", "1", "-o", path("b.smt")}).code, 0);
    EXPECT_EQ(slurp(path("a.smt")), slurp(path("b.smt")));
}

TEST_F(Cli, GenParameters) {
    const Result r = run({"gen", "tkms", "3", "--rho", "0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "smt toeplitz 3 3\n0.25 0\n0.5 0\n1 0\n0.5 0\n0.25 0\n");
    EXPECT_EQ(run({"gen", "tkms", "3", "--rho=0.25"}).out, run({"gen", "tkms", "3", "-p", "rho=0.25"}).out);
    EXPECT_EQ(run({"gen", "tkms", "3", "--alpha", "2"}).code, 2);
    EXPECT_EQ(run({"gen", "tkms", "3", "--rho", "abc"}).code, 2);
    EXPECT_EQ(run({"gen", "unknown", "3"}).code, 2);
}

TEST_F(Cli, InfoCompactAndFull) {
    ASSERT_EQ(run({"gen", "tkms", "4", "-o", path("t.smt")}).code, 0);
    const Result compact = run({"--display", "compact", "info", path("t.smt")});
    ASSERT_EQ(compact.code, 0);
    EXPECT_NE(compact.out.find("t: 7 entries, cev: 8"), std::string::npos) << compact.out;
    EXPECT_NE(run({"--embedding", "tight", "--display", "compact", "info", path("t.smt")}).out.find("cev: 7"),
              std::string::npos);

    std::ofstream(path("c.smt")) << "smt circulant 4\n1 0\n2 0\n3 0\n4 0\n";
    const Result full = run({"info", path("c.smt")});
    ASSERT_EQ(full.code, 0);
    std::istringstream lines(full.out);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(lines, line)) {
        std::istringstream ls(line);
        rows.emplace_back(std::istream_iterator<double>(ls), std::istream_iterator<double>());
    }
    const std::vector<std::vector<double>> expect{{1, 4, 3, 2}, {2, 1, 4, 3}, {3, 2, 1, 4}, {4, 3, 2, 1}};
    EXPECT_EQ(rows, expect);
}

TEST_F(Cli, InfoTruncatedFile) {
    std::ofstream(path("bad.smt")) << "smt circulant 4\n1 0\n2 0\n";
    const Result r = run({"info", path("bad.smt")});
    EXPECT_EQ(r.code, 4);
    EXPECT_NE(r.err.find("missing 2 lines"), std::string::npos) << r.err;
    EXPECT_EQ(run({"info", path("absent.smt")}).code, 4);
}

TEST_F(Cli, PrecondCommands) {
    ASSERT_EQ(run({"gen", "ttridiag", "4", "-o", path("t.smt")}).code, 0);
    const Result s = run({"precond", "strang", path("t.smt")});
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(s.out, "smt circulant 4\n2 0\n-1 0\n0 0\n-1 0\n");

    std::ofstream(path("d.smt")) << "smt dense 1 1\n1 0\n";
    const Result d = run({"precond", "strang", path("d.smt")});
    EXPECT_EQ(d.code, 2);
    EXPECT_NE(d.err.find("only for Toeplitz"), std::string::npos);

    std::ofstream(path("c.smt")) << "smt circulant 3\n1 0\n2 0\n3 0\n";
    EXPECT_EQ(run({"precond", "optimal", path("c.smt")}).out, slurp(path("c.smt")));
}

TEST_F(Cli, SolveCirculantIsDirect) {
    std::ofstream(path("c.smt")) << "smt circulant 3\n4 0\n1 0\n0 0\n";
    const Result r = run({"solve", path("c.smt"), "-o", path("x.smt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["iterations"], 0);
    EXPECT_EQ(j["solver"], "circulant");
    EXPECT_EQ(j["flag"], "converged");
    EXPECT_LT(j["relative_residual"].get<double>(), 1e-14);
    EXPECT_EQ(j["outputs"]["solution"], path("x.smt"));
    const Vector x = std::get<Vector>(read_matrix_file(path("x.smt")));
    EXPECT_LT(rel_err(x, ones(3)), 1e-14);
}

TEST_F(Cli, SolvePcgWithStrang) {
    ASSERT_EQ(run({"gen", "gaussian", "1024", "-o", path("g.smt")}).code, 0);
    const Result r = run({"solve", path("g.smt"), "--method", "pcg", "--precond", "strang", "--maxit", "100",
                          "-o", path("x.smt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["flag"], "converged");
    EXPECT_LE(j["relative_residual"].get<double>(), 1e-6);
    EXPECT_TRUE(j["config"].contains("embedding"));
    EXPECT_TRUE(j["timings"].contains("total_seconds"));
}

TEST_F(Cli, SolveAutoEqualsLibrary) {
    ASSERT_EQ(run({"gen", "tprandn", "9", "--seed", "4", "-o", path("t.smt")}).code, 0);
    std::ofstream(path("b.smt")) << "smt vector 9\n1 0\n2 0\n3 0\n4 0\n5 0\n6 0\n7 0\n8 0\n9 0\n";
    ASSERT_EQ(run({"solve", path("t.smt"), path("b.smt"), "-o", path("x.smt")}).code, 0);
    const Toeplitz T = std::get<Toeplitz>(read_matrix_file(path("t.smt")));
    const Vector b = std::get<Vector>(read_matrix_file(path("b.smt")));
    const Vector x = std::get<Vector>(read_matrix_file(path("x.smt")));
    EXPECT_EQ(x, toep_divide(T, b).x);
}

TEST_F(Cli, SolveErrorsAndExitCodes) {
    ASSERT_EQ(run({"gen", "tprand", "4", "--cols", "6", "-o", path("wide.smt")}).code, 0);
    const Result u = run({"solve", path("wide.smt"), "--method", "lstsq"});
    EXPECT_EQ(u.code, 3);
    EXPECT_NE(u.err.find("underdetermined"), std::string::npos);

    ASSERT_EQ(run({"gen", "ttridiag", "8", "-o", path("t.smt")}).code, 0);
    EXPECT_EQ(run({"solve", path("t.smt"), "--precond", "strang"}).code, 3); // singular Strang circulant
    EXPECT_EQ(run({"solve", path("t.smt"), "--method", "gauss"}).code, 2);
    EXPECT_EQ(run({"solve", path("missing.smt")}).code, 4);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, PipelineOnTridiagonal) {
    ASSERT_EQ(run({"gen", "ttridiag", "64", "-o", path("t.smt")}).code, 0);
    ASSERT_EQ(run({"precond", "optimal", path("t.smt"), "-o", path("c.smt")}).code, 0);
    const Result r = run({"solve", path("t.smt"), "--method", "pcg", "--precond-file", path("c.smt"), "--tol",
                          "1e-12", "--maxit", "200", "-o", path("x.smt")});
    ASSERT_EQ(r.code, 0) << r.err;
    const Toeplitz T = std::get<Toeplitz>(read_matrix_file(path("t.smt")));
    const Vector x = std::get<Vector>(read_matrix_file(path("x.smt")));
    const Vector b = T * ones(64);
    EXPECT_LE(norm2(b - T * x) / norm2(b), 1e-10);
}

TEST_F(Cli, GlobalFlagsAndConfigFile) {
    ASSERT_EQ(run({"gen", "tkms", "6", "-o", path("t.smt")}).code, 0);
    std::ofstream(path("smt.conf")) << "intsolve=off\n";
    const Result r = run({"--config", path("smt.conf"), "solve", path("t.smt")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["solver"], "dense-lu");
    EXPECT_EQ(nlohmann::json::parse(run({"--no-intsolve", "solve", path("t.smt")}).out)["config"]["intsolve"], "off");
    std::ofstream(path("bad.conf")) << "intsolve=perhaps\n";
    EXPECT_EQ(run({"--config", path("bad.conf"), "solve", path("t.smt")}).code, 4);
    EXPECT_EQ(run({"--embedding", "huge", "info", path("t.smt")}).code, 2);
}

TEST_F(Cli, BenchCsv) {
    const Result r = run({"bench", "matvec", "--sizes", "256,1024", "--reps", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "op,n,policy,fast_seconds,dense_seconds,max_rel_err");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const double err = std::stod(line.substr(line.rfind(',') + 1));
        EXPECT_LE(err, 1e-11);
    }
    EXPECT_EQ(rows, 2);
    const Result both = run({"bench", "solve", "--sizes", "64", "--policy", "both", "--reps", "1"});
    EXPECT_EQ(std::count(both.out.begin(), both.out.end(), '\n'), 3);
}
