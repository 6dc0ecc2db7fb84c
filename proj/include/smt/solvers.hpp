#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "circulant.hpp"
#include "config.hpp"
#include "dense.hpp"
#include "error.hpp"
#include "operand.hpp"
#include "toeplitz.hpp"

namespace smt {

enum class SolveFlag { converged, max_iterations, breakdown };

inline const char* to_string(SolveFlag f) {
    switch (f) {
    case SolveFlag::converged: return "converged";
    case SolveFlag::max_iterations: return "max_iterations";
    case SolveFlag::breakdown: return "breakdown";
    }
    return "?";
}

/// Outcome of a solve.  Direct methods report zero iterations.
struct SolveReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
    SolveFlag flag = SolveFlag::converged;
    std::string solver;
};

struct Solution {
    Vector x;
    SolveReport report;
};

using LinearOperator = std::function<Vector(const Vector&)>;

inline LinearOperator as_operator(const Toeplitz& T) {
    return [T = toeprem(T)](const Vector& x) { return matvec(T, x); };
}
inline LinearOperator as_operator(const Circulant& C) {
    return [C](const Vector& x) { return matvec(C, x); };
}
inline LinearOperator as_operator(const DenseMatrix& A) {
    return [A](const Vector& x) { return matvec(A, x); };
}

// ---------------------------------------------------------------------------
// Levinson recursion

/// Solves T x = b for square T in O(n^2) with the nonsymmetric Levinson
/// recursion.  Forward vectors f (T_k f = e_1) and backward vectors g
/// (T_k g = e_k) are grown one order at a time, and x with them.
///
/// Needs every leading principal minor nonsingular; throws BreakdownError
/// when a pivot vanishes.  There is no look-ahead: callers that hit a
/// breakdown should fall back to a dense solve.
inline Vector levinson_solve(const Toeplitz& T, const Vector& b) {
    if (!T.is_square()) throw DimensionError("levinson_solve: matrix is not square");
    const std::size_t n = T.rows();
    if (b.size() != n) throw DimensionError("levinson_solve: right-hand side length mismatch");

    const double scale = norm_inf(T.t());
    const cplx t0 = T.diagonal(0);
    if (scale == 0.0 || std::abs(t0) <= 1e-12 * scale)
        throw BreakdownError("levinson_solve: breakdown at order 1 (zero diagonal); use the dense fallback");

    Vector f{1.0 / t0}, g{1.0 / t0}, x{b[0] / t0};
    f.reserve(n);
    g.reserve(n);
    x.reserve(n);
    Vector fn, gn;
    for (std::size_t k = 1; k < n; ++k) {
        // ef = row k of T_{k+1} times [f; 0], eg = row 0 times [0; g]
        cplx ef = 0.0, eg = 0.0, ex = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const cplx tk = T(k, i);
            ef += tk * f[i];
            ex += tk * x[i];
            eg += T(0, i + 1) * g[i];
        }
        const cplx denom = 1.0 - ef * eg;
        if (std::abs(denom) <= 1e-12 || !std::isfinite(std::abs(denom)))
            throw BreakdownError("levinson_solve: breakdown at order " + std::to_string(k + 1) +
                                 " (singular leading minor); use the dense fallback");
        fn.assign(k + 1, cplx{});
        gn.assign(k + 1, cplx{});
        for (std::size_t i = 0; i < k; ++i) {
            fn[i] += f[i];
            fn[i + 1] -= ef * g[i];
            gn[i + 1] += g[i];
            gn[i] -= eg * f[i];
        }
        for (std::size_t i = 0; i <= k; ++i) {
            fn[i] /= denom;
            gn[i] /= denom;
        }
        f.swap(fn);
        g.swap(gn);
        const cplx step = b[k] - ex;
        x.push_back(0.0);
        for (std::size_t i = 0; i <= k; ++i) x[i] += step * g[i];
    }
    if (!all_finite(x)) throw BreakdownError("levinson_solve: non-finite solution; use the dense fallback");
    return x;
}

// ---------------------------------------------------------------------------
// Toeplitz least squares

namespace detail {

// Extreme eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.
inline std::pair<double, double> tridiag_extremes(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t k = a.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i + 1 < k ? std::abs(b[i]) : 0.0);
        lo = std::min(lo, a[i] - r);
        hi = std::max(hi, a[i] + r);
    }
    // number of eigenvalues < x
    auto count_below = [&](double x) {
        std::size_t cnt = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double off = i > 0 ? b[i - 1] * b[i - 1] : 0.0;
            d = a[i] - x - (i > 0 ? off / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++cnt;
        }
        return cnt;
    };
    auto kth = [&](std::size_t target) {
        double l = lo, h = hi;
        for (int it = 0; it < 200 && h - l > 1e-17 * std::max(std::abs(l), std::abs(h)); ++it) {
            const double mid = 0.5 * (l + h);
            if (count_below(mid) > target)
                h = mid;
            else
                l = mid;
        }
        return 0.5 * (l + h);
    };
    return {kth(0), kth(k - 1)};
}

// Condition estimate of T*T from Lanczos with full reorthogonalization and a
// fixed pseudo-random start.  Ritz values lie inside the spectrum, so this
// never overestimates.
inline double normal_condition_estimate(const Toeplitz& T, const Toeplitz& Th, std::size_t steps) {
    const std::size_t n = T.cols();
    steps = std::min(steps, n);
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> nd;
    Vector v(n);
    for (cplx& z : v) z = {nd(rng), nd(rng)};
    const double nv = norm2(v);
    for (cplx& z : v) z /= nv;

    std::vector<Vector> basis;
    std::vector<double> alpha, beta;
    for (std::size_t j = 0; j < steps; ++j) {
        basis.push_back(v);
        Vector w = matvec(Th, matvec(T, v));
        const double a = std::real(dot(v, w));
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& u : basis) axpy(-dot(u, w), u, w);
        const double bnorm = norm2(w);
        const double amax = *std::max_element(alpha.begin(), alpha.end(),
                                              [](double p, double q) { return std::abs(p) < std::abs(q); });
        if (bnorm <= 1e-13 * std::abs(amax) || j + 1 == steps) break;
        beta.push_back(bnorm);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / bnorm;
    }
    beta.resize(alpha.size() > 0 ? alpha.size() - 1 : 0);
    const auto [lmin, lmax] = tridiag_extremes(alpha, beta);
    if (lmax <= 0.0) return std::numeric_limits<double>::infinity();
    if (lmin <= 0.0) return std::numeric_limits<double>::infinity();
    return lmax / lmin;
}

} // namespace detail

/// Least-squares solution of a strictly overdetermined Toeplitz system.
///
/// Fewer than 64 columns: dense Householder QR.  Otherwise a Lanczos
/// condition check followed by CGLS (conjugate gradients on the normal
/// equations) with fast products by T and T*.  Rank deficiency means an
/// estimated cond(T*T) above 1e14, or CGLS failing to reach a normal
/// residual of 1e-8 relative (including 5n iterations without progress).
inline Vector toep_lstsq(const Toeplitz& T, const Vector& b, SolveReport* report = nullptr) {
    const std::size_t m = T.rows(), n = T.cols();
    if (m <= n)
        throw UnderdeterminedError("toep_lstsq: system is underdetermined (" + std::to_string(m) + "x" +
                                   std::to_string(n) + "); an overdetermined full-rank matrix is required");
    if (b.size() != m) throw DimensionError("toep_lstsq: right-hand side length mismatch");

    if (n < 64) {
        Vector x = qr_lstsq(full(T), b, 1e14);
        if (report) *report = {0, 0.0, SolveFlag::converged, "dense-qr"};
        return x;
    }

    const Toeplitz A = toeprem(T);
    const Toeplitz Ah = toeprem(transpose(T, true));
    if (detail::normal_condition_estimate(A, Ah, 64) > 1e14)
        throw RankDeficientError("toep_lstsq: matrix is rank deficient (cond(T*T) estimate above 1e14)");

    Vector x(n), r = b;
    Vector s = matvec(Ah, r);
    const double snorm0 = norm2(s);
    if (snorm0 == 0.0) {
        if (report) *report = {0, 0.0, SolveFlag::converged, "cgls"};
        return x;
    }
    Vector p = s;
    double gamma = snorm0 * snorm0;
    double best = snorm0;
    std::size_t since_best = 0, it = 0;
    const std::size_t maxit = std::max<std::size_t>(20 * n, 200);
    for (; it < maxit; ++it) {
        const Vector q = matvec(A, p);
        const double qq = std::real(dot(q, q));
        if (qq == 0.0 || !std::isfinite(qq)) break;
        const double alpha = gamma / qq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        s = matvec(Ah, r);
        const double gnew = std::real(dot(s, s));
        const double snorm = std::sqrt(gnew);
        if (snorm < best) {
            best = snorm;
            since_best = 0;
        } else if (++since_best >= 5 * n) {
            break;
        }
        if (snorm <= 1e-14 * snorm0) {
            ++it;
            break;
        }
        const double beta = gnew / gamma;
        gamma = gnew;
        for (std::size_t i = 0; i < n; ++i) p[i] = s[i] + beta * p[i];
    }

    const Vector normal_residual = matvec(Ah, b - matvec(A, x));
    const double rel = norm2(normal_residual) / snorm0;
    if (!(rel <= 1e-8))
        throw RankDeficientError("toep_lstsq: normal equations did not converge (relative residual " +
                                 std::to_string(rel) + "); matrix is numerically rank deficient");
    if (report) *report = {it, rel, SolveFlag::converged, "cgls"};
    return x;
}

// ---------------------------------------------------------------------------
// preconditioned conjugate gradients

/// Preconditioned CG for Hermitian positive definite operators.  The
/// preconditioner, when given, is applied by circulant left division.
/// The reported relative residual is recomputed from the returned x.
inline Solution pcg(const LinearOperator& apply_A, const Vector& b, const std::optional<Circulant>& M,
                    double tol = 1e-6, std::size_t maxit = 20) {
    if (!(tol > 0.0)) throw InvalidArgument("pcg: tolerance must be positive");
    if (maxit < 1) throw InvalidArgument("pcg: maxit must be at least 1");
    if (M && M->dim() != b.size()) throw DimensionError("pcg: preconditioner order does not match system");

    const std::size_t n = b.size();
    Solution out{Vector(n), {0, 0.0, SolveFlag::converged, M ? "pcg+circulant" : "pcg"}};
    const double nb = norm2(b);
    if (nb == 0.0) return out;

    Vector& x = out.x;
    Vector r = b;
    auto precondition = [&](const Vector& v) { return M ? solve(*M, v) : v; };
    Vector z = precondition(r);
    Vector p = z;
    cplx rho = dot(r, z);
    bool broke = false;
    std::size_t it = 0;
    while (it < maxit) {
        ++it;
        const Vector q = apply_A(p);
        const cplx pq = dot(p, q);
        const cplx alpha = rho / pq;
        if (pq == cplx{} || !std::isfinite(std::abs(alpha))) {
            broke = true;
            break;
        }
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        if (!all_finite(r)) {
            broke = true;
            break;
        }
        if (norm2(r) <= tol * nb) {
            r = b - apply_A(x);
            if (norm2(r) <= tol * nb) break;
        }
        z = precondition(r);
        const cplx rho_next = dot(r, z);
        const cplx beta = rho_next / rho;
        if (!std::isfinite(std::abs(beta))) {
            broke = true;
            break;
        }
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    out.report.iterations = it;
    out.report.relative_residual = all_finite(x) ? norm2(b - apply_A(x)) / nb : std::numeric_limits<double>::infinity();
    if (broke && !(out.report.relative_residual <= tol))
        out.report.flag = SolveFlag::breakdown;
    else
        out.report.flag = out.report.relative_residual <= tol ? SolveFlag::converged : SolveFlag::max_iterations;
    return out;
}

inline Solution pcg(const Toeplitz& T, const Vector& b, const std::optional<Circulant>& M, double tol = 1e-6,
                    std::size_t maxit = 20) {
    if (!T.is_square() || T.rows() != b.size()) throw DimensionError("pcg: shape mismatch");
    return pcg(as_operator(T), b, M, tol, maxit);
}

// ---------------------------------------------------------------------------
// division dispatcher and user solver hooks

using ToeplitzSolver = std::function<Vector(const Toeplitz&, const Vector&)>;

enum class SolverSlot { square, least_squares };

namespace detail {

struct NamedSolver {
    std::string name;
    ToeplitzSolver fn;
};

struct SolverRegistry {
    std::mutex mutex;
    std::optional<NamedSolver> square;
    std::optional<NamedSolver> least_squares;

    void reset() {
        square = NamedSolver{"dense-lu", [](const Toeplitz& T, const Vector& b) { return lu_solve(full(T), b); }};
        least_squares =
            NamedSolver{"dense-qr", [](const Toeplitz& T, const Vector& b) { return qr_lstsq(full(T), b, 1e14); }};
    }

    SolverRegistry() { reset(); }
};

inline SolverRegistry& solver_registry() {
    static SolverRegistry r;
    return r;
}

} // namespace detail

/// Installs the solver used when the built-in one is switched off
/// (intsolve / intsolvels).  Meant for startup.
inline void register_user_solver(SolverSlot slot, std::string name, ToeplitzSolver fn) {
    auto& r = detail::solver_registry();
    std::lock_guard lock(r.mutex);
    (slot == SolverSlot::square ? r.square : r.least_squares) = detail::NamedSolver{std::move(name), std::move(fn)};
}

inline void clear_user_solver(SolverSlot slot) {
    auto& r = detail::solver_registry();
    std::lock_guard lock(r.mutex);
    (slot == SolverSlot::square ? r.square : r.least_squares).reset();
}

/// Restores the dense LU / dense QR defaults.
inline void reset_user_solvers() {
    auto& r = detail::solver_registry();
    std::lock_guard lock(r.mutex);
    r.reset();
}

namespace detail {
inline NamedSolver user_solver(SolverSlot slot) {
    auto& r = solver_registry();
    std::lock_guard lock(r.mutex);
    const auto& s = slot == SolverSlot::square ? r.square : r.least_squares;
    if (!s)
        throw InvalidArgument(std::string("no user ") + (slot == SolverSlot::square ? "square" : "least-squares") +
                              " Toeplitz solver registered");
    return *s;
}
} // namespace detail

/// T \ b.  Square systems go to Levinson (intsolve on) or the user square
/// solver; tall systems to toep_lstsq (intsolvels on) or the user
/// least-squares solver.  report.solver names the route taken.
inline Solution toep_divide(const Toeplitz& T, const Vector& b, const Config& cfg = config_get()) {
    if (b.size() != T.rows()) throw DimensionError("mldivide: right-hand side length mismatch");
    Solution out;
    if (T.is_square()) {
        if (cfg.intsolve) {
            out.x = levinson_solve(T, b);
            out.report.solver = "levinson";
        } else {
            auto s = detail::user_solver(SolverSlot::square);
            out.x = s.fn(T, b);
            out.report.solver = s.name;
        }
    } else if (T.rows() > T.cols() && !cfg.intsolvels) {
        auto s = detail::user_solver(SolverSlot::least_squares);
        out.x = s.fn(T, b);
        out.report.solver = s.name;
    } else {
        out.x = toep_lstsq(T, b, &out.report);
        return out;
    }
    const double nb = norm2(b);
    out.report.relative_residual = nb == 0.0 ? 0.0 : norm2(b - matvec(T, out.x)) / nb;
    return out;
}

inline Vector left_divide(const Toeplitz& T, const Vector& b) { return toep_divide(T, b).x; }

/// A \ b for any matrix class.
inline Solution left_divide(const Operand& A, const Vector& b, const Config& cfg = config_get()) {
    switch (kind_of(A)) {
    case Kind::circulant: return {solve(std::get<Circulant>(A), b), {0, 0.0, SolveFlag::converged, "circulant"}};
    case Kind::toeplitz: return toep_divide(std::get<Toeplitz>(A), b, cfg);
    case Kind::dense: {
        const auto& M = std::get<DenseMatrix>(A);
        if (M.rows() == M.cols()) return {lu_solve(M, b), {0, 0.0, SolveFlag::converged, "dense-lu"}};
        return {qr_lstsq(M, b), {0, 0.0, SolveFlag::converged, "dense-qr"}};
    }
    default: throw InvalidArgument("mldivide: left operand must be a matrix");
    }
}

} // namespace smt
