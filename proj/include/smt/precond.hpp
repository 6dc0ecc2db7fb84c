#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "circulant.hpp"
#include "dense.hpp"
#include "error.hpp"
#include "operand.hpp"
#include "toeplitz.hpp"

namespace smt {

// Circulant preconditioners.
//
//   strang:       copy the central diagonals of a square Toeplitz matrix,
//                 c_j = t_j for j <= n/2 and c_j = t_{j-n} beyond.
//   optimal:      Frobenius projection onto the circulants,
//                 c_k = (1/n) sum over (i-j) mod n = k of a_ij.
//   superoptimal: minimizer of ||I - C^{-1} A||_F.  With a = ev(optimal(A))
//                 and b = ev(optimal(A A*)) its eigenvalues are b_i / conj(a_i).

inline Circulant strang(const Toeplitz& T) {
    if (!T.is_square()) throw DimensionError("strang: matrix is not square");
    const std::size_t n = T.rows();
    const auto half = static_cast<long long>(n / 2);
    Vector c(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<long long>(j);
        c[j] = jj <= half ? T.diagonal(jj) : T.diagonal(jj - static_cast<long long>(n));
    }
    return Circulant(std::move(c));
}

/// O(n) weighted average of the two diagonals that wrap onto each circulant
/// diagonal.
inline Circulant optimal(const Toeplitz& T) {
    if (!T.is_square()) throw DimensionError("optimal: matrix is not square");
    const std::size_t n = T.rows();
    const auto nn = static_cast<long long>(n);
    Vector c(n);
    c[0] = T.diagonal(0);
    for (long long j = 1; j < nn; ++j)
        c[static_cast<std::size_t>(j)] =
            (static_cast<double>(j) * T.diagonal(j - nn) + static_cast<double>(nn - j) * T.diagonal(j)) /
            static_cast<double>(n);
    return Circulant(std::move(c));
}

inline Circulant optimal(const DenseMatrix& A) {
    if (A.rows() != A.cols()) throw DimensionError("optimal: matrix is not square");
    const std::size_t n = A.rows();
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) c[(i + n - j) % n] += A(i, j);
    for (cplx& z : c) z /= static_cast<double>(n);
    return Circulant(std::move(c));
}

inline Circulant optimal(const Circulant& C) { return C; }

namespace detail {

inline Circulant superoptimal_from(const Circulant& opt_a, const Circulant& opt_aah) {
    const Vector& a = opt_a.ev();
    const Vector& b = opt_aah.ev();
    double amax = 0.0;
    for (const cplx& z : a) amax = std::max(amax, std::abs(z));
    Vector lambda(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (amax == 0.0 || std::abs(a[i]) <= 1e-13 * amax)
            throw SingularError("superoptimal undefined: optimal preconditioner is singular");
        lambda[i] = b[i] / std::conj(a[i]);
    }
    return detail::from_spectrum(std::move(lambda));
}

} // namespace detail

/// Optimal circulant of T T*, accumulated one column at a time with fast
/// products (no dense n x n product is formed).
inline Circulant optimal_gram(const Toeplitz& T) {
    if (!T.is_square()) throw DimensionError("optimal: matrix is not square");
    const std::size_t n = T.rows();
    const Toeplitz Th = toeprem(transpose(T, true));
    Vector c(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Vector y = matvec(T, matvec(Th, unit_vector(n, j)));
        for (std::size_t i = 0; i < n; ++i) c[(i + n - j) % n] += y[i];
    }
    for (cplx& z : c) z /= static_cast<double>(n);
    return Circulant(std::move(c));
}

inline Circulant superoptimal(const Toeplitz& T) { return detail::superoptimal_from(optimal(T), optimal_gram(T)); }

inline Circulant superoptimal(const DenseMatrix& A) {
    if (A.rows() != A.cols()) throw DimensionError("superoptimal: matrix is not square");
    return detail::superoptimal_from(optimal(A), optimal(matmul(A, transpose(A, true))));
}

inline Circulant superoptimal(const Circulant& C) {
    return detail::superoptimal_from(C, C * transpose(C, true));
}

// ---------------------------------------------------------------------------
// dispatching front end

enum class PrecondKind { strang, optimal, superoptimal };

inline const char* to_string(PrecondKind k) {
    switch (k) {
    case PrecondKind::strang: return "strang";
    case PrecondKind::optimal: return "optimal";
    case PrecondKind::superoptimal: return "superoptimal";
    }
    return "?";
}

using PrecondBuilder = std::function<Circulant(const Operand&)>;

namespace detail {

inline Toeplitz require_toeplitz(const Operand& A, const char* who) {
    if (const auto* T = std::get_if<Toeplitz>(&A)) return *T;
    if (const auto* C = std::get_if<Circulant>(&A)) return to_toeplitz(*C);
    throw InvalidArgument(std::string(who) + ": preconditioner is defined only for Toeplitz matrices");
}

template <class F>
Circulant on_matrix(const Operand& A, const char* who, F&& f) {
    switch (kind_of(A)) {
    case Kind::circulant: return f(std::get<Circulant>(A));
    case Kind::toeplitz: return f(std::get<Toeplitz>(A));
    case Kind::dense: return f(std::get<DenseMatrix>(A));
    default: throw InvalidArgument(std::string(who) + ": operand must be a matrix");
    }
}

struct PrecondRegistry {
    std::mutex mutex;
    std::map<std::string, PrecondBuilder> builders;

    PrecondRegistry() {
        builders["strang"] = [](const Operand& A) { return strang(require_toeplitz(A, "strang")); };
        builders["optimal"] = [](const Operand& A) {
            return on_matrix(A, "optimal", [](const auto& M) { return optimal(M); });
        };
        builders["superoptimal"] = [](const Operand& A) {
            return on_matrix(A, "superoptimal", [](const auto& M) { return superoptimal(M); });
        };
    }
};

inline PrecondRegistry& precond_registry() {
    static PrecondRegistry r;
    return r;
}

} // namespace detail

/// Adds (or replaces) a named preconditioner.  Meant for startup.
inline void register_preconditioner(const std::string& name, PrecondBuilder builder) {
    auto& r = detail::precond_registry();
    std::lock_guard lock(r.mutex);
    r.builders[name] = std::move(builder);
}

inline std::vector<std::string> preconditioner_names() {
    auto& r = detail::precond_registry();
    std::lock_guard lock(r.mutex);
    std::vector<std::string> names;
    for (const auto& [k, v] : r.builders) names.push_back(k);
    return names;
}

inline Circulant smtcprec(const std::string& kind, const Operand& A) {
    PrecondBuilder builder;
    {
        auto& r = detail::precond_registry();
        std::lock_guard lock(r.mutex);
        auto it = r.builders.find(kind);
        if (it == r.builders.end()) throw InvalidArgument("unknown preconditioner '" + kind + "'");
        builder = it->second;
    }
    return builder(A);
}

inline Circulant smtcprec(PrecondKind kind, const Operand& A) { return smtcprec(to_string(kind), A); }

} // namespace smt
