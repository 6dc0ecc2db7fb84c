#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "circulant.hpp"
#include "config.hpp"
#include "dense.hpp"
#include "dft.hpp"
#include "entrywise.hpp"
#include "error.hpp"

namespace smt {

namespace detail {

// Eigenvalues of the embedding circulant.  Filled at most once; readers see
// either nothing or the complete vector.
struct CevCache {
    std::once_flag once;
    std::atomic<bool> ready{false};
    Vector values;
};

} // namespace detail

/// m x n Toeplitz matrix T(i,j) = t_{i-j}.
///
/// The diagonals are stored in increasing order, t() = (t_{1-n}, ..., t_{m-1}),
/// so entry (i, j) (0-based) is t()[i - j + n - 1].  Fast products embed T in a
/// circulant of order N (m+n-1 or the next power of two, fixed at
/// construction) whose eigenvalues ("cev") are cached on first use, or
/// eagerly when the construction config has toeprem on.
class Toeplitz {
public:
    Toeplitz(std::size_t rows, std::size_t cols, Vector t, const Config& cfg = config_get())
        : rows_(rows), cols_(cols), t_(std::move(t)), embedding_(cfg.embedding), eager_(cfg.toeprem),
          cache_(std::make_shared<detail::CevCache>()) {
        if (rows_ == 0 || cols_ == 0) throw InvalidArgument("toeplitz: empty operand");
        if (t_.size() != rows_ + cols_ - 1)
            throw DimensionError("toeplitz: expected " + std::to_string(rows_ + cols_ - 1) +
                                 " diagonals, got " + std::to_string(t_.size()));
        if (!all_finite(t_)) throw InvalidArgument("toeplitz: non-finite entry");
        if (eager_) (void)cev();
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const Vector& t() const noexcept { return t_; }

    /// t_d for 1-n <= d <= m-1.
    cplx diagonal(long long d) const { return t_.at(static_cast<std::size_t>(d + static_cast<long long>(cols_) - 1)); }

    cplx operator()(std::size_t i, std::size_t j) const { return t_[i + cols_ - 1 - j]; }

    Vector first_column() const { return Vector(t_.begin() + static_cast<std::ptrdiff_t>(cols_ - 1), t_.end()); }

    Vector first_row() const {
        Vector r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = t_[cols_ - 1 - j];
        return r;
    }

    Embedding embedding() const noexcept { return embedding_; }
    bool eager() const noexcept { return eager_; }
    std::size_t embedding_size() const { return smt::embedding_size(embedding_, rows_, cols_); }

    bool has_cev() const noexcept { return cache_->ready.load(std::memory_order_acquire); }

    /// Embedding eigenvalues, computed on first call.
    const Vector& cev() const {
        std::call_once(cache_->once, [this] {
            cache_->values = dft(embedding_column(embedding_size()));
            cache_->ready.store(true, std::memory_order_release);
        });
        return cache_->values;
    }

    /// First column of the order-N embedding circulant:
    /// [t_0 .. t_{m-1}, zeros, t_{1-n} .. t_{-1}].
    Vector embedding_column(std::size_t N) const {
        if (N < rows_ + cols_ - 1) throw InvalidArgument("toeplitz: embedding order below m+n-1");
        Vector c(N);
        for (std::size_t k = 0; k < rows_; ++k) c[k] = t_[cols_ - 1 + k];
        for (std::size_t k = 1; k < cols_; ++k) c[N - k] = t_[cols_ - 1 - k];
        return c;
    }

    bool is_real() const {
        return std::all_of(t_.begin(), t_.end(), [](const cplx& z) { return z.imag() == 0.0; });
    }

    bool is_square() const noexcept { return rows_ == cols_; }

    /// Same entries and policy, with a caller-supplied cev already in place.
    Toeplitz with_cev(Vector cev) const {
        Toeplitz r = rebuild(t_, false);
        std::call_once(r.cache_->once, [&] {
            r.cache_->values = std::move(cev);
            r.cache_->ready.store(true, std::memory_order_release);
        });
        return r;
    }

    /// New value with the given diagonals and this value's policy.
    Toeplitz rebuild(Vector t, bool allow_eager = true) const {
        return rebuild(rows_, cols_, std::move(t), allow_eager);
    }

    Toeplitz rebuild(std::size_t rows, std::size_t cols, Vector t, bool allow_eager = true) const {
        Config cfg;
        cfg.embedding = embedding_;
        cfg.toeprem = eager_ && allow_eager;
        Toeplitz r(rows, cols, std::move(t), cfg);
        r.eager_ = eager_;
        return r;
    }

    friend bool operator==(const Toeplitz& a, const Toeplitz& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.t_ == b.t_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    Vector t_;
    Embedding embedding_;
    bool eager_;
    std::shared_ptr<detail::CevCache> cache_;
};

// ---------------------------------------------------------------------------
// construction

/// Toeplitz matrix with the given first column and first row.
inline Toeplitz toeplitz(const Vector& col, const Vector& row, const Config& cfg = config_get()) {
    if (col.empty() || row.empty()) throw InvalidArgument("toeplitz: empty operand");
    if (col[0] != row[0])
        throw InvalidArgument("toeplitz: first column and first row disagree on the diagonal entry");
    const std::size_t m = col.size(), n = row.size();
    Vector t(m + n - 1);
    for (std::size_t k = 1; k < n; ++k) t[n - 1 - k] = row[k];
    for (std::size_t k = 0; k < m; ++k) t[n - 1 + k] = col[k];
    return Toeplitz(m, n, std::move(t), cfg);
}

/// Hermitian Toeplitz matrix from its first column (row = conj(col)).
inline Toeplitz toeplitz(const Vector& col, const Config& cfg = config_get()) {
    if (col.empty()) throw InvalidArgument("toeplitz: empty operand");
    if (col[0].imag() != 0.0) detail::warn(cfg, "toeplitz: diagonal entry is not real, result is not Hermitian");
    Vector row(col.size());
    row[0] = col[0];
    for (std::size_t k = 1; k < col.size(); ++k) row[k] = col[k].imag() == 0 ? col[k] : std::conj(col[k]);
    return toeplitz(col, row, cfg);
}

inline Vector embed(const Toeplitz& T, Embedding policy) {
    return T.embedding_column(embedding_size(policy, T.rows(), T.cols()));
}

/// Returns T with its embedding eigenvalues computed.  Idempotent.
inline Toeplitz toeprem(const Toeplitz& T) {
    (void)T.cev();
    return T;
}

inline DenseMatrix full(const Toeplitz& T) {
    DenseMatrix A(T.rows(), T.cols());
    for (std::size_t i = 0; i < T.rows(); ++i)
        for (std::size_t j = 0; j < T.cols(); ++j) A(i, j) = T(i, j);
    return A;
}

/// A circulant is Toeplitz with t_d = c_{d mod n}.
inline Toeplitz to_toeplitz(const Circulant& C, const Config& cfg = config_get()) {
    const std::size_t n = C.dim();
    Vector t(2 * n - 1);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = C.col()[(k + 1) % n];
    return Toeplitz(n, n, std::move(t), cfg);
}

// ---------------------------------------------------------------------------
// fast products

/// y = T x via the embedding: pad x to N, multiply by the circulant, keep
/// the first m entries.  Two transforms once cev is cached.
inline Vector matvec(const Toeplitz& T, std::span<const cplx> x) {
    if (x.size() != T.cols())
        throw DimensionError("toeplitz matvec: vector length " + std::to_string(x.size()) +
                             " does not match column count " + std::to_string(T.cols()));
    const Vector& cev = T.cev();
    Vector xp(cev.size());
    std::copy(x.begin(), x.end(), xp.begin());
    Vector y = dft(xp);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= cev[k];
    y = idft(y);
    y.resize(T.rows());
    return y;
}

inline Vector operator*(const Toeplitz& T, const Vector& x) { return matvec(T, x); }

inline DenseMatrix operator*(const Toeplitz& T, const DenseMatrix& M) {
    if (M.rows() != T.cols()) throw DimensionError("mtimes: inner dimensions disagree");
    DenseMatrix R(T.rows(), M.cols());
    for (std::size_t j = 0; j < M.cols(); ++j) R.set_column(j, matvec(T, M.column(j)));
    return R;
}

/// The product of Toeplitz matrices is not Toeplitz in general: dense result.
inline DenseMatrix operator*(const Toeplitz& T, const Toeplitz& S) { return T * full(S); }
inline DenseMatrix operator*(const Toeplitz& T, const Circulant& C) { return T * full(C); }
inline DenseMatrix operator*(const Circulant& C, const Toeplitz& T) { return C * full(T); }

// ---------------------------------------------------------------------------
// structure-preserving arithmetic

namespace detail {

inline void require_same_shape(const Toeplitz& a, const Toeplitz& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError(std::string(op) + ": Toeplitz shapes differ");
}

} // namespace detail

inline Toeplitz transpose(const Toeplitz& T, bool conjugate = false) {
    Vector t(T.t().rbegin(), T.t().rend());
    if (conjugate)
        for (cplx& z : t) z = std::conj(z);
    Toeplitz R = T.rebuild(T.cols(), T.rows(), std::move(t), false);
    if (!T.has_cev()) return T.eager() ? toeprem(R) : R;
    // the embedding of T^T is the transpose of the embedding of T
    const Vector& ev = T.cev();
    const std::size_t N = ev.size();
    Vector cev(N);
    for (std::size_t k = 0; k < N; ++k) cev[k] = conjugate ? std::conj(ev[k]) : ev[(N - k) % N];
    return R.with_cev(std::move(cev));
}

inline DenseMatrix operator*(const DenseMatrix& M, const Toeplitz& T) {
    if (M.cols() != T.rows()) throw DimensionError("mtimes: inner dimensions disagree");
    return transpose(transpose(T) * transpose(M));
}

inline Toeplitz operator+(const Toeplitz& T, const Toeplitz& S) {
    detail::require_same_shape(T, S, "plus");
    Vector t = T.t() + S.t();
    if (T.has_cev() && S.has_cev() && T.cev().size() == S.cev().size())
        return T.rebuild(std::move(t), false).with_cev(T.cev() + S.cev());
    return T.rebuild(std::move(t));
}

inline Toeplitz operator*(cplx alpha, const Toeplitz& T) {
    Toeplitz R = T.rebuild(alpha * T.t(), false);
    if (T.has_cev()) return R.with_cev(alpha * T.cev());
    return T.eager() ? toeprem(R) : R;
}

inline Toeplitz operator*(const Toeplitz& T, cplx alpha) { return alpha * T; }
inline Toeplitz operator-(const Toeplitz& T) { return cplx(-1.0) * T; }
inline Toeplitz operator-(const Toeplitz& T, const Toeplitz& S) { return T + (-S); }

inline Toeplitz operator+(const Toeplitz& T, cplx s) {
    Vector t = T.t();
    for (cplx& z : t) z += s;
    return T.rebuild(std::move(t));
}

inline Toeplitz operator+(cplx s, const Toeplitz& T) { return T + s; }
inline Toeplitz operator-(const Toeplitz& T, cplx s) { return T + (-s); }
inline Toeplitz operator-(cplx s, const Toeplitz& T) { return (-T) + s; }

namespace detail {
inline Toeplitz as_toeplitz_like(const Circulant& C, const Toeplitz& like) {
    if (!like.is_square() || like.rows() != C.dim())
        throw DimensionError("circulant and Toeplitz operands differ in shape");
    const std::size_t n = C.dim();
    Vector t(2 * n - 1);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = C.col()[(k + 1) % n];
    return like.rebuild(std::move(t), false);
}
} // namespace detail

// circulant + Toeplitz is Toeplitz
inline Toeplitz operator+(const Toeplitz& T, const Circulant& C) { return T + detail::as_toeplitz_like(C, T); }
inline Toeplitz operator+(const Circulant& C, const Toeplitz& T) { return detail::as_toeplitz_like(C, T) + T; }
inline Toeplitz operator-(const Toeplitz& T, const Circulant& C) { return T - detail::as_toeplitz_like(C, T); }
inline Toeplitz operator-(const Circulant& C, const Toeplitz& T) { return detail::as_toeplitz_like(C, T) - T; }

inline Toeplitz times(const Toeplitz& T, const Toeplitz& S) {
    detail::require_same_shape(T, S, "times");
    Vector t(T.t().size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = T.t()[k] * S.t()[k];
    return T.rebuild(std::move(t));
}

inline Toeplitz times(const Toeplitz& T, const Circulant& C) { return times(T, detail::as_toeplitz_like(C, T)); }
inline Toeplitz times(const Circulant& C, const Toeplitz& T) { return times(detail::as_toeplitz_like(C, T), T); }

inline Toeplitz power(const Toeplitz& T, cplx p) {
    Vector t(T.t());
    for (cplx& z : t) z = std::pow(z, p);
    return T.rebuild(std::move(t));
}

inline Toeplitz apply(EntryMap f, const Toeplitz& T) { return T.rebuild(apply(f, T.t())); }

// ---------------------------------------------------------------------------
// triangular parts, diagonals, reductions

enum class Triangle { lower, upper };

/// tril(T, k) keeps j - i <= k; triu(T, k) keeps j - i >= k.
inline Toeplitz tri(const Toeplitz& T, Triangle which, long long k = 0) {
    Vector t = T.t();
    const auto n = static_cast<long long>(T.cols());
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
        const long long d = static_cast<long long>(idx) - (n - 1); // d = i - j
        const bool keep = which == Triangle::lower ? -d <= k : -d >= k;
        if (!keep) t[idx] = 0.0;
    }
    return T.rebuild(std::move(t));
}

inline Toeplitz tril(const Toeplitz& T, long long k = 0) { return tri(T, Triangle::lower, k); }
inline Toeplitz triu(const Toeplitz& T, long long k = 0) { return tri(T, Triangle::upper, k); }
inline Toeplitz tril(const Circulant& C, long long k = 0) { return tril(to_toeplitz(C), k); }
inline Toeplitz triu(const Circulant& C, long long k = 0) { return triu(to_toeplitz(C), k); }

inline Vector diag(const Toeplitz& T, long long k = 0) {
    const auto m = static_cast<long long>(T.rows()), n = static_cast<long long>(T.cols());
    const long long len = k >= 0 ? std::min(m, n - k) : std::min(m + k, n);
    if (len <= 0) return {};
    return Vector(static_cast<std::size_t>(len), T.diagonal(-k));
}

/// Column sums, computed from the diagonals with a running window.
inline Vector sum(const Toeplitz& T) {
    const std::size_t m = T.rows(), n = T.cols();
    Vector prefix(T.t().size() + 1);
    for (std::size_t k = 0; k < T.t().size(); ++k) prefix[k + 1] = prefix[k] + T.t()[k];
    Vector s(n);
    // column j covers t-indices [n-1-j, n-1-j+m)
    for (std::size_t j = 0; j < n; ++j) s[j] = prefix[n - 1 - j + m] - prefix[n - 1 - j];
    return s;
}

inline Vector prod(const Toeplitz& T) {
    const std::size_t m = T.rows(), n = T.cols();
    Vector p(n, cplx(1.0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) p[j] *= T.t()[n - 1 - j + i];
    return p;
}

// ---------------------------------------------------------------------------
// operations with no fast Toeplitz algorithm

inline Toeplitz inv(const Toeplitz&) {
    throw NotSupported("inv: no fast inverse registered for Toeplitz matrices; "
                       "solve systems with left_divide instead");
}

inline cplx det(const Toeplitz&) {
    throw NotSupported("det: no fast determinant registered for Toeplitz matrices; supply a user routine");
}

inline EigenDecomposition eig(const Toeplitz&) {
    throw NotSupported("eig: no fast eigensolver registered for Toeplitz matrices; supply a user routine");
}

} // namespace smt
