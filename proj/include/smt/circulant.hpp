#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>

#include "dense.hpp"
#include "dft.hpp"
#include "entrywise.hpp"
#include "error.hpp"

namespace smt {

class Circulant;

namespace detail {
struct CirculantAccess {
    // col and ev must already be coherent
    static Circulant make(Vector col, Vector ev);
};
} // namespace detail

/// Circulant matrix of order n, stored as its first column c together with
/// its eigenvalues ev = dft(c).
///
/// C = F diag(ev) F*, so products, powers, inverses and solves reduce to
/// entrywise operations on ev plus at most two transforms.  Values are
/// immutable; every operation returns a new value with a coherent ev.
class Circulant {
public:
    explicit Circulant(Vector col) : col_(std::move(col)) {
        if (col_.empty()) throw InvalidArgument("circulant: empty first column");
        if (!all_finite(col_)) throw InvalidArgument("circulant: non-finite entry in first column");
        ev_ = dft(col_);
    }

    std::size_t dim() const noexcept { return col_.size(); }
    const Vector& col() const noexcept { return col_; }
    const Vector& ev() const noexcept { return ev_; }

    /// Entry (i, j), 0-based: c_{(i-j) mod n}.
    cplx operator()(std::size_t i, std::size_t j) const {
        const std::size_t n = dim();
        return col_[(i + n - j) % n];
    }

    /// Re-derives ev from the first column, discarding accumulated rounding.
    Circulant refresh() const { return Circulant(col_); }

    bool is_real() const {
        return std::all_of(col_.begin(), col_.end(), [](const cplx& z) { return z.imag() == 0.0; });
    }

    static Circulant identity(std::size_t n) { return Circulant(unit_vector(n, 0)); }

    friend bool operator==(const Circulant& a, const Circulant& b) { return a.col_ == b.col_; }

private:
    Circulant() = default;
    friend struct detail::CirculantAccess;

    Vector col_;
    Vector ev_;
};

inline Circulant detail::CirculantAccess::make(Vector col, Vector ev) {
    Circulant c;
    c.col_ = std::move(col);
    c.ev_ = std::move(ev);
    return c;
}

namespace detail {

inline void require_same_dim(const Circulant& a, const Circulant& b, const char* op) {
    if (a.dim() != b.dim())
        throw DimensionError(std::string(op) + ": circulant orders differ (" + std::to_string(a.dim()) +
                             " vs " + std::to_string(b.dim()) + ")");
}

inline Circulant from_spectrum(Vector ev) {
    Vector col = idft(ev);
    return CirculantAccess::make(std::move(col), std::move(ev));
}

inline cplx ipow(cplx z, long long p) {
    if (p < 0) return 1.0 / ipow(z, -p);
    cplx r = 1.0;
    while (p) {
        if (p & 1) r *= z;
        z *= z;
        p >>= 1;
    }
    return r;
}

// Relative spectral singularity test: min|ev| <= 1e-13 max|ev|.
inline void require_nonsingular(const Circulant& C, const char* op) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const cplx& z : C.ev()) {
        lo = std::min(lo, std::abs(z));
        hi = std::max(hi, std::abs(z));
    }
    if (hi == 0.0 || lo <= 1e-13 * hi) throw SingularError(std::string(op) + ": singular circulant");
}

} // namespace detail

inline DenseMatrix full(const Circulant& C) {
    const std::size_t n = C.dim();
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = C.col()[(i + n - j) % n];
    return A;
}

// ---------------------------------------------------------------------------
// structure-preserving arithmetic

inline Circulant operator+(const Circulant& C, const Circulant& D) {
    detail::require_same_dim(C, D, "plus");
    return detail::CirculantAccess::make(C.col() + D.col(), C.ev() + D.ev());
}

inline Circulant operator*(cplx alpha, const Circulant& C) {
    return detail::CirculantAccess::make(alpha * C.col(), alpha * C.ev());
}

inline Circulant operator*(const Circulant& C, cplx alpha) { return alpha * C; }

inline Circulant operator-(const Circulant& C) { return cplx(-1.0) * C; }

inline Circulant operator-(const Circulant& C, const Circulant& D) {
    detail::require_same_dim(C, D, "minus");
    return detail::CirculantAccess::make(C.col() - D.col(), C.ev() - D.ev());
}

/// Adds s to every entry; only the zero-frequency eigenvalue moves (by n s).
inline Circulant operator+(const Circulant& C, cplx s) {
    Vector col = C.col(), ev = C.ev();
    for (cplx& z : col) z += s;
    ev[0] += static_cast<double>(C.dim()) * s;
    return detail::CirculantAccess::make(std::move(col), std::move(ev));
}

inline Circulant operator+(cplx s, const Circulant& C) { return C + s; }
inline Circulant operator-(const Circulant& C, cplx s) { return C + (-s); }
inline Circulant operator-(cplx s, const Circulant& C) { return (-C) + s; }

/// Entrywise (Hadamard) product; the spectrum is recomputed.
inline Circulant times(const Circulant& C, const Circulant& D) {
    detail::require_same_dim(C, D, "times");
    Vector col(C.dim());
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = C.col()[i] * D.col()[i];
    return Circulant(std::move(col));
}

/// Entrywise power.
inline Circulant power(const Circulant& C, cplx p) {
    Vector col(C.col());
    for (cplx& z : col) z = std::pow(z, p);
    return Circulant(std::move(col));
}

inline Circulant apply(EntryMap f, const Circulant& C) { return Circulant(apply(f, C.col())); }

/// Transpose (or conjugate transpose).  Index permutation only: the
/// spectrum is permuted (transpose) or conjugated (ctranspose).
inline Circulant transpose(const Circulant& C, bool conjugate = false) {
    const std::size_t n = C.dim();
    Vector col(n), ev(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx c = C.col()[(n - k) % n];
        col[k] = conjugate ? std::conj(c) : c;
        ev[k] = conjugate ? std::conj(C.ev()[k]) : C.ev()[(n - k) % n];
    }
    return detail::CirculantAccess::make(std::move(col), std::move(ev));
}

// ---------------------------------------------------------------------------
// fast products

/// C x = idft(ev .* dft(x)): two transforms.
inline Vector matvec(const Circulant& C, std::span<const cplx> x) {
    if (x.size() != C.dim())
        throw DimensionError("circulant matvec: vector length " + std::to_string(x.size()) +
                             " does not match order " + std::to_string(C.dim()));
    Vector y = dft(x);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= C.ev()[k];
    return idft(y);
}

inline Vector operator*(const Circulant& C, const Vector& x) { return matvec(C, x); }

inline Circulant operator*(const Circulant& C, const Circulant& D) {
    detail::require_same_dim(C, D, "mtimes");
    Vector ev(C.dim());
    for (std::size_t k = 0; k < ev.size(); ++k) ev[k] = C.ev()[k] * D.ev()[k];
    return detail::from_spectrum(std::move(ev));
}

/// Column-by-column fast product, O(k n log n) for an n x k operand.
inline DenseMatrix operator*(const Circulant& C, const DenseMatrix& M) {
    if (M.rows() != C.dim()) throw DimensionError("mtimes: inner dimensions disagree");
    DenseMatrix R(M.rows(), M.cols());
    for (std::size_t j = 0; j < M.cols(); ++j) R.set_column(j, matvec(C, M.column(j)));
    return R;
}

/// M C computed as (C^T M^T)^T.
inline DenseMatrix operator*(const DenseMatrix& M, const Circulant& C) {
    if (M.cols() != C.dim()) throw DimensionError("mtimes: inner dimensions disagree");
    return transpose(transpose(C) * transpose(M));
}

/// Integer matrix power; negative exponents require a nonsingular C.
inline Circulant pow(const Circulant& C, long long p) {
    if (p < 0) detail::require_nonsingular(C, "mpower");
    if (p == 0) return Circulant::identity(C.dim());
    if (p == 1) return C;
    Vector ev(C.dim());
    for (std::size_t k = 0; k < ev.size(); ++k) ev[k] = detail::ipow(C.ev()[k], p);
    return detail::from_spectrum(std::move(ev));
}

// ---------------------------------------------------------------------------
// division, inverse, spectral functions

enum class Side { left, right };

/// left: x with C x = b.  right: x with x^T C = b^T (C^T x = b, solved with
/// the transposed spectrum).
inline Vector solve(const Circulant& C, std::span<const cplx> b, Side side = Side::left) {
    if (b.size() != C.dim()) throw DimensionError("circulant solve: right-hand side length mismatch");
    detail::require_nonsingular(C, "circulant solve");
    const std::size_t n = C.dim();
    Vector y = dft(b);
    for (std::size_t k = 0; k < n; ++k) y[k] /= side == Side::left ? C.ev()[k] : C.ev()[(n - k) % n];
    return idft(y);
}

inline Vector left_divide(const Circulant& C, const Vector& b) { return solve(C, b, Side::left); }
inline Vector right_divide(const Vector& b, const Circulant& C) { return solve(C, b, Side::right); }

inline Circulant inv(const Circulant& C) {
    detail::require_nonsingular(C, "inv");
    Vector ev(C.dim());
    for (std::size_t k = 0; k < ev.size(); ++k) ev[k] = 1.0 / C.ev()[k];
    return detail::from_spectrum(std::move(ev));
}

/// C \ D
inline Circulant left_divide(const Circulant& C, const Circulant& D) {
    detail::require_same_dim(C, D, "mldivide");
    detail::require_nonsingular(C, "mldivide");
    Vector ev(C.dim());
    for (std::size_t k = 0; k < ev.size(); ++k) ev[k] = D.ev()[k] / C.ev()[k];
    return detail::from_spectrum(std::move(ev));
}

/// C / D (circulants commute, so this equals D \ C)
inline Circulant right_divide(const Circulant& C, const Circulant& D) { return left_divide(D, C); }

inline cplx det(const Circulant& C) {
    cplx d = 1.0;
    for (const cplx& z : C.ev()) d *= z;
    return d;
}

struct EigenDecomposition {
    Vector values;
    DenseMatrix vectors; // columns are eigenvectors
};

/// Eigenvalues are ev; eigenvectors are the columns of the Fourier matrix.
inline EigenDecomposition eig(const Circulant& C) { return {C.ev(), fourier_matrix(C.dim())}; }

// ---------------------------------------------------------------------------
// reductions

/// Column sums; every column holds the same entries, so all equal sum(c).
inline Vector sum(const Circulant& C) {
    const cplx s = std::accumulate(C.col().begin(), C.col().end(), cplx{});
    return Vector(C.dim(), s);
}

inline Vector prod(const Circulant& C) {
    const cplx p = std::accumulate(C.col().begin(), C.col().end(), cplx(1.0), std::multiplies<>{});
    return Vector(C.dim(), p);
}

/// k-th diagonal (k > 0 above, k < 0 below the main diagonal).
inline Vector diag(const Circulant& C, long long k = 0) {
    const auto n = static_cast<long long>(C.dim());
    if (k <= -n || k >= n) return {};
    const auto idx = static_cast<std::size_t>(((-k) % n + n) % n);
    return Vector(static_cast<std::size_t>(n - (k < 0 ? -k : k)), C.col()[idx]);
}

} // namespace smt
