#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace smt {

using cplx = std::complex<double>;

/// Dense column vector of complex entries.
using Vector = std::vector<cplx>;

/// Row-major dense matrix of complex entries.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, cplx fill = {})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major)
        : rows_(rows), cols_(cols), data_(std::move(row_major)) {
        if (data_.size() != rows_ * cols_)
            throw DimensionError("dense matrix: entry count does not match " +
                                 std::to_string(rows_) + "x" + std::to_string(cols_));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> data() noexcept { return data_; }
    std::span<const cplx> data() const noexcept { return data_; }

    Vector column(std::size_t j) const {
        Vector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void set_column(std::size_t j, std::span<const cplx> c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

// ---------------------------------------------------------------------------
// norms and small helpers

inline double norm2(std::span<const cplx> v) {
    double scale = 0.0, ssq = 1.0;
    for (const cplx& z : v) {
        for (double a : {std::abs(z.real()), std::abs(z.imag())}) {
            if (a == 0.0) continue;
            if (scale < a) {
                ssq = 1.0 + ssq * (scale / a) * (scale / a);
                scale = a;
            } else {
                ssq += (a / scale) * (a / scale);
            }
        }
    }
    return scale * std::sqrt(ssq);
}

inline double norm_inf(std::span<const cplx> v) {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

inline double frobenius(const DenseMatrix& A) { return norm2(A.data()); }

inline bool all_finite(std::span<const cplx> v) {
    return std::all_of(v.begin(), v.end(), [](const cplx& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline Vector ones(std::size_t n) { return Vector(n, cplx(1.0)); }

inline Vector unit_vector(std::size_t n, std::size_t k) {
    Vector e(n);
    e.at(k) = 1.0;
    return e;
}

inline void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vector operator-(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector subtraction: length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vector operator+(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("vector addition: length mismatch");
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vector operator*(cplx s, const Vector& a) {
    Vector r(a);
    for (cplx& z : r) z *= s;
    return r;
}

// ---------------------------------------------------------------------------
// dense arithmetic (the unstructured class)

inline DenseMatrix operator*(cplx s, const DenseMatrix& A) {
    DenseMatrix B(A);
    for (cplx& z : B.data()) z *= s;
    return B;
}

inline DenseMatrix operator*(const DenseMatrix& A, cplx s) { return s * A; }

inline DenseMatrix transpose(const DenseMatrix& A, bool conjugate = false) {
    DenseMatrix B(A.cols(), A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j)
            B(j, i) = conjugate ? std::conj(A(i, j)) : A(i, j);
    return B;
}

inline Vector matvec(const DenseMatrix& A, std::span<const cplx> x) {
    if (x.size() != A.cols())
        throw DimensionError("dense matvec: inner dimensions disagree");
    Vector y(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows())
        throw DimensionError("dense product: inner dimensions disagree");
    DenseMatrix C(A.rows(), B.cols());
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) {
            const cplx a = A(i, k);
            if (a == cplx{}) continue;
            for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += a * B(k, j);
        }
    return C;
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline Vector lu_solve(DenseMatrix A, Vector b) {
    const std::size_t n = A.rows();
    if (A.cols() != n) throw DimensionError("lu_solve: matrix is not square");
    if (b.size() != n) throw DimensionError("lu_solve: right-hand side length mismatch");

    double scale = 0.0;
    for (const cplx& z : A.data()) scale = std::max(scale, std::abs(z));

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
        if (std::abs(A(p, k)) <= 1e-14 * scale || scale == 0.0)
            throw SingularError("lu_solve: matrix is singular to working precision");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(k, j), A(p, j));
            std::swap(b[k], b[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx l = A(i, k) / A(k, k);
            if (l == cplx{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= l * A(k, j);
            b[i] -= l * b[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        cplx s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * b[j];
        b[k] = s / A(k, k);
    }
    return b;
}

/// Least-squares solution of a tall system by Householder QR.
///
/// Throws RankDeficientError when the estimated condition number of A*A
/// (squared ratio of extreme |r_kk| after column pivoting) exceeds
/// `max_normal_cond`.
inline Vector qr_lstsq(DenseMatrix A, Vector b, double max_normal_cond = 1e14) {
    const std::size_t m = A.rows(), n = A.cols();
    if (b.size() != m) throw DimensionError("qr_lstsq: right-hand side length mismatch");
    if (m < n) throw UnderdeterminedError("qr_lstsq: system is underdetermined");

    std::vector<std::size_t> perm(n);
    for (std::size_t j = 0; j < n; ++j) perm[j] = j;
    std::vector<double> colnorm(n);

    for (std::size_t k = 0; k < n; ++k) {
        // column pivoting on the norms of the trailing subcolumns
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += std::norm(A(i, j));
            colnorm[j] = s;
        }
        std::size_t p = k;
        for (std::size_t j = k + 1; j < n; ++j)
            if (colnorm[j] > colnorm[p]) p = j;
        if (p != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(A(i, k), A(i, p));
            std::swap(colnorm[k], colnorm[p]);
            std::swap(perm[k], perm[p]);
        }

        double alpha = 0.0;
        for (std::size_t i = k; i < m; ++i) alpha += std::norm(A(i, k));
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        const cplx akk = A(k, k);
        const cplx phase = akk == cplx{} ? cplx(1.0) : akk / std::abs(akk);
        Vector v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = A(i, k);
        v[0] += phase * alpha;
        const double vnorm2 = std::real(dot(v, v));

        for (std::size_t j = k; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += std::conj(v[i - k]) * A(i, j);
            s *= 2.0 / vnorm2;
            for (std::size_t i = k; i < m; ++i) A(i, j) -= s * v[i - k];
        }
        cplx s = 0.0;
        for (std::size_t i = k; i < m; ++i) s += std::conj(v[i - k]) * b[i];
        s *= 2.0 / vnorm2;
        for (std::size_t i = k; i < m; ++i) b[i] -= s * v[i - k];

    }

    double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        rmax = std::max(rmax, std::abs(A(k, k)));
        rmin = std::min(rmin, std::abs(A(k, k)));
    }
    if (rmax == 0.0 || (rmax / rmin) * (rmax / rmin) > max_normal_cond)
        throw RankDeficientError("qr_lstsq: matrix is rank deficient");

    Vector z(n);
    for (std::size_t k = n; k-- > 0;) {
        cplx s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A(k, j) * z[j];
        z[k] = s / A(k, k);
    }
    Vector x(n);
    for (std::size_t k = 0; k < n; ++k) x[perm[k]] = z[k];
    return x;
}

} // namespace smt
