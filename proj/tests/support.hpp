#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "smt/smt.hpp"

namespace smt::test {

using EMat = Eigen::MatrixXcd;
using EVec = Eigen::VectorXcd;

inline EMat to_eigen(const DenseMatrix& A) {
    EMat M(static_cast<Eigen::Index>(A.rows()), static_cast<Eigen::Index>(A.cols()));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = A(i, j);
    return M;
}

inline EVec to_eigen(const Vector& v) {
    EVec e(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
    return e;
}

inline Vector from_eigen(const EVec& e) {
    Vector v(static_cast<std::size_t>(e.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = e(static_cast<Eigen::Index>(i));
    return v;
}

inline DenseMatrix from_eigen(const EMat& M) {
    DenseMatrix A(static_cast<std::size_t>(M.rows()), static_cast<std::size_t>(M.cols()));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) A(i, j) = M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return A;
}

/// Textbook O(n^2) transform, same sign convention as dft().
inline Vector naive_dft(const Vector& v, int sign = -1) {
    const std::size_t n = v.size();
    Vector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx s{};
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % n) / static_cast<double>(n);
            s += v[j] * std::polar(1.0, angle);
        }
        out[k] = s;
    }
    return out;
}

/// Circulant built entry by entry from its first column.
inline DenseMatrix naive_circulant(const Vector& col) {
    const std::size_t n = col.size();
    DenseMatrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = col[(i + n - j) % n];
    return A;
}

/// Toeplitz built entry by entry from t_{1-n} .. t_{m-1}.
inline DenseMatrix naive_toeplitz(std::size_t m, std::size_t n, const Vector& t) {
    DenseMatrix A(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) A(i, j) = t[i + n - 1 - j];
    return A;
}

inline double rel_err(const Vector& a, const Vector& b) {
    const double nb = norm2(b);
    return norm2(a - b) / (nb == 0.0 ? 1.0 : nb);
}

inline double rel_err(const DenseMatrix& a, const DenseMatrix& b) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        diff += std::norm(a.data()[i] - b.data()[i]);
        ref += std::norm(b.data()[i]);
    }
    return std::sqrt(diff) / (ref == 0.0 ? 1.0 : std::sqrt(ref));
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / (std::abs(b) == 0.0 ? 1.0 : std::abs(b)); }

class Random {
public:
    explicit Random(std::uint64_t seed) : engine_(seed) {}

    double real(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    cplx complex() { return {real(), real()}; }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }

    Vector vector(std::size_t n) {
        Vector v(n);
        for (cplx& z : v) z = complex();
        return v;
    }

    Vector real_vector(std::size_t n) {
        Vector v(n);
        for (cplx& z : v) z = real();
        return v;
    }

    DenseMatrix dense(std::size_t m, std::size_t n) {
        DenseMatrix A(m, n);
        for (cplx& z : A.data()) z = complex();
        return A;
    }

    /// Random circulant with eigenvalues bounded away from zero.
    Circulant circulant(std::size_t n) {
        Vector ev(n);
        for (cplx& z : ev) z = std::polar(real(0.5, 2.0), real(0.0, 2.0 * std::numbers::pi));
        return Circulant(idft(ev));
    }

    Toeplitz toeplitz(std::size_t m, std::size_t n, const Config& cfg = {}) { return Toeplitz(m, n, vector(m + n - 1), cfg); }

    /// Diagonally dominant square Toeplitz matrix (all leading minors nonsingular).
    Toeplitz dominant_toeplitz(std::size_t n, bool complex, const Config& cfg = {}) {
        Vector t(2 * n - 1);
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double d = static_cast<double>(k) - static_cast<double>(n - 1);
            const double decay = 1.0 / (1.0 + d * d);
            t[k] = (complex ? this->complex() : cplx(real())) * decay;
        }
        t[n - 1] = 4.0 + real(0.0, 1.0);
        return Toeplitz(n, n, std::move(t), cfg);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

inline Config config_with(Embedding e, bool toeprem = true) {
    Config cfg;
    cfg.embedding = e;
    cfg.toeprem = toeprem;
    return cfg;
}

} // namespace smt::test
