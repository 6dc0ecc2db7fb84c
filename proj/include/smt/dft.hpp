#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "dense.hpp"
#include "error.hpp"

namespace smt {

// Transform convention: X_k = sum_j v_j exp(-2 pi i jk / N), forward unscaled,
// inverse scaled by 1/N.  Power-of-two lengths use an iterative radix-2
// kernel; every other length goes through Bluestein's chirp-z reduction to a
// power-of-two convolution.

inline std::size_t next_pow2(std::size_t k) {
    if (k < 1) throw InvalidArgument("next_pow2: argument must be positive");
    return std::bit_ceil(k);
}

inline bool is_pow2(std::size_t k) noexcept { return std::has_single_bit(k); }

namespace detail {

struct FftPlan {
    std::size_t n = 0;
    // radix-2: twiddle[k] = exp(-2 pi i k / n), k < n/2
    std::vector<cplx> twiddle;
    // Bluestein: chirp[k] = exp(-i pi k^2 / n); kernel_hat = dft of the
    // wrapped conjugate chirp at the padded length
    std::vector<cplx> chirp;
    std::vector<cplx> kernel_hat;
    std::shared_ptr<const FftPlan> padded;
};

inline std::shared_ptr<const FftPlan> plan_for(std::size_t n);

inline void radix2_inplace(const FftPlan& plan, std::span<cplx> a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < half; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + half] * plan.twiddle[j * step];
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
        }
    }
}

inline void forward_inplace(const FftPlan& plan, std::span<cplx> a);

inline void bluestein_inplace(const FftPlan& plan, std::span<cplx> a) {
    const std::size_t n = plan.n;
    const FftPlan& inner = *plan.padded;
    const std::size_t m = inner.n;
    std::vector<cplx> w(m);
    for (std::size_t k = 0; k < n; ++k) w[k] = a[k] * plan.chirp[k];
    radix2_inplace(inner, w);
    for (std::size_t k = 0; k < m; ++k) w[k] = std::conj(w[k] * plan.kernel_hat[k]);
    radix2_inplace(inner, w); // conj-trick inverse; scaling folded below
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = std::conj(w[k]) * scale * plan.chirp[k];
}

inline void forward_inplace(const FftPlan& plan, std::span<cplx> a) {
    if (plan.n <= 1) return;
    if (plan.padded)
        bluestein_inplace(plan, a);
    else
        radix2_inplace(plan, a);
}

inline std::shared_ptr<const FftPlan> build_plan(std::size_t n) {
    auto plan = std::make_shared<FftPlan>();
    plan->n = n;
    if (is_pow2(n)) {
        plan->twiddle.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double theta = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
            plan->twiddle[k] = {std::cos(theta), std::sin(theta)};
        }
        return plan;
    }
    const std::size_t m = next_pow2(2 * n - 1);
    plan->padded = plan_for(m);
    plan->chirp.resize(n);
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
        // reduce k^2 mod 2n before scaling so the angle stays exact
        const std::uint64_t kk = (static_cast<std::uint64_t>(k) * k) % two_n;
        const double theta = -std::numbers::pi * static_cast<double>(kk) / static_cast<double>(n);
        plan->chirp[k] = {std::cos(theta), std::sin(theta)};
    }
    plan->kernel_hat.assign(m, cplx{});
    plan->kernel_hat[0] = std::conj(plan->chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        plan->kernel_hat[k] = std::conj(plan->chirp[k]);
        plan->kernel_hat[m - k] = std::conj(plan->chirp[k]);
    }
    radix2_inplace(*plan->padded, plan->kernel_hat);
    return plan;
}

// Plans are immutable once built; each thread keeps its own cache.
inline std::shared_ptr<const FftPlan> plan_for(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (cache.size() >= 64) cache.clear();
    auto plan = build_plan(n);
    cache.emplace(n, plan);
    return plan;
}

} // namespace detail

/// Forward DFT, unscaled.
inline Vector dft(std::span<const cplx> v) {
    if (v.empty()) throw InvalidArgument("dft: empty operand");
    Vector out(v.begin(), v.end());
    detail::forward_inplace(*detail::plan_for(out.size()), out);
    return out;
}

/// Inverse DFT, scaled by 1/N.
inline Vector idft(std::span<const cplx> v) {
    if (v.empty()) throw InvalidArgument("idft: empty operand");
    Vector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::conj(v[k]);
    detail::forward_inplace(*detail::plan_for(out.size()), out);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (cplx& z : out) z = std::conj(z) * scale;
    return out;
}

/// Normalized Fourier matrix, F(i,j) = exp(2 pi i ij / n) / sqrt(n).
inline DenseMatrix fourier_matrix(std::size_t n) {
    if (n < 1) throw InvalidArgument("fourier_matrix: order must be positive");
    DenseMatrix F(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t e = (i * j) % n;
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n);
            F(i, j) = {s * std::cos(theta), s * std::sin(theta)};
        }
    return F;
}

} // namespace smt
