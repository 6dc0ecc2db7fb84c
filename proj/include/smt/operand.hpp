#pragma once

#include <concepts>
#include <cstddef>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "circulant.hpp"
#include "config.hpp"
#include "dense.hpp"
#include "error.hpp"
#include "toeplitz.hpp"

namespace smt {

// Mixed-class arithmetic follows one rule: the result belongs to the less
// structured operand class, ordered scalar < circulant < toeplitz < dense.
// Same-class and scalar combinations that keep their structure are defined
// next to their types; this header adds the dense promotions and a
// runtime-tagged Operand for code that only knows the class at run time.

using Operand = std::variant<cplx, Circulant, Toeplitz, DenseMatrix>;

enum class Kind { scalar = 0, circulant = 1, toeplitz = 2, dense = 3 };

inline Kind kind_of(const Operand& x) { return static_cast<Kind>(x.index()); }

inline const char* to_string(Kind k) {
    switch (k) {
    case Kind::scalar: return "scalar";
    case Kind::circulant: return "circulant";
    case Kind::toeplitz: return "toeplitz";
    case Kind::dense: return "dense";
    }
    return "?";
}

inline Kind promote(Kind a, Kind b) { return a < b ? b : a; }

inline bool is_circulant(const Operand& x) { return kind_of(x) == Kind::circulant; }
inline bool is_toeplitz(const Operand& x) { return kind_of(x) == Kind::toeplitz; }

template <class T>
concept Scalar = std::convertible_to<T, cplx> && std::is_arithmetic_v<std::remove_cvref_t<T>> ||
                 std::same_as<std::remove_cvref_t<T>, cplx>;

template <class T>
concept StructuredOrDense = std::same_as<T, Circulant> || std::same_as<T, Toeplitz> || std::same_as<T, DenseMatrix>;

// ---------------------------------------------------------------------------
// dense promotions

inline std::pair<std::size_t, std::size_t> shape(const Circulant& C) { return {C.dim(), C.dim()}; }
inline std::pair<std::size_t, std::size_t> shape(const Toeplitz& T) { return {T.rows(), T.cols()}; }
inline std::pair<std::size_t, std::size_t> shape(const DenseMatrix& A) { return {A.rows(), A.cols()}; }

inline DenseMatrix full(const DenseMatrix& A) { return A; }

namespace detail {

template <class A>
DenseMatrix dense_like(const A& a, std::size_t rows, std::size_t cols) {
    if constexpr (Scalar<A>) {
        return DenseMatrix(rows, cols, cplx(a));
    } else {
        if (shape(a) != std::pair{rows, cols}) throw DimensionError("operands differ in shape");
        return full(a);
    }
}

template <class A, class B>
std::pair<std::size_t, std::size_t> common_shape(const A& a, const B& b) {
    if constexpr (Scalar<A>)
        return shape(b);
    else
        return shape(a);
}

template <class F>
DenseMatrix zip(const DenseMatrix& a, const DenseMatrix& b, F f) {
    DenseMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = f(a.data()[i], b.data()[i]);
    return r;
}

template <class A, class B>
concept DensePair = (std::same_as<A, DenseMatrix> && (StructuredOrDense<B> || Scalar<B>)) ||
                    (std::same_as<B, DenseMatrix> && (StructuredOrDense<A> || Scalar<A>));

} // namespace detail

template <class A, class B>
    requires detail::DensePair<A, B>
DenseMatrix operator+(const A& a, const B& b) {
    const auto [r, c] = detail::common_shape(a, b);
    return detail::zip(detail::dense_like(a, r, c), detail::dense_like(b, r, c), std::plus<>{});
}

template <class A, class B>
    requires detail::DensePair<A, B>
DenseMatrix operator-(const A& a, const B& b) {
    const auto [r, c] = detail::common_shape(a, b);
    return detail::zip(detail::dense_like(a, r, c), detail::dense_like(b, r, c), std::minus<>{});
}

/// Entrywise product.
template <class A, class B>
    requires detail::DensePair<A, B>
DenseMatrix times(const A& a, const B& b) {
    const auto [r, c] = detail::common_shape(a, b);
    return detail::zip(detail::dense_like(a, r, c), detail::dense_like(b, r, c), std::multiplies<>{});
}

inline DenseMatrix operator-(const DenseMatrix& A) { return cplx(-1.0) * A; }

inline DenseMatrix operator*(const DenseMatrix& A, const DenseMatrix& B) { return matmul(A, B); }
inline Vector operator*(const DenseMatrix& A, const Vector& x) { return matvec(A, x); }

// entrywise product with a scalar is scaling
inline Circulant times(const Circulant& C, cplx s) { return s * C; }
inline Circulant times(cplx s, const Circulant& C) { return s * C; }
inline Toeplitz times(const Toeplitz& T, cplx s) { return s * T; }
inline Toeplitz times(cplx s, const Toeplitz& T) { return s * T; }

// ---------------------------------------------------------------------------
// runtime-tagged arithmetic

enum class BinaryOp { plus, minus, times };

namespace detail {

template <class A, class B>
Operand apply_binary(BinaryOp op, const A& a, const B& b) {
    if constexpr (std::same_as<A, cplx> && std::same_as<B, cplx>) {
        switch (op) {
        case BinaryOp::plus: return a + b;
        case BinaryOp::minus: return a - b;
        case BinaryOp::times: return a * b;
        }
    } else {
        switch (op) {
        case BinaryOp::plus: return Operand(a + b);
        case BinaryOp::minus: return Operand(a - b);
        case BinaryOp::times: return Operand(times(a, b));
        }
    }
    throw InvalidArgument("unknown binary operation");
}

} // namespace detail

inline Operand binary(BinaryOp op, const Operand& a, const Operand& b) {
    return std::visit([op](const auto& x, const auto& y) { return detail::apply_binary(op, x, y); }, a, b);
}

inline Operand plus(const Operand& a, const Operand& b) { return binary(BinaryOp::plus, a, b); }
inline Operand minus(const Operand& a, const Operand& b) { return binary(BinaryOp::minus, a, b); }
inline Operand times(const Operand& a, const Operand& b) { return binary(BinaryOp::times, a, b); }

inline std::pair<std::size_t, std::size_t> shape(const Operand& x) {
    return std::visit(
        [](const auto& v) -> std::pair<std::size_t, std::size_t> {
            if constexpr (std::same_as<std::remove_cvref_t<decltype(v)>, cplx>)
                return {1, 1};
            else
                return shape(v);
        },
        x);
}

inline DenseMatrix full(const Operand& x) {
    return std::visit(
        [](const auto& v) -> DenseMatrix {
            if constexpr (std::same_as<std::remove_cvref_t<decltype(v)>, cplx>)
                return DenseMatrix(1, 1, v);
            else
                return full(v);
        },
        x);
}

// ---------------------------------------------------------------------------
// subscripted reference (1-based, inclusive ranges)

class IndexSpec {
public:
    static IndexSpec all() { return IndexSpec(true, {}); }

    static IndexSpec range(std::size_t first, std::size_t last) {
        if (first < 1 || last < first) throw InvalidArgument("index range must satisfy 1 <= first <= last");
        std::vector<std::size_t> v;
        for (std::size_t k = first; k <= last; ++k) v.push_back(k);
        return IndexSpec(false, std::move(v));
    }

    static IndexSpec list(std::vector<std::size_t> indices) {
        if (indices.empty()) throw InvalidArgument("empty index list");
        return IndexSpec(false, std::move(indices));
    }

    static IndexSpec at(std::size_t i) { return list({i}); }

    /// 0-based positions within an extent, validated.
    std::vector<std::size_t> resolve(std::size_t extent) const {
        std::vector<std::size_t> out;
        if (all_) {
            for (std::size_t k = 0; k < extent; ++k) out.push_back(k);
            return out;
        }
        for (std::size_t k : one_based_) {
            if (k < 1 || k > extent)
                throw InvalidArgument("index " + std::to_string(k) + " out of range 1.." + std::to_string(extent));
            out.push_back(k - 1);
        }
        return out;
    }

private:
    IndexSpec(bool all, std::vector<std::size_t> v) : all_(all), one_based_(std::move(v)) {}

    bool all_;
    std::vector<std::size_t> one_based_;
};

namespace detail {

inline bool contiguous(const std::vector<std::size_t>& v) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] != v[k - 1] + 1) return false;
    return true;
}

template <class M>
DenseMatrix gather(const M& A, const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
    DenseMatrix R(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) R(i, j) = A(r[i], c[j]);
    return R;
}

// diagonals t_{r0-c0+d}, d = 1-q .. p-1, of a contiguous p x q block
template <class M>
Vector block_diagonals(const M& A, std::size_t r0, std::size_t c0, std::size_t p, std::size_t q) {
    Vector t(p + q - 1);
    for (std::size_t j = q; j-- > 1;) t[q - 1 - j] = A(r0, c0 + j);
    for (std::size_t i = 0; i < p; ++i) t[q - 1 + i] = A(r0 + i, c0);
    return t;
}

} // namespace detail

/// C(rows, cols): a single entry gives a scalar, the full index set gives the
/// circulant itself, contiguous ranges give a Toeplitz block, anything else
/// a dense matrix.
inline Operand index(const Circulant& C, const IndexSpec& rows, const IndexSpec& cols,
                     const Config& cfg = config_get()) {
    const auto r = rows.resolve(C.dim()), c = cols.resolve(C.dim());
    if (r.size() == 1 && c.size() == 1) return C(r[0], c[0]);
    const bool cr = detail::contiguous(r), cc = detail::contiguous(c);
    if (cr && cc && r.size() == C.dim() && c.size() == C.dim() && r[0] == 0 && c[0] == 0) return C;
    if (cr && cc)
        return Toeplitz(r.size(), c.size(), detail::block_diagonals(C, r[0], c[0], r.size(), c.size()), cfg);
    return detail::gather(C, r, c);
}

inline Operand index(const Toeplitz& T, const IndexSpec& rows, const IndexSpec& cols) {
    const auto r = rows.resolve(T.rows()), c = cols.resolve(T.cols());
    if (r.size() == 1 && c.size() == 1) return T(r[0], c[0]);
    if (detail::contiguous(r) && detail::contiguous(c))
        return T.rebuild(r.size(), c.size(), detail::block_diagonals(T, r[0], c[0], r.size(), c.size()));
    return detail::gather(T, r, c);
}

} // namespace smt
