#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "dense.hpp"
#include "error.hpp"

namespace smt {

/// Elementary functions applied entry by entry.  Rounding maps act on the
/// real and imaginary parts separately.
enum class EntryMap { abs, angle, conj, imag, real, round, fix, floor, ceil, sign };

inline constexpr std::array<std::pair<std::string_view, EntryMap>, 10> entry_map_names{{
    {"abs", EntryMap::abs},
    {"angle", EntryMap::angle},
    {"conj", EntryMap::conj},
    {"imag", EntryMap::imag},
    {"real", EntryMap::real},
    {"round", EntryMap::round},
    {"fix", EntryMap::fix},
    {"floor", EntryMap::floor},
    {"ceil", EntryMap::ceil},
    {"sign", EntryMap::sign},
}};

inline EntryMap parse_entry_map(std::string_view name) {
    for (const auto& [n, f] : entry_map_names)
        if (n == name) return f;
    throw InvalidArgument("unknown entrywise function '" + std::string(name) + "'");
}

inline cplx apply(EntryMap f, cplx z) {
    auto parts = [&](double (*g)(double)) { return cplx(g(z.real()), g(z.imag())); };
    switch (f) {
    case EntryMap::abs: return std::abs(z);
    case EntryMap::angle: return std::arg(z);
    case EntryMap::conj: return std::conj(z);
    case EntryMap::imag: return z.imag();
    case EntryMap::real: return z.real();
    case EntryMap::round: return parts([](double x) { return std::round(x); });
    case EntryMap::fix: return parts([](double x) { return std::trunc(x); });
    case EntryMap::floor: return parts([](double x) { return std::floor(x); });
    case EntryMap::ceil: return parts([](double x) { return std::ceil(x); });
    case EntryMap::sign: return z == cplx{} ? cplx{} : z / std::abs(z);
    }
    throw InvalidArgument("unknown entrywise function");
}

inline Vector apply(EntryMap f, const Vector& v) {
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = apply(f, v[i]);
    return r;
}

inline DenseMatrix apply(EntryMap f, const DenseMatrix& A) {
    DenseMatrix B(A.rows(), A.cols());
    for (std::size_t i = 0; i < A.data().size(); ++i) B.data()[i] = apply(f, A.data()[i]);
    return B;
}

} // namespace smt
