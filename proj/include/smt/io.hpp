#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "circulant.hpp"
#include "config.hpp"
#include "dense.hpp"
#include "error.hpp"
#include "operand.hpp"
#include "toeplitz.hpp"

namespace smt {

// Text matrix format.
//
//   smt circulant N          N lines: first column
//   smt toeplitz M N         M+N-1 lines: diagonals t_{1-N} .. t_{M-1}
//   smt dense M N            M*N lines: row-major entries
//   smt vector N             N lines
//
// Every body line is "<re> <im>" printed with %.17g, so doubles survive a
// round trip bit for bit.  Blank lines are not allowed in the body.

using MatrixValue = std::variant<Circulant, Toeplitz, DenseMatrix, Vector>;

namespace detail {

inline void write_entry(std::ostream& os, cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", z.real(), z.imag());
    os << buf;
}

inline void write_entries(std::ostream& os, std::span<const cplx> v) {
    for (const cplx& z : v) write_entry(os, z);
}

inline double parse_double(const char*& p, std::size_t line) {
    while (*p == ' ' || *p == '\t') ++p;
    if (*p == '\0') throw ParseError("expected two numbers", line);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(p, &end);
    if (end == p) throw ParseError("not a number: '" + std::string(p) + "'", line);
    if (errno == ERANGE && (v == HUGE_VAL || v == -HUGE_VAL)) throw ParseError("number out of range", line);
    p = end;
    return v;
}

inline std::size_t parse_dim(const std::string& word, std::size_t line) {
    if (word.empty() || word.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad dimension '" + word + "'", line);
    const unsigned long long v = std::strtoull(word.c_str(), nullptr, 10);
    if (v == 0) throw ParseError("dimension must be positive", line);
    return static_cast<std::size_t>(v);
}

inline Vector read_body(std::istream& is, std::size_t count) {
    Vector out(count);
    std::string text;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t line = k + 2;
        if (!std::getline(is, text))
            throw ParseError("truncated file: expected " + std::to_string(count) + " entries, missing " +
                                 std::to_string(count - k) + " lines",
                             line);
        if (!text.empty() && text.back() == '\r') text.pop_back();
        const char* p = text.c_str();
        const double re = parse_double(p, line);
        const double im = parse_double(p, line);
        while (*p == ' ' || *p == '\t') ++p;
        if (*p != '\0') throw ParseError("trailing characters", line);
        out[k] = {re, im};
    }
    while (std::getline(is, text)) {
        if (text.find_first_not_of(" \t\r") != std::string::npos)
            throw ParseError("extra content after " + std::to_string(count) + " entries", count + 2);
    }
    return out;
}

} // namespace detail

inline void write_matrix(std::ostream& os, const Circulant& C) {
    os << "smt circulant " << C.dim() << '\n';
    detail::write_entries(os, C.col());
}

inline void write_matrix(std::ostream& os, const Toeplitz& T) {
    os << "smt toeplitz " << T.rows() << ' ' << T.cols() << '\n';
    detail::write_entries(os, T.t());
}

inline void write_matrix(std::ostream& os, const DenseMatrix& A) {
    os << "smt dense " << A.rows() << ' ' << A.cols() << '\n';
    detail::write_entries(os, A.data());
}

inline void write_matrix(std::ostream& os, const Vector& v) {
    os << "smt vector " << v.size() << '\n';
    detail::write_entries(os, v);
}

inline void write_matrix(std::ostream& os, const MatrixValue& x) {
    std::visit([&os](const auto& v) { write_matrix(os, v); }, x);
}

/// Reads any of the four kinds.  Toeplitz values take their embedding policy
/// from `cfg`.
inline MatrixValue read_matrix(std::istream& is, const Config& cfg = config_get()) {
    std::string header;
    if (!std::getline(is, header)) throw ParseError("empty file", 1);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::istringstream hs(header);
    std::string magic, kind;
    std::vector<std::string> dims;
    hs >> magic >> kind;
    for (std::string w; hs >> w;) dims.push_back(w);
    if (magic != "smt") throw ParseError("missing 'smt' header", 1);

    auto want_dims = [&](std::size_t k) {
        if (dims.size() != k)
            throw ParseError("'" + kind + "' header needs " + std::to_string(k) + " dimension(s)", 1);
    };
    if (kind == "circulant") {
        want_dims(1);
        const std::size_t n = detail::parse_dim(dims[0], 1);
        return Circulant(detail::read_body(is, n));
    }
    if (kind == "toeplitz") {
        want_dims(2);
        const std::size_t m = detail::parse_dim(dims[0], 1), n = detail::parse_dim(dims[1], 1);
        return Toeplitz(m, n, detail::read_body(is, m + n - 1), cfg);
    }
    if (kind == "dense") {
        want_dims(2);
        const std::size_t m = detail::parse_dim(dims[0], 1), n = detail::parse_dim(dims[1], 1);
        const Vector body = detail::read_body(is, m * n);
        DenseMatrix A(m, n);
        std::copy(body.begin(), body.end(), A.data().begin());
        return A;
    }
    if (kind == "vector") {
        want_dims(1);
        return detail::read_body(is, detail::parse_dim(dims[0], 1));
    }
    throw ParseError("unknown kind '" + kind + "'", 1);
}

inline MatrixValue read_matrix_file(const std::string& path, const Config& cfg = config_get()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return read_matrix(in, cfg);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

inline void write_matrix_file(const std::string& path, const MatrixValue& x) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_matrix(out, x);
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline MatrixValue to_matrix_value(const Operand& x) {
    return std::visit(
        [](const auto& v) -> MatrixValue {
            if constexpr (std::same_as<std::remove_cvref_t<decltype(v)>, cplx>)
                return DenseMatrix(1, 1, v);
            else
                return v;
        },
        x);
}

inline const char* kind_name(const MatrixValue& x) {
    static constexpr const char* names[] = {"circulant", "toeplitz", "dense", "vector"};
    return names[x.index()];
}

} // namespace smt
