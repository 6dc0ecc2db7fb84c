#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smt {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad argument values: unknown tags, empty operands, out-of-range indices.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// Operation intentionally has no implementation for this operand class.
class NotSupported : public Error {
public:
    using Error::Error;
};

/// Numerical failures: singular operators, recursion breakdown, rank loss.
class NumericalError : public Error {
public:
    using Error::Error;
};

class SingularError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BreakdownError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RankDeficientError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UnderdeterminedError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed matrix or config file. `line()` is 1-based, 0 when unknown.
class ParseError : public IoError {
public:
    ParseError(const std::string& what, std::size_t line)
        : IoError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace smt
