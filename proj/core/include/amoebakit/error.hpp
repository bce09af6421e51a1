#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace amoebakit {

/// Base of every error raised by the library. `what()` is the verbatim
/// message the CLI prints.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class EmptyPolynomial : public Error {
public:
    EmptyPolynomial() : Error("EmptyPolynomial: all terms cancel") {}
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class OverflowError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SingularPoint : public Error {
public:
    SingularPoint() : Error("SingularPoint: holomorphic Jacobian is rank deficient") {}
};

class NonGenericQuery : public Error {
public:
    using Error::Error;
};

class Unsupported : public Error {
public:
    using Error::Error;
};

} // namespace amoebakit
