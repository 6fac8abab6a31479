#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cactus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Binary series operation on operands truncated at different orders.
class OrderMismatch : public Error {
public:
    using Error::Error;
};

/// Grammar text could not be parsed. Carries a 1-based line/column.
class GrammarSyntaxError : public Error {
public:
    GrammarSyntaxError(const std::string& what, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A grammar, Omega set or family specification failed static validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Fixed-point iteration did not stabilise.
class IllFoundedError : public Error {
public:
    using Error::Error;
};

/// A computed table violates integrality or non-negativity.
class SemanticsError : public Error {
public:
    using Error::Error;
};

/// A brute-force size guard was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Operation requires a (connected) cactus graph.
class NotCactusError : public Error {
public:
    using Error::Error;
};

/// Graph-labeled tree is malformed or violates a characterization.
class InvalidTreeError : public Error {
public:
    using Error::Error;
};

/// Requested size has no object in the family.
class ZeroCountError : public Error {
public:
    using Error::Error;
};

}  // namespace cactus
