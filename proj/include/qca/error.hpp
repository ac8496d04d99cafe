#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed circuit text. `line()` is 1-based; 0 when the error is not tied to a line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A value violates a documented precondition or invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Zero or several transition rules apply where exactly one is required.
class IllFormedError : public Error {
public:
    using Error::Error;
};

/// The program band tried to move past the end of the chain.
class BoundaryOverflowError : public Error {
public:
    using Error::Error;
};

/// A configured size or step limit was exceeded.
class LimitExceededError : public Error {
public:
    using Error::Error;
};

}  // namespace qca
