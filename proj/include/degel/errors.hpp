#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace degel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument is outside the documented domain of an operation.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A stencil was requested at a node whose neighborhood leaves the mask.
class StencilError : public Error {
public:
    using Error::Error;
};

/// An operator that needs a nonzero gradient was evaluated at zero.
class DegenerateGradientError : public Error {
public:
    using Error::Error;
};

/// Floating-point overflow or a non-finite intermediate value.
class NumericError : public Error {
public:
    using Error::Error;
};

/// The pseudo-time iteration left the admissible amplitude band.
class BlowUpError : public Error {
public:
    using Error::Error;
};

/// Ordering or consistency requirement between inputs is violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed. Carries the 1-based line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace degel
