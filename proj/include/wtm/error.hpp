#pragma once

#include <stdexcept>
#include <string>

namespace wtm {

/// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t < 0, r <= 0, lambda <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (invalid profile nodes, bad parameters).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A weight |x|^{-delta} with delta >= N is not integrable at the origin.
class DivergentWeightError : public Error {
public:
    using Error::Error;
};

/// The input is degenerate for the requested construction (zero profile, ||grad u|| in {0, 1}).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A precondition on parameters failed, e.g. a supercritical alpha handed to an optimizer.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace wtm
