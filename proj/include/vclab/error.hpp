#pragma once

#include <stdexcept>
#include <string>

namespace vclab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text: bad rational literal, bad JSON, bad label file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid network description.
class ValidationError : public Error {
public:
    enum class Kind { unknown_id, duplicate_id, cycle, multiple_sinks, unreachable, bad_output, unknown_activation, malformed };

    ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input vector length does not match the network's input count.
class ArityError : public Error {
public:
    using Error::Error;
};

/// Operation not supported for this network (multivariate input, non-linear activation).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A bound's hypothesis is not met, so the bound does not apply.
class ConditionError : public Error {
public:
    using Error::Error;
};

/// Growth bound requested below the regime m >= Lbar*W in which it holds.
class RegimeError : public ConditionError {
public:
    using ConditionError::ConditionError;
};

} // namespace vclab
