#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsol {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, inadmissible parameters, bad files.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    enum class Kind { syntax, unknown_function, unknown_identifier };

    ParseError(Kind kind, std::size_t offset, const std::string& what)
        : InputError(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

class EvalError : public Error {
public:
    enum class Kind { unbound_identifier, domain, non_finite };

    EvalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// A mathematical hypothesis required by a construction does not hold
/// (e.g. q does not vanish at a singular endpoint, or a bound clause's
/// condition on h fails).
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Numerical procedure could not deliver (no blow-up where one was required,
/// step underflow, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace tsol
