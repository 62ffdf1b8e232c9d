#pragma once

#include <stdexcept>
#include <string>

namespace snns {

/// Raised when an input fails a documented precondition (bad shape, bad
/// parameter, non-finite entry).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a construction detects that the data does not satisfy the
/// noise-model assumptions it relies on (empty capture, depth or iteration
/// cap exceeded). Carries a human-readable diagnostic.
class ModelViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on malformed, truncated, or incompatible files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace snns
