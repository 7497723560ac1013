#pragma once

#include <stdexcept>
#include <string>

namespace tsk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Mismatched dimensions between operands.
struct ShapeError : Error {
    using Error::Error;
};

// A requested allocation or index space exceeds the supported range.
struct SizeError : Error {
    using Error::Error;
};

// An invalid sketch or experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// An index outside its valid range.
struct IndexError : Error {
    using Error::Error;
};

// Semantically invalid input data (zero vector, non-orthonormal basis, ...).
struct InputError : Error {
    using Error::Error;
};

// Malformed text input; messages carry the offending line number.
struct ParseError : Error {
    using Error::Error;
};

// A numerically failed computation (e.g. non-positive-definite solve).
struct NumericError : Error {
    using Error::Error;
};

}  // namespace tsk
