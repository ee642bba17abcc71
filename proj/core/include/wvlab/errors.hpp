#pragma once

#include <stdexcept>
#include <string>

namespace wvlab {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

/// Truncated Fock expansion leaves too much weight beyond the cutoff.
struct TailTooHeavy : Error {
    using Error::Error;
};

/// Pre/post selection overlap below the configured floor; the conditional
/// state (a ratio quantity) is numerically meaningless.
struct OrthogonalSelection : Error {
    using Error::Error;
};

struct StepTooLarge : Error {
    using Error::Error;
};

/// Two-body dimension exceeds the desk-scale guard.
struct DimensionGuard : Error {
    using Error::Error;
};

struct ZeroState : Error {
    using Error::Error;
};

struct DegenerateSweep : Error {
    using Error::Error;
};

/// Config file parse or validation failure; message names the field.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace wvlab
