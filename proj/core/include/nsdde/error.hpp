#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsdde {

enum class ErrorKind {
    InvalidRange,
    NonDivisibleStep,
    IncompatibleFactor,
    DimensionMismatch,
    NonFiniteState,
    IncompatibleGrids,
    IncompatibleNoise,
    DegenerateSampling,
    UnknownName,
};

const char* to_string(ErrorKind kind);

/// Library-wide exception. Every failure path in the core library throws
/// this type; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the scheme when a state entry becomes NaN or infinite.
class NonFiniteStateError : public Error {
public:
    explicit NonFiniteStateError(std::int64_t step);

    /// Grid index l of the first non-finite value X(t_l).
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

}  // namespace nsdde
