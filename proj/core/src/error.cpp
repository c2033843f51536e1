#include "nsdde/error.hpp"

namespace nsdde {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidRange: return "InvalidRange";
        case ErrorKind::NonDivisibleStep: return "NonDivisibleStep";
        case ErrorKind::IncompatibleFactor: return "IncompatibleFactor";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFiniteState: return "NonFiniteState";
        case ErrorKind::IncompatibleGrids: return "IncompatibleGrids";
        case ErrorKind::IncompatibleNoise: return "IncompatibleNoise";
        case ErrorKind::DegenerateSampling: return "DegenerateSampling";
        case ErrorKind::UnknownName: return "UnknownName";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

NonFiniteStateError::NonFiniteStateError(std::int64_t step)
    : Error(ErrorKind::NonFiniteState, "state became non-finite at step " + std::to_string(step)),
      step_(step) {}

}  // namespace nsdde
