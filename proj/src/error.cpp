#include "sdg/error.hpp"

namespace sdg {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FractureNotAligned: return "FractureNotAligned";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::NotStarShaped: return "NotStarShaped";
    case ErrorCode::NonConformingMesh: return "NonConformingMesh";
    case ErrorCode::OrientationUnset: return "OrientationUnset";
    case ErrorCode::SingularK: return "SingularK";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::AllZeroIndicators: return "AllZeroIndicators";
    case ErrorCode::NoExactSolution: return "NoExactSolution";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace sdg
