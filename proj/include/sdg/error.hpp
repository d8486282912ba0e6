#pragma once

#include <stdexcept>
#include <string>

namespace sdg {

enum class ErrorCode {
  FractureNotAligned,
  EmptyDomain,
  InvalidDomain,
  NotStarShaped,
  NonConformingMesh,
  OrientationUnset,
  SingularK,
  SingularSystem,
  NonFinite,
  AllZeroIndicators,
  NoExactSolution,
  InvalidArgument,
  IoError,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure family.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sdg
