#pragma once

#include <stdexcept>
#include <string>

namespace shearwave {

// Failure categories surfaced by the library. The CLI maps them to exit codes:
// config errors -> 2, numerical failures -> 3, spectral preconditions -> 4.
enum class ErrorCode {
  NonMonotonic,
  InsufficientSmoothness,
  OutOfDomain,
  OutOfRange,
  StepFailure,
  NearSingular,
  DegenerateLayer,
  ResonantC,
  ZeroWavenumber,
  ChannelEigenvalue,
  NotApplicable,
  BoundaryRoot,
  MaxRootsExceeded,
  SemicircleViolation,
  LostBranch,
  NoRoot,
  NotMonotone,
  CflViolation,
  SingularElliptic,
  DegenerateRoot,
  SingularModePresent,
  EmptyWindow,
  ConfigError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonMonotonic: return "NonMonotonic";
    case ErrorCode::InsufficientSmoothness: return "InsufficientSmoothness";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NearSingular: return "NearSingular";
    case ErrorCode::DegenerateLayer: return "DegenerateLayer";
    case ErrorCode::ResonantC: return "ResonantC";
    case ErrorCode::ZeroWavenumber: return "ZeroWavenumber";
    case ErrorCode::ChannelEigenvalue: return "ChannelEigenvalue";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::BoundaryRoot: return "BoundaryRoot";
    case ErrorCode::MaxRootsExceeded: return "MaxRootsExceeded";
    case ErrorCode::SemicircleViolation: return "SemicircleViolation";
    case ErrorCode::LostBranch: return "LostBranch";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::NotMonotone: return "NotMonotone";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::SingularElliptic: return "SingularElliptic";
    case ErrorCode::DegenerateRoot: return "DegenerateRoot";
    case ErrorCode::SingularModePresent: return "SingularModePresent";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace shearwave
