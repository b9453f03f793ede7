#pragma once

#include <stdexcept>
#include <string>

namespace handsoff {

enum class ErrorCode {
  kDimension,
  kDomain,
  kParameter,
  kInfeasible,
  kNumerical,
  kAssumption,
  kSize,
};

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when the terminal constraint cannot be met inside the input box.
/// Carries the optimal phase-1 value (sum of artificial slacks).
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double certificate)
      : Error(ErrorCode::kInfeasible, what), certificate_(certificate) {}

  double certificate() const noexcept { return certificate_; }

 private:
  double certificate_;
};

}  // namespace handsoff
