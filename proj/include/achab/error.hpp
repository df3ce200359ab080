#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace achab {

enum class ErrorCode {
  ZeroInput,
  NotAUnit,
  NonSeparableReduction,
  PrimeMismatch,
  DivergentSubstitution,
  IndistinguishableFromZero,
  PrecisionLoss,
  PrecisionExceeded,
  NotSymmetric,
  ShapeMismatch,
  UnsupportedFamily,
  BadReduction,
  PoleOnDisc,
  DifferentDiscs,
  EndpointRestriction,
  MissingIncidence,
  NeedsOverride,
  NotTransversal,
  InvalidProblem,
  NotOnCurve,
  ParseError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace achab
