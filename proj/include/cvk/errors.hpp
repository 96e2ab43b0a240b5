#pragma once

#include <stdexcept>
#include <string>

namespace cvk {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Validation,
  NotElliptic,
  LostConvexity,
  MaxNewtonIterations,
  MaxOuterIterations,
  LineSearchStalled,
  SingularSystem,
  Diverged,
  SingularNormalEquations,
  NonConstantK,
  SignMismatch,
  FeasibilityViolated,
  Io,
  Internal,
};

const char* error_code_name(ErrorCode code);

/// Library error type; every failure carries a code plus a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace cvk
