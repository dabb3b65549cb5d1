#ifndef POLARITY_ERRORS_HPP
#define POLARITY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polarity {

enum class ErrorCode {
  InvalidOrder,
  OverflowRisk,
  NoConvergence,
  DomainError,
  UnitViolation,
  SignConditionViolation,
  BracketFailure,
  LinearSolveFailure,
  SolverFailure,
  WindowError,
  ValidationError,
  ParseError,
  IoError,
};

// Single exception type carrying a machine-readable code; the CLI maps
// codes to exit status (config 2, numerics 3, io 4).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

}  // namespace polarity

#endif
