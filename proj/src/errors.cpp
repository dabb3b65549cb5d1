#include "polarity/errors.hpp"

namespace polarity {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::OverflowRisk: return "OverflowRisk";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnitViolation: return "UnitViolation";
    case ErrorCode::SignConditionViolation: return "SignConditionViolation";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::WindowError: return "WindowError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace polarity
