#include "error.hpp"

namespace irlscut {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NonPositiveCapacity: return "NonPositiveCapacity";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::SourceEqualsSink: return "SourceEqualsSink";
    case ErrorCode::InvalidLabeling: return "InvalidLabeling";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::BlockCountExceedsNodes: return "BlockCountExceedsNodes";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLargeForEnumeration: return "TooLargeForEnumeration";
    case ErrorCode::ZeroPivot: return "ZeroPivot";
    case ErrorCode::PreconditionerDimensionMismatch: return "PreconditionerDimensionMismatch";
    case ErrorCode::BreakdownNonSpd: return "BreakdownNonSpd";
    case ErrorCode::PatternChanged: return "PatternChanged";
    case ErrorCode::DegenerateClustering: return "DegenerateClustering";
    case ErrorCode::ZeroOptimum: return "ZeroOptimum";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroPivot:
    case ErrorCode::PreconditionerDimensionMismatch:
    case ErrorCode::BreakdownNonSpd:
    case ErrorCode::PatternChanged:
    case ErrorCode::DegenerateClustering:
    case ErrorCode::ZeroOptimum:
      return ErrorCategory::Solver;
    case ErrorCode::InvariantViolation:
      return ErrorCategory::Internal;
    default:
      return ErrorCategory::Input;
  }
}

}  // namespace irlscut
