#pragma once

#include <stdexcept>
#include <string>

namespace irlscut {

enum class ErrorCode {
  // input errors
  ParseError,
  IoError,
  EmptyGraph,
  NonPositiveCapacity,
  DisconnectedGraph,
  SourceEqualsSink,
  InvalidLabeling,
  InvalidParams,
  BlockCountExceedsNodes,
  DimensionMismatch,
  TooLargeForEnumeration,
  // solver errors
  ZeroPivot,
  PreconditionerDimensionMismatch,
  BreakdownNonSpd,
  PatternChanged,
  DegenerateClustering,
  ZeroOptimum,
  // internal
  InvariantViolation,
};

enum class ErrorCategory { Input, Solver, Internal };

const char* error_code_name(ErrorCode code) noexcept;
ErrorCategory error_category(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return error_category(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

}  // namespace irlscut
