#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace esp {

enum class ErrorCode {
  EvenModulus,
  NilpotentS,
  ZeroDivisorS,
  NotInvertible,
  RingMismatch,
  DimensionMismatch,
  BadIndices,
  NonZeroDet,
  RowConditionFailed,
  AlphabetViolation,
  StepVerificationFailed,
  StepBudgetExceeded,
  UnsupportedBlock,
  NotE2Witnessed,
  NoRuleFound,
  ExponentTooSmall,
  NotHomotopy,
  CoverNotComaximal,
  CoverExponentTooSmall,
  LocalWordMismatch,
  ParseError,
  Unsupported,
};

std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace esp
