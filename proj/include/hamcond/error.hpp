#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hamcond {

enum class ErrorCode {
  LoopPresent,
  ParallelPresent,
  DomainError,
  NonConvergence,
  AttemptCapExceeded,
  NotParallelPair,
  NotLoop,
  TargetIsLoop,
  SanitizeStalled,
  PartitionDegenerate,
  TooLarge,
  BudgetExhausted,
  ParseError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure the library signals by exception carries one of the codes
/// above so callers (the CLI, the experiment harness) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hamcond
