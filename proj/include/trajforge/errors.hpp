// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace trajforge {

enum class ErrorCode {
  config,
  io,
  malformed_react,
  invalid_field,
  step_after_done,
  step_budget_exhausted,
  plan_not_found,
  remote_unavailable,
  unparseable_verdict,
  empty_task,
  missing_threshold,
  duplicate_id,
  positive_log_prob,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::config: return "ConfigError";
    case ErrorCode::io: return "IoError";
    case ErrorCode::malformed_react: return "MalformedReact";
    case ErrorCode::invalid_field: return "InvalidField";
    case ErrorCode::step_after_done: return "StepAfterDone";
    case ErrorCode::step_budget_exhausted: return "StepBudgetExhausted";
    case ErrorCode::plan_not_found: return "PlanNotFound";
    case ErrorCode::remote_unavailable: return "RemoteUnavailable";
    case ErrorCode::unparseable_verdict: return "UnparseableVerdict";
    case ErrorCode::empty_task: return "EmptyTask";
    case ErrorCode::missing_threshold: return "MissingThreshold";
    case ErrorCode::duplicate_id: return "DuplicateId";
    case ErrorCode::positive_log_prob: return "PositiveLogProb";
  }
  return "Error";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the synthesis loop, the CLI exit-code mapping) can branch on kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace trajforge
