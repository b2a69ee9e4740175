// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "trajforge/errors.hpp"

namespace trajforge {

using Json = nlohmann::ordered_json;

inline std::string_view trim_view(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

inline std::string trim(std::string_view s) { return std::string(trim_view(s)); }

// ---------------------------------------------------------------------------
// Enumerations and their wire names.

enum class TaskKind { household, shopping, science_stub };

inline constexpr TaskKind kAllTaskKinds[] = {TaskKind::household, TaskKind::shopping,
                                             TaskKind::science_stub};

inline std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::household: return "household";
    case TaskKind::shopping: return "shopping";
    case TaskKind::science_stub: return "science-stub";
  }
  return "?";
}

inline TaskKind task_kind_from_string(std::string_view s) {
  for (auto kind : kAllTaskKinds) {
    if (to_string(kind) == s) return kind;
  }
  fail(ErrorCode::config, "unknown task_kind '" + std::string(s) + "'");
}

enum class StepOrigin { golden, base_policy, teacher_correction };

inline std::string_view to_string(StepOrigin origin) {
  switch (origin) {
    case StepOrigin::golden: return "golden";
    case StepOrigin::base_policy: return "base_policy";
    case StepOrigin::teacher_correction: return "teacher_correction";
  }
  return "?";
}

inline StepOrigin step_origin_from_string(std::string_view s) {
  for (auto o : {StepOrigin::golden, StepOrigin::base_policy, StepOrigin::teacher_correction}) {
    if (to_string(o) == s) return o;
  }
  fail(ErrorCode::config, "unknown step origin '" + std::string(s) + "'");
}

// `aborted` covers format failures and the consecutive-uncorrected-error cap;
// like the two limit reasons it always carries reward 0.
enum class Termination { success, env_done_partial, step_limit, context_limit, aborted };

inline std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::success: return "success";
    case Termination::env_done_partial: return "env_done_partial";
    case Termination::step_limit: return "step_limit";
    case Termination::context_limit: return "context_limit";
    case Termination::aborted: return "aborted";
  }
  return "?";
}

inline Termination termination_from_string(std::string_view s) {
  for (auto t : {Termination::success, Termination::env_done_partial, Termination::step_limit,
                 Termination::context_limit, Termination::aborted}) {
    if (to_string(t) == s) return t;
  }
  fail(ErrorCode::config, "unknown termination '" + std::string(s) + "'");
}

inline bool forces_zero_reward(Termination t) {
  return t == Termination::step_limit || t == Termination::context_limit ||
         t == Termination::aborted;
}

inline bool is_completed(Termination t) {
  return t == Termination::success || t == Termination::env_done_partial;
}

// ---------------------------------------------------------------------------
// Domain types.

struct TaskInstruction {
  std::string id;
  TaskKind task_kind = TaskKind::household;
  std::string instruction_text;
  Json env_config;  // opaque to everything except the matching environment
  int max_steps = 1;
  int context_budget = 1;

  friend bool operator==(const TaskInstruction&, const TaskInstruction&) = default;
};

struct Step {
  int index = 1;
  std::string thought;
  std::string action;
  std::string observation;
  bool delta = true;  // learnable; false marks an erroneous step
  StepOrigin origin = StepOrigin::golden;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Trajectory {
  TaskInstruction instruction;
  std::vector<Step> steps;
  double reward = 0.0;
  Termination termination = Termination::step_limit;

  std::size_t length() const { return steps.size(); }

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.delta ? 0 : 1;
    return n;
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct VerdictCorrect {
  friend bool operator==(const VerdictCorrect&, const VerdictCorrect&) = default;
};

struct VerdictError {
  std::string error_content;
  std::string error_reason;
  std::string reflection;
  std::string corrective_action;

  friend bool operator==(const VerdictError&, const VerdictError&) = default;
};

using Verdict = std::variant<VerdictCorrect, VerdictError>;

inline bool is_correct(const Verdict& v) { return std::holds_alternative<VerdictCorrect>(v); }

inline VerdictError make_error_verdict(std::string content, std::string reason,
                                       std::string reflection, std::string action) {
  VerdictError e{std::move(content), std::move(reason), std::move(reflection),
                 std::move(action)};
  if (trim_view(e.error_content).empty() || trim_view(e.error_reason).empty() ||
      trim_view(e.reflection).empty() || trim_view(e.corrective_action).empty()) {
    fail(ErrorCode::invalid_field, "every field of an error verdict must be non-empty");
  }
  return e;
}

struct DatasetSplit {
  std::vector<Trajectory> all;
  std::vector<Trajectory> d1;
  std::vector<TaskInstruction> d2_instructions;
  std::vector<Trajectory> dr;
};

// ---------------------------------------------------------------------------
// Validation.

inline std::vector<std::string> validate_trajectory(const Trajectory& traj) {
  std::vector<std::string> out;
  const auto& ins = traj.instruction;
  const auto n = traj.steps.size();

  if (ins.max_steps < 1) out.push_back("instruction max_steps must be >= 1");
  if (ins.context_budget < 1) out.push_back("instruction context_budget must be >= 1");
  if (ins.max_steps >= 1 && n > static_cast<std::size_t>(ins.max_steps)) {
    out.push_back("trajectory has " + std::to_string(n) + " steps, above max_steps " +
                  std::to_string(ins.max_steps));
  }
  if (!(traj.reward >= 0.0 && traj.reward <= 1.0)) {
    out.push_back("reward outside [0,1]");
  }
  if (forces_zero_reward(traj.termination) && traj.reward != 0.0) {
    out.push_back("termination " + std::string(to_string(traj.termination)) +
                  " requires reward 0");
  }
  if ((traj.reward == 1.0) != (traj.termination == Termination::success)) {
    out.push_back("reward 1 must coincide with termination success");
  }

  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = traj.steps[k];
    const auto at = "step " + std::to_string(k + 1);
    if (s.index != static_cast<int>(k + 1)) {
      out.push_back(at + " carries index " + std::to_string(s.index));
    }
    if (trim_view(s.thought).empty()) out.push_back(at + " has an empty thought");
    if (trim_view(s.action).empty()) out.push_back(at + " has an empty action");
    if (s.origin == StepOrigin::teacher_correction && !s.delta) {
      out.push_back(at + " is a teacher correction marked erroneous");
    }
    if (s.origin == StepOrigin::golden && !s.delta) {
      out.push_back(at + " is a golden step marked erroneous");
    }
    if (!s.delta && k + 1 < n && traj.steps[k + 1].origin != StepOrigin::teacher_correction) {
      out.push_back("erroneous step " + std::to_string(k + 1) +
                    " is not followed by a teacher correction");
    }
  }
  return out;
}

}  // namespace trajforge
