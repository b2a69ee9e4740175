// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "trajforge/core.hpp"

namespace trajforge {

inline constexpr std::string_view kNothingHappens = "Nothing happens.";

struct StepResult {
  std::string observation;
  bool done = false;
  double reward = 0.0;
};

struct PlanStep {
  std::string thought;
  std::string action;

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// Kinds of deterministic mistakes a noisy scripted policy can inject.
enum class ErrorKind { wrong_object, wrong_location, premature_terminal };

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::wrong_object: return "wrong_object";
    case ErrorKind::wrong_location: return "wrong_location";
    case ErrorKind::premature_terminal: return "premature_terminal";
  }
  return "?";
}

inline ErrorKind error_kind_from_string(std::string_view s) {
  for (auto k : {ErrorKind::wrong_object, ErrorKind::wrong_location,
                 ErrorKind::premature_terminal}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::config, "unknown error_kind '" + std::string(s) + "'");
}

/// A text POMDP. The latent state is private to each implementation; callers
/// see only observations, the done flag and the terminal reward.
///
/// Besides reset/step, every built-in simulator also exposes its own oracle:
/// plan() solves the task from the current latent state and
/// corrupt() produces the mistake a noisy policy would make instead of a
/// planned action. Neither mutates the environment.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual TaskKind kind() const = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;

  std::string reset(const TaskInstruction& instruction) {
    if (instruction.task_kind != kind()) {
      fail(ErrorCode::config, "task '" + instruction.id + "' is " +
                                  std::string(to_string(instruction.task_kind)) +
                                  ", environment is " + std::string(to_string(kind())));
    }
    max_steps_ = instruction.max_steps;
    step_count_ = 0;
    done_ = false;
    if (max_steps_ < 1) fail(ErrorCode::config, "task '" + instruction.id + "' has max_steps < 1");
    return do_reset(instruction.env_config);
  }

  StepResult step(std::string_view action) {
    if (done_) fail(ErrorCode::step_after_done, "episode already finished");
    if (step_count_ >= max_steps_) {
      fail(ErrorCode::step_budget_exhausted,
           "step budget of " + std::to_string(max_steps_) + " exhausted");
    }
    ++step_count_;
    auto r = do_step(trim_view(action));
    done_ = r.done;
    return r;
  }

  int step_count() const { return step_count_; }
  int max_steps() const { return max_steps_; }
  bool done() const { return done_; }

  /// Shortest plan that completes the task from the current latent state.
  virtual std::vector<PlanStep> plan() const = 0;

  /// Deterministic mistake in place of `planned_action` in the current state.
  /// Always differs from `planned_action`.
  virtual std::string corrupt(std::string_view planned_action, ErrorKind kind) const = 0;

 protected:
  virtual std::string do_reset(const Json& config) = 0;
  virtual StepResult do_step(std::string_view action) = 0;

 private:
  int max_steps_ = 1;
  int step_count_ = 0;
  bool done_ = false;
};

using EnvFactory = std::function<std::unique_ptr<Environment>(TaskKind)>;

}  // namespace trajforge
