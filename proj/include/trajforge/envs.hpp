// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "trajforge/household.hpp"
#include "trajforge/shopping.hpp"

namespace trajforge {

inline std::unique_ptr<Environment> make_environment(TaskKind kind) {
  switch (kind) {
    case TaskKind::household: return std::make_unique<HouseholdEnv>();
    case TaskKind::shopping: return std::make_unique<ShoppingEnv>();
    case TaskKind::science_stub: break;
  }
  fail(ErrorCode::config, "no built-in simulator for task kind science-stub");
}

inline EnvFactory default_env_factory() { return &make_environment; }

/// Fresh environment for `instruction` with `actions` already executed.
inline std::unique_ptr<Environment> replay(const EnvFactory& factory,
                                           const TaskInstruction& instruction,
                                           const std::vector<std::string>& actions) {
  auto env = factory(instruction.task_kind);
  env->reset(instruction);
  for (const auto& a : actions) env->step(a);
  return env;
}

inline std::vector<PlanStep> golden_plan(const TaskInstruction& instruction,
                                         const EnvFactory& factory = default_env_factory()) {
  auto env = factory(instruction.task_kind);
  env->reset(instruction);
  auto plan = env->plan();
  if (plan.empty()) fail(ErrorCode::plan_not_found, "no plan for task '" + instruction.id + "'");
  return plan;
}

/// Executes the golden plan and records it as a golden trajectory.
inline Trajectory golden_trajectory(const TaskInstruction& instruction,
                                    const EnvFactory& factory = default_env_factory()) {
  auto env = factory(instruction.task_kind);
  env->reset(instruction);
  const auto plan = env->plan();
  Trajectory t;
  t.instruction = instruction;
  t.termination = Termination::step_limit;
  for (const auto& p : plan) {
    const auto r = env->step(p.action);
    Step s;
    s.index = static_cast<int>(t.steps.size()) + 1;
    s.thought = p.thought;
    s.action = p.action;
    s.observation = r.observation;
    s.delta = true;
    s.origin = StepOrigin::golden;
    t.steps.push_back(std::move(s));
    if (r.done) {
      t.reward = r.reward;
      t.termination = r.reward == 1.0 ? Termination::success : Termination::env_done_partial;
      break;
    }
  }
  if (t.termination != Termination::success) {
    fail(ErrorCode::plan_not_found, "golden plan for '" + instruction.id + "' does not succeed");
  }
  return t;
}

}  // namespace trajforge
