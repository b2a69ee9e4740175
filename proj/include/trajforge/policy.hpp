// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "trajforge/chat_client.hpp"
#include "trajforge/envs.hpp"
#include "trajforge/react.hpp"
#include "trajforge/task_generator.hpp"
#include "trajforge/transcript.hpp"

namespace trajforge {

/// What the acting model sees: requirements, instruction and the executed
/// steps so far. `task` gives scripted policies access to the config; remote
/// policies use only the text fields.
struct PolicyContext {
  const TaskInstruction* task = nullptr;
  std::string task_requirements;
  std::string instruction_text;
  std::vector<Step> history;
};

inline PolicyContext make_context(const TaskInstruction& task, std::vector<Step> history = {}) {
  PolicyContext ctx;
  ctx.task = &task;
  ctx.task_requirements = std::string(prompts::task_requirements(task.task_kind));
  ctx.instruction_text = task.instruction_text;
  ctx.history = std::move(history);
  return ctx;
}

class Policy {
 public:
  virtual ~Policy() = default;
  virtual ReactPair decide(const PolicyContext& ctx) const = 0;
  /// Recorded in run manifests.
  virtual Json identity() const = 0;
};

/// Replays the golden plan open-loop. Its position in the plan is the number
/// of its own steps in the history: teacher corrections redo the step the
/// policy got wrong and do not advance the position.
class ScriptedPolicy : public Policy {
 public:
  explicit ScriptedPolicy(EnvFactory factory = default_env_factory())
      : factory_(std::move(factory)) {}

  ReactPair decide(const PolicyContext& ctx) const override {
    const auto plan = golden_plan(task_of(ctx), factory_);
    std::size_t position = 0;
    for (const auto& s : ctx.history) {
      if (s.origin != StepOrigin::teacher_correction) ++position;
    }
    if (position < plan.size()) return {plan[position].thought, plan[position].action};
    return {"I have carried out my whole plan. Let me look around.", "look"};
  }

  Json identity() const override { return Json{{"kind", "scripted"}}; }

 protected:
  static const TaskInstruction& task_of(const PolicyContext& ctx) {
    if (!ctx.task) fail(ErrorCode::config, "scripted policy needs the task config in context");
    return *ctx.task;
  }

  EnvFactory factory_;
};

struct NoiseSchedule {
  std::uint64_t seed = 0;
  double error_rate = 0.0;  // in [0, 1]
  ErrorKind error_kind = ErrorKind::wrong_location;
};

/// Scripted policy that, per step and with probability error_rate, swaps the
/// planned action for the environment's deterministic corruption of it. The
/// draw depends only on (seed, task id, number of executed steps).
class NoisyPolicy : public ScriptedPolicy {
 public:
  explicit NoisyPolicy(NoiseSchedule schedule, EnvFactory factory = default_env_factory())
      : ScriptedPolicy(std::move(factory)), schedule_(schedule) {
    if (!(schedule_.error_rate >= 0.0 && schedule_.error_rate <= 1.0)) {
      fail(ErrorCode::config, "error_rate must lie in [0, 1]");
    }
  }

  ReactPair decide(const PolicyContext& ctx) const override {
    auto planned = ScriptedPolicy::decide(ctx);
    const auto& task = task_of(ctx);
    Rng draw(mix_seed(mix_seed(schedule_.seed, hash_string(task.id)), ctx.history.size()));
    if (!(draw.unit() < schedule_.error_rate)) return planned;

    std::vector<std::string> actions;
    actions.reserve(ctx.history.size());
    for (const auto& s : ctx.history) actions.push_back(s.action);
    const auto env = replay(factory_, task, actions);
    auto wrong = env->corrupt(planned.action, schedule_.error_kind);
    return {"I think the next thing to do is: " + wrong + ".", wrong};
  }

  Json identity() const override {
    return Json{{"kind", "noisy"},
                {"seed", schedule_.seed},
                {"error_rate", schedule_.error_rate},
                {"error_kind", std::string(to_string(schedule_.error_kind))}};
  }

  const NoiseSchedule& schedule() const { return schedule_; }

 private:
  NoiseSchedule schedule_;
};

/// Acting model behind an OpenAI-compatible endpoint.
class RemotePolicy : public Policy {
 public:
  RemotePolicy(ChatEndpoint endpoint, TaskKind kind_hint = TaskKind::household,
               bool one_shot = false)
      : client_(std::move(endpoint)), one_shot_(one_shot), kind_hint_(kind_hint) {}

  explicit RemotePolicy(ChatEndpoint endpoint, bool one_shot)
      : RemotePolicy(std::move(endpoint), TaskKind::household, one_shot) {}

  std::vector<ChatMessage> transcript(const PolicyContext& ctx) const {
    std::vector<ChatMessage> out;
    std::string system = ctx.task_requirements;
    const auto kind = ctx.task ? ctx.task->task_kind : kind_hint_;
    if (one_shot_ && !prompts::one_shot_example(kind).empty()) {
      system += "\n\n";
      system += prompts::one_shot_example(kind);
    }
    out.push_back({"system", std::move(system)});
    out.push_back({"user", ctx.instruction_text});
    for (const auto& s : ctx.history) {
      out.push_back({"assistant", render_react(s.thought, s.action)});
      out.push_back({"user", s.observation});
    }
    return out;
  }

  ReactPair decide(const PolicyContext& ctx) const override {
    return parse_react_or_throw(client_.complete(transcript(ctx)));
  }

  Json identity() const override {
    return Json{{"kind", "remote"},
                {"base_url", client_.endpoint().base_url},
                {"model", client_.endpoint().model},
                {"one_shot", one_shot_}};
  }

 private:
  ChatClient client_;
  bool one_shot_ = false;
  TaskKind kind_hint_;
};

}  // namespace trajforge
