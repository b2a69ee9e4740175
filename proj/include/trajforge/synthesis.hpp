// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trajforge/envs.hpp"
#include "trajforge/parallel.hpp"
#include "trajforge/policy.hpp"
#include "trajforge/task_generator.hpp"
#include "trajforge/teacher.hpp"
#include "trajforge/transcript.hpp"

namespace trajforge {

// ---------------------------------------------------------------------------
// Dataset split.

/// Number of items that go to the first part: fraction * count, ties to even.
inline std::size_t split_size(double fraction, std::size_t count) {
  return static_cast<std::size_t>(std::nearbyint(fraction * static_cast<double>(count)));
}

/// Per task kind, a seeded uniform sample of split_size(fraction, count)
/// trajectories goes to the first part and the rest to the second. Both parts
/// are returned in id order. `required` lists kinds that must be present;
/// empty means every kind that occurs.
inline std::pair<std::vector<Trajectory>, std::vector<Trajectory>> split_dataset(
    const std::vector<Trajectory>& golden, double fraction, std::uint64_t seed,
    const std::vector<TaskKind>& required = {}) {
  if (!(fraction > 0.0 && fraction < 1.0)) fail(ErrorCode::config, "split fraction must lie in (0, 1)");
  if (golden.empty()) fail(ErrorCode::empty_task, "no golden trajectories to split");

  std::map<TaskKind, std::vector<const Trajectory*>> by_kind;
  for (const auto& t : golden) by_kind[t.instruction.task_kind].push_back(&t);
  for (auto kind : required) {
    if (by_kind[kind].empty()) {
      fail(ErrorCode::empty_task, "task kind '" + std::string(to_string(kind)) + "' has no trajectories");
    }
  }

  std::vector<Trajectory> first, second;
  for (auto& [kind, group] : by_kind) {
    if (group.empty()) continue;
    std::sort(group.begin(), group.end(),
              [](const Trajectory* a, const Trajectory* b) { return a->instruction.id < b->instruction.id; });
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(kind) + 1));
    for (std::size_t i = group.size(); i > 1; --i) std::swap(group[i - 1], group[rng.below(i)]);
    const auto k = split_size(fraction, group.size());
    for (std::size_t i = 0; i < group.size(); ++i) (i < k ? first : second).push_back(*group[i]);
  }
  auto by_id = [](const Trajectory& a, const Trajectory& b) { return a.instruction.id < b.instruction.id; };
  std::sort(first.begin(), first.end(), by_id);
  std::sort(second.begin(), second.end(), by_id);
  return {std::move(first), std::move(second)};
}

// ---------------------------------------------------------------------------
// Episodes.

struct EpisodeOptions {
  bool one_shot = false;         // affects the transcript size counted against the budget
  int max_uncorrected_errors = 3;  // consecutive; the episode is aborted when reached
};

struct EpisodeResult {
  Trajectory trajectory;
  std::vector<std::string> incidents;  // format failures, unparseable verdicts, aborts
};

namespace detail {

inline void finish(Trajectory& t, Termination term, double reward) {
  t.termination = term;
  t.reward = forces_zero_reward(term) ? 0.0 : reward;
}

inline bool over_budget(const TaskInstruction& task, const std::vector<Step>& steps, bool one_shot) {
  const auto chars = transcript_chars(build_transcript(task.task_kind, task.instruction_text, steps, one_shot));
  return chars > static_cast<std::size_t>(task.context_budget);
}

}  // namespace detail

/// One interaction episode. With a teacher, every base-policy step is judged
/// after execution; an error marks the step and is followed by the teacher's
/// correction, which is executed and not judged again. Without a teacher this
/// is a plain evaluation rollout. Remote transport failures propagate.
inline EpisodeResult run_episode(const TaskInstruction& task, const Policy& policy,
                                 const Teacher* teacher, const EnvFactory& factory,
                                 const EpisodeOptions& opts = {}) {
  EpisodeResult out;
  auto& traj = out.trajectory;
  traj.instruction = task;
  detail::finish(traj, Termination::step_limit, 0.0);

  auto env = factory(task.task_kind);
  env->reset(task);
  auto& steps = traj.steps;
  int uncorrected = 0;

  auto push = [&](const ReactPair& act, const StepResult& r, bool delta, StepOrigin origin) {
    steps.push_back(Step{static_cast<int>(steps.size()) + 1, act.thought, act.action,
                         r.observation, delta, origin});
  };
  // Returns true when the episode ended at the step just appended.
  auto settle = [&](const StepResult& r) {
    if (detail::over_budget(task, steps, opts.one_shot)) {
      detail::finish(traj, Termination::context_limit, 0.0);
      return true;
    }
    if (r.done) {
      detail::finish(traj, r.reward == 1.0 ? Termination::success : Termination::env_done_partial, r.reward);
      return true;
    }
    return false;
  };

  while (env->step_count() < task.max_steps) {
    ReactPair act;
    try {
      act = policy.decide(make_context(task, steps));
      act.thought = trim(act.thought);
      act.action = trim(act.action);
      render_react(act.thought, act.action);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::malformed_react && e.code() != ErrorCode::invalid_field) throw;
      out.incidents.push_back("step " + std::to_string(steps.size() + 1) + ": format failure: " + e.what());
      detail::finish(traj, Termination::aborted, 0.0);
      return out;
    }

    const auto r = env->step(act.action);
    std::optional<ReactPair> correction;
    bool erroneous = false;
    if (teacher) {
      try {
        const auto v = teacher->judge(task, steps, act, r.observation);
        if (const auto* err = std::get_if<VerdictError>(&v)) {
          try {
            correction = reformat_correction(*err);
            erroneous = true;
          } catch (const Error& e) {
            if (e.code() != ErrorCode::invalid_field) throw;
            out.incidents.push_back("step " + std::to_string(steps.size() + 1) +
                                    ": unusable correction, step left unmarked: " + e.what());
            ++uncorrected;
          }
        } else {
          uncorrected = 0;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::unparseable_verdict) throw;
        out.incidents.push_back("step " + std::to_string(steps.size() + 1) +
                                ": verdict unparseable, step left unmarked: " + e.what());
      }
    }

    push(act, r, !erroneous, StepOrigin::base_policy);
    if (settle(r)) return out;

    if (correction) {
      if (env->step_count() >= task.max_steps) break;
      const auto rc = env->step(correction->action);
      push(*correction, rc, true, StepOrigin::teacher_correction);
      if (settle(rc)) return out;
      if (trim_view(rc.observation) == kNothingHappens) {
        ++uncorrected;
      } else {
        uncorrected = 0;
      }
    }

    if (uncorrected >= opts.max_uncorrected_errors) {
      out.incidents.push_back("aborted after " + std::to_string(uncorrected) +
                              " consecutive uncorrected errors");
      detail::finish(traj, Termination::aborted, 0.0);
      return out;
    }
  }
  detail::finish(traj, Termination::step_limit, 0.0);
  return out;
}

inline Trajectory synthesize_one(const TaskInstruction& task, const Policy& policy, const Teacher& teacher,
                                 const EnvFactory& factory = default_env_factory(),
                                 const EpisodeOptions& opts = {}) {
  return run_episode(task, policy, &teacher, factory, opts).trajectory;
}

// ---------------------------------------------------------------------------
// Filter.

using ErrorCaps = std::map<TaskKind, int>;

inline ErrorCaps default_error_caps() {
  return {{TaskKind::household, 2}, {TaskKind::shopping, 1}, {TaskKind::science_stub, 2}};
}

/// Keeps successful trajectories with between 1 and the kind's cap marked errors.
inline std::vector<Trajectory> filter_self_reflected(const std::vector<Trajectory>& trajs, const ErrorCaps& caps) {
  std::vector<Trajectory> kept;
  for (const auto& t : trajs) {
    const auto cap = caps.find(t.instruction.task_kind);
    if (cap == caps.end()) {
      fail(ErrorCode::missing_threshold,
           "no error cap for task kind '" + std::string(to_string(t.instruction.task_kind)) + "'");
    }
    const auto errors = t.error_count();
    if (t.reward == 1.0 && errors >= 1 && errors <= static_cast<std::size_t>(cap->second)) kept.push_back(t);
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Batch runs.

struct EpisodeFailure {
  std::string id;
  std::string code;
  std::string message;
};

struct BatchResult {
  std::vector<EpisodeResult> episodes;  // sorted by instruction id
  std::vector<EpisodeFailure> failures;  // sorted by instruction id
};

/// Runs every task, `parallelism` at a time. A task whose episode throws is
/// recorded as a failure; the others are unaffected.
inline BatchResult run_batch(const std::vector<TaskInstruction>& tasks, const Policy& policy,
                             const Teacher* teacher, const EnvFactory& factory,
                             const EpisodeOptions& opts, int parallelism) {
  std::vector<std::optional<EpisodeResult>> results(tasks.size());
  std::vector<std::optional<EpisodeFailure>> errors(tasks.size());
  parallel_for(tasks.size(), parallelism, [&](std::size_t i) {
    try {
      results[i] = run_episode(tasks[i], policy, teacher, factory, opts);
    } catch (const Error& e) {
      errors[i] = EpisodeFailure{tasks[i].id, std::string(to_string(e.code())), e.what()};
    }
  });
  BatchResult out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (results[i]) out.episodes.push_back(std::move(*results[i]));
    if (errors[i]) out.failures.push_back(std::move(*errors[i]));
  }
  std::sort(out.episodes.begin(), out.episodes.end(), [](const EpisodeResult& a, const EpisodeResult& b) {
    return a.trajectory.instruction.id < b.trajectory.instruction.id;
  });
  std::sort(out.failures.begin(), out.failures.end(),
            [](const EpisodeFailure& a, const EpisodeFailure& b) { return a.id < b.id; });
  return out;
}

}  // namespace trajforge
