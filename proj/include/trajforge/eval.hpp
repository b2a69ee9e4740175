// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "trajforge/synthesis.hpp"

namespace trajforge {

struct TaskStats {
  double average_reward = 0.0;
  double completion_rate = 0.0;
  int n_instructions = 0;
};

struct EvalReport {
  std::map<TaskKind, TaskStats> per_task;
  double overall_average = 0.0;     // mean of the per-task average rewards
  double pooled_average = 0.0;      // mean over all instructions
  double pooled_completion = 0.0;   // completion rate over all instructions
  int excluded = 0;                 // instructions lost to transport or runtime failures
  Json run_manifest = Json::object();
};

/// Aggregates finished trajectories. Rewards of step- and context-limited
/// runs count as zero whatever the trajectory records.
inline EvalReport summarize(const std::vector<Trajectory>& trajs, int excluded = 0) {
  EvalReport rep;
  rep.excluded = excluded;
  struct Acc {
    double reward = 0.0;
    int completed = 0;
    int n = 0;
  };
  std::map<TaskKind, Acc> acc;
  Acc pooled;
  for (const auto& t : trajs) {
    const double r = forces_zero_reward(t.termination) ? 0.0 : t.reward;
    const int done = is_completed(t.termination) ? 1 : 0;
    for (auto* a : {&acc[t.instruction.task_kind], &pooled}) {
      a->reward += r;
      a->completed += done;
      a->n += 1;
    }
  }
  double column_sum = 0.0;
  for (const auto& [kind, a] : acc) {
    TaskStats s{a.reward / a.n, static_cast<double>(a.completed) / a.n, a.n};
    rep.per_task[kind] = s;
    column_sum += s.average_reward;
  }
  if (!acc.empty()) rep.overall_average = column_sum / static_cast<double>(acc.size());
  if (pooled.n > 0) {
    rep.pooled_average = pooled.reward / pooled.n;
    rep.pooled_completion = static_cast<double>(pooled.completed) / pooled.n;
  }
  return rep;
}

struct EvalRun {
  EvalReport report;
  std::vector<Trajectory> trajectories;
  std::vector<EpisodeFailure> failures;
};

/// Rolls `policy` out on every instruction without a teacher.
inline EvalRun run_eval(const Policy& policy, const std::vector<TaskInstruction>& instructions,
                        const EnvFactory& factory = default_env_factory(), const EpisodeOptions& opts = {},
                        int parallelism = 1) {
  if (instructions.empty()) fail(ErrorCode::empty_task, "no instructions to evaluate");
  auto batch = run_batch(instructions, policy, nullptr, factory, opts, parallelism);
  EvalRun run;
  for (auto& e : batch.episodes) run.trajectories.push_back(std::move(e.trajectory));
  run.failures = std::move(batch.failures);
  run.report = summarize(run.trajectories, static_cast<int>(run.failures.size()));
  run.report.run_manifest = Json{{"policy", policy.identity()},
                                 {"one_shot", opts.one_shot},
                                 {"instructions", instructions.size()}};
  return run;
}

inline Json report_to_json(const EvalReport& rep) {
  Json per = Json::object();
  for (const auto& [kind, s] : rep.per_task) {
    per[std::string(to_string(kind))] = Json{{"average_reward", s.average_reward},
                                             {"completion_rate", s.completion_rate},
                                             {"n_instructions", s.n_instructions}};
  }
  return Json{{"per_task", std::move(per)},
              {"overall_average", rep.overall_average},
              {"pooled_average", rep.pooled_average},
              {"pooled_completion_rate", rep.pooled_completion},
              {"excluded", rep.excluded},
              {"run_manifest", rep.run_manifest}};
}

inline std::string report_table(const EvalReport& rep) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %10s %16s %6s\n", "task", "avg reward", "completion rate", "n");
  out += line;
  int n_total = 0;
  for (const auto& [kind, s] : rep.per_task) {
    std::snprintf(line, sizeof line, "%-14s %10.4f %16.4f %6d\n", std::string(to_string(kind)).c_str(),
                  s.average_reward, s.completion_rate, s.n_instructions);
    out += line;
    n_total += s.n_instructions;
  }
  std::snprintf(line, sizeof line, "%-14s %10.4f %16.4f %6d\n", "overall", rep.overall_average,
                rep.pooled_completion, n_total);
  out += line;
  if (rep.excluded > 0) {
    std::snprintf(line, sizeof line, "excluded: %d\n", rep.excluded);
    out += line;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Teacher-benefit experiment: the same noisy policy with and without oracle
// corrections on the same tasks and seeds.

struct TeacherBenefit {
  double uncorrected_average = 0.0;
  double corrected_average = 0.0;
  int n = 0;
  bool strictly_higher() const { return corrected_average > uncorrected_average; }
};

inline TeacherBenefit teacher_benefit(const std::vector<TaskInstruction>& tasks, const NoiseSchedule& noise,
                                      const EnvFactory& factory = default_env_factory(),
                                      const EpisodeOptions& opts = {}, int parallelism = 1) {
  const NoisyPolicy policy(noise, factory);
  const OracleTeacher teacher(factory);
  auto mean = [](const BatchResult& b) {
    double sum = 0.0;
    for (const auto& e : b.episodes) sum += e.trajectory.reward;
    return b.episodes.empty() ? 0.0 : sum / static_cast<double>(b.episodes.size());
  };
  const auto alone = run_batch(tasks, policy, nullptr, factory, opts, parallelism);
  const auto corrected = run_batch(tasks, policy, &teacher, factory, opts, parallelism);
  return {mean(alone), mean(corrected), static_cast<int>(tasks.size())};
}

}  // namespace trajforge
