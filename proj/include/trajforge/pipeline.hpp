// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trajforge/config.hpp"
#include "trajforge/eval.hpp"
#include "trajforge/masking.hpp"
#include "trajforge/synthesis.hpp"

namespace trajforge {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2, kExitZeroYield = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::config:
    case ErrorCode::missing_threshold:
    case ErrorCode::empty_task:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<MaskMode> mode;
  bool one_shot = false;
  std::optional<int> parallelism;
  std::optional<std::uint64_t> seed;
  bool sequential = false;
};

inline void apply(Config& cfg, const Overrides& o) {
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.mode) cfg.masking.mode = *o.mode;
  if (o.one_shot) cfg.policy.one_shot = true;
  if (o.parallelism) {
    if (*o.parallelism < 1) fail(ErrorCode::config, "--parallelism must be at least 1");
    cfg.parallelism = *o.parallelism;
  }
  if (o.seed) cfg.override_seeds(*o.seed);
  if (o.sequential) cfg.masking.sequential = true;
}

/// Output file names inside the output directory.
namespace files {
inline constexpr const char* kTasks = "tasks.jsonl";
inline constexpr const char* kGolden = "golden.jsonl";
inline constexpr const char* kD1 = "d1.jsonl";
inline constexpr const char* kD2 = "d2.jsonl";
inline constexpr const char* kSynthesized = "synthesized.jsonl";
inline constexpr const char* kDr = "dr.jsonl";
inline constexpr const char* kFailures = "synth_failures.jsonl";
inline constexpr const char* kIncidents = "synth_incidents.jsonl";
inline constexpr const char* kSynthManifest = "synth_manifest.json";
inline constexpr const char* kTrain = "train.jsonl";
inline constexpr const char* kTrainD1 = "train_d1.jsonl";
inline constexpr const char* kTrainDr = "train_dr.jsonl";
inline constexpr const char* kMaskManifest = "mask_manifest.json";
inline constexpr const char* kEvalTasks = "eval_tasks.jsonl";
inline constexpr const char* kEvalTrajectories = "eval_trajectories.jsonl";
inline constexpr const char* kEvalReport = "eval_report.json";
inline constexpr const char* kEvalTable = "eval_report.txt";
}  // namespace files

inline std::unique_ptr<Policy> make_policy(const PolicyConfig& p, const EnvFactory& factory) {
  switch (p.kind) {
    case PolicyKind::scripted: return std::make_unique<ScriptedPolicy>(factory);
    case PolicyKind::noisy: return std::make_unique<NoisyPolicy>(p.noise, factory);
    case PolicyKind::remote: return std::make_unique<RemotePolicy>(p.endpoint, p.one_shot);
  }
  fail(ErrorCode::config, "unknown policy kind");
}

inline std::unique_ptr<Teacher> make_teacher(const TeacherConfig& t, const EnvFactory& factory) {
  if (t.kind == TeacherKind::remote) return std::make_unique<RemoteTeacher>(t.endpoint);
  return std::make_unique<OracleTeacher>(factory);
}

inline std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

/// Generates the task corpus and its golden trajectories.
inline int cmd_gen(const Config& cfg, std::ostream& log) {
  if (cfg.corpus.household + cfg.corpus.shopping == 0) {
    fail(ErrorCode::config, "empty corpus: [corpus] asks for zero tasks");
  }
  const auto tasks = generate_tasks(cfg.corpus);
  std::vector<Trajectory> golden;
  golden.reserve(tasks.size());
  for (const auto& t : tasks) golden.push_back(golden_trajectory(t));
  write_tasks(cfg.out_dir / files::kTasks, tasks);
  write_trajectories(cfg.out_dir / files::kGolden, golden);
  log << "gen: " << tasks.size() << " tasks and golden trajectories written to " << cfg.out_dir.string() << "\n";
  return kExitOk;
}

/// Splits the golden corpus, synthesizes reflected trajectories on the second
/// part and filters them.
inline int cmd_synth(const Config& cfg, std::ostream& log, const EnvFactory& factory = default_env_factory()) {
  const auto tasks = read_tasks(cfg.out_dir / files::kTasks);
  auto golden = read_trajectories(cfg.out_dir / files::kGolden);
  attach_configs(golden, tasks);

  std::vector<TaskKind> present;
  for (const auto& t : tasks) {
    if (std::find(present.begin(), present.end(), t.task_kind) == present.end()) present.push_back(t.task_kind);
  }
  const auto [d1, d2] = split_dataset(golden, cfg.synthesis.split_fraction, cfg.synthesis.split_seed, present);
  std::vector<TaskInstruction> u2;
  for (const auto& t : d2) u2.push_back(t.instruction);

  const auto policy = make_policy(cfg.policy, factory);
  const auto teacher = make_teacher(cfg.teacher, factory);
  EpisodeOptions opts;
  opts.one_shot = cfg.policy.one_shot;
  opts.max_uncorrected_errors = cfg.synthesis.max_uncorrected_errors;
  auto batch = run_batch(u2, *policy, teacher.get(), factory, opts, cfg.parallelism);

  std::vector<Trajectory> synthesized;
  Json incidents = Json::array();
  for (auto& e : batch.episodes) {
    for (const auto& msg : e.incidents) incidents.push_back(Json{{"id", e.trajectory.instruction.id}, {"incident", msg}});
    synthesized.push_back(std::move(e.trajectory));
  }
  const auto kept = filter_self_reflected(synthesized, cfg.synthesis.max_errors);

  write_trajectories(cfg.out_dir / files::kD1, d1);
  write_trajectories(cfg.out_dir / files::kD2, d2);
  write_trajectories(cfg.out_dir / files::kSynthesized, synthesized);
  write_trajectories(cfg.out_dir / files::kDr, kept);
  write_jsonl(cfg.out_dir / files::kFailures, batch.failures, [](const EpisodeFailure& f) {
    return Json{{"id", f.id}, {"error", f.code}, {"message", f.message}};
  });
  std::string incident_text;
  for (const auto& i : incidents) incident_text += dump_line(i) + "\n";
  write_text_file(cfg.out_dir / files::kIncidents, incident_text);

  std::map<TaskKind, std::array<int, 3>> by_kind;  // synthesized, successful, kept
  for (const auto& t : synthesized) {
    auto& c = by_kind[t.instruction.task_kind];
    c[0] += 1;
    c[1] += t.reward == 1.0 ? 1 : 0;
  }
  for (const auto& t : kept) by_kind[t.instruction.task_kind][2] += 1;
  Json kinds = Json::object();
  for (const auto& [kind, c] : by_kind) {
    kinds[std::string(to_string(kind))] = Json{{"synthesized", c[0]}, {"successful", c[1]}, {"kept", c[2]}};
  }
  Json manifest{{"stage", "synth"},
                {"prompt_assets", std::string(prompts::kAssetVersion)},
                {"config", cfg.to_json()},
                {"policy", policy->identity()},
                {"teacher", teacher->identity()},
                {"counts", Json{{"golden_in", golden.size()},
                                {"d1", d1.size()},
                                {"d2", d2.size()},
                                {"synthesized", synthesized.size()},
                                {"failed", batch.failures.size()},
                                {"kept", kept.size()},
                                {"incidents", incidents.size()},
                                {"by_kind", std::move(kinds)}}}};
  write_text_file(cfg.out_dir / files::kSynthManifest, pretty(manifest));

  log << "synth: " << golden.size() << " golden, d1 " << d1.size() << ", d2 " << d2.size() << ", synthesized "
      << synthesized.size() << ", failed " << batch.failures.size() << ", kept " << kept.size() << "\n";
  for (const auto& f : batch.failures) log << "synth: " << f.id << ": " << f.code << ": " << f.message << "\n";
  if (synthesized.empty() && !batch.failures.empty()) return kExitRuntime;
  if (kept.empty()) {
    log << "synth: no trajectory passed the filter\n";
    return kExitZeroYield;
  }
  return kExitOk;
}

/// Builds the training JSONL from d1 and the reflected set.
inline int cmd_mask(const Config& cfg, std::ostream& log) {
  const auto d1 = read_trajectories(cfg.out_dir / files::kD1);
  const auto dr = read_trajectories(cfg.out_dir / files::kDr);
  const auto samples = assemble_training_set(d1, dr, cfg.masking.seed, cfg.masking.mode);
  write_samples(cfg.out_dir / files::kTrain, samples);

  Json outputs{{"combined", files::kTrain}};
  if (cfg.masking.sequential) {
    write_samples(cfg.out_dir / files::kTrainD1, assemble_training_set(d1, {}, cfg.masking.seed, cfg.masking.mode));
    write_samples(cfg.out_dir / files::kTrainDr, assemble_training_set({}, dr, cfg.masking.seed, cfg.masking.mode));
    outputs["first"] = files::kTrainD1;
    outputs["second"] = files::kTrainDr;
  }
  int masked = 0;
  for (const auto& s : samples) {
    for (const auto& seg : s.segments) masked += seg.role == "assistant" && !seg.learn ? 1 : 0;
  }
  Json manifest{{"stage", "mask"},
                {"prompt_assets", std::string(prompts::kAssetVersion)},
                {"seed", cfg.masking.seed},
                {"reflected_mode", std::string(to_string(cfg.masking.mode))},
                {"counts", Json{{"d1", d1.size()}, {"dr", dr.size()}, {"samples", samples.size()},
                                {"masked_segments", masked}}},
                {"outputs", std::move(outputs)},
                {"retrain_from", "base model, not the stage-one agent"},
                {"recommended_sft", Json{{"batch_size", 32}, {"learning_rate", 3e-5}, {"epochs", 4},
                                         {"schedule", "cosine"}}}};
  write_text_file(cfg.out_dir / files::kMaskManifest, pretty(manifest));
  log << "mask: " << samples.size() << " samples (" << d1.size() << " d1, " << dr.size() << " dr), " << masked
      << " masked segments\n";
  return kExitOk;
}

/// Evaluates the configured policy on the evaluation set.
inline int cmd_eval(const Config& cfg, std::ostream& log, const EnvFactory& factory = default_env_factory()) {
  std::vector<TaskInstruction> tasks;
  if (!cfg.eval.tasks_file.empty()) {
    tasks = read_tasks(cfg.eval.tasks_file);
  } else {
    if (cfg.eval.corpus.household + cfg.eval.corpus.shopping == 0) {
      fail(ErrorCode::config, "empty evaluation set: [eval] asks for zero tasks and names no tasks_file");
    }
    tasks = generate_tasks(cfg.eval.corpus);
    write_tasks(cfg.out_dir / files::kEvalTasks, tasks);
  }
  const auto policy = make_policy(cfg.policy, factory);
  EpisodeOptions opts;
  opts.one_shot = cfg.policy.one_shot;
  auto run = run_eval(*policy, tasks, factory, opts, cfg.parallelism);
  run.report.run_manifest["config"] = cfg.to_json();

  auto report = report_to_json(run.report);
  if (cfg.eval.teacher_benefit) {
    const auto tb = teacher_benefit(tasks, cfg.policy.noise, factory, opts, cfg.parallelism);
    report["teacher_benefit"] = Json{{"noise", NoisyPolicy(cfg.policy.noise, factory).identity()},
                                     {"uncorrected_average", tb.uncorrected_average},
                                     {"corrected_average", tb.corrected_average},
                                     {"n", tb.n},
                                     {"corrected_strictly_higher", tb.strictly_higher()}};
  }
  write_trajectories(cfg.out_dir / files::kEvalTrajectories, run.trajectories);
  write_text_file(cfg.out_dir / files::kEvalReport, pretty(report));
  const auto table = report_table(run.report);
  write_text_file(cfg.out_dir / files::kEvalTable, table);
  log << table;
  for (const auto& f : run.failures) log << "eval: excluded " << f.id << ": " << f.code << ": " << f.message << "\n";
  return kExitOk;
}

}  // namespace trajforge
