// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trajforge/jsonl.hpp"
#include "trajforge/task_generator.hpp"
#include "trajforge/transcript.hpp"

namespace trajforge {

enum class MaskMode { full, partial_mask };
enum class SampleSource { d1, dr };

inline std::string_view to_string(MaskMode m) { return m == MaskMode::full ? "full" : "partial_mask"; }
inline std::string_view to_string(SampleSource s) { return s == SampleSource::d1 ? "d1" : "dr"; }

inline MaskMode mask_mode_from_string(std::string_view s) {
  if (s == "full") return MaskMode::full;
  if (s == "partial_mask") return MaskMode::partial_mask;
  fail(ErrorCode::config, "unknown mask mode '" + std::string(s) + "' (expected full or partial_mask)");
}

struct Segment {
  std::string role;
  std::string content;
  bool learn = false;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SftSample {
  std::string id;
  SampleSource source = SampleSource::d1;
  TaskKind task_kind = TaskKind::household;
  std::vector<Segment> segments;
  std::vector<int> error_steps;  // 1-based step indices with delta = false

  friend bool operator==(const SftSample&, const SftSample&) = default;
};

/// Transcript segments of `traj`. Only assistant segments can carry loss; in
/// partial_mask mode an assistant segment learns iff its step's delta is set.
inline SftSample build_sft_sample(const Trajectory& traj, MaskMode mode,
                                  SampleSource source = SampleSource::d1) {
  SftSample s;
  s.id = traj.instruction.id;
  s.source = source;
  s.task_kind = traj.instruction.task_kind;
  const auto messages = build_transcript(traj.instruction.task_kind, traj.instruction.instruction_text, traj.steps);
  s.segments.reserve(messages.size());
  std::size_t step = 0;
  for (const auto& m : messages) {
    bool learn = false;
    if (m.role == "assistant") {
      learn = mode == MaskMode::full || traj.steps[step].delta;
      ++step;
    }
    s.segments.push_back(Segment{m.role, m.content, learn});
  }
  for (const auto& st : traj.steps) {
    if (!st.delta) s.error_steps.push_back(st.index);
  }
  return s;
}

/// Summed log-probability of `segment` given every segment before it. Must be <= 0.
using LogProbFn = std::function<double(const std::vector<Segment>& preceding, const Segment& segment)>;

struct LossReport {
  double total = 0.0;
  std::vector<std::pair<std::size_t, double>> per_segment;  // (segment index, contribution)
  int masked_count = 0;  // assistant segments excluded from the loss
};

/// Negative log-likelihood over the learnable assistant segments.
inline LossReport reference_loss(const SftSample& sample, const LogProbFn& logprob_of) {
  LossReport report;
  std::vector<Segment> preceding;
  preceding.reserve(sample.segments.size());
  for (std::size_t i = 0; i < sample.segments.size(); ++i) {
    const auto& seg = sample.segments[i];
    if (seg.role == "assistant" && !seg.learn) ++report.masked_count;
    if (seg.learn) {
      const double lp = logprob_of(preceding, seg);
      if (lp > 0.0) {
        fail(ErrorCode::positive_log_prob,
             "log-probability provider returned " + std::to_string(lp) + " for segment " + std::to_string(i));
      }
      report.per_segment.emplace_back(i, -lp);
      report.total += -lp;
    }
    preceding.push_back(seg);
  }
  return report;
}

/// d1 samples learn everywhere; dr samples use `dr_mode`. The combined list is
/// shuffled with `seed`. Instruction ids must be unique across both inputs.
inline std::vector<SftSample> assemble_training_set(const std::vector<Trajectory>& d1,
                                                    const std::vector<Trajectory>& dr, std::uint64_t seed,
                                                    MaskMode dr_mode = MaskMode::partial_mask) {
  std::vector<SftSample> out;
  out.reserve(d1.size() + dr.size());
  std::set<std::string> ids;
  auto add = [&](const Trajectory& t, MaskMode mode, SampleSource src) {
    if (!ids.insert(t.instruction.id).second) {
      fail(ErrorCode::duplicate_id, "instruction id '" + t.instruction.id + "' appears more than once");
    }
    out.push_back(build_sft_sample(t, mode, src));
  };
  for (const auto& t : d1) add(t, MaskMode::full, SampleSource::d1);
  for (const auto& t : dr) add(t, dr_mode, SampleSource::dr);

  Rng rng(seed);
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

inline Json sample_to_json(const SftSample& s) {
  Json j;
  j["id"] = s.id;
  j["source"] = std::string(to_string(s.source));
  Json msgs = Json::array();
  for (const auto& seg : s.segments) {
    msgs.push_back(Json{{"role", seg.role}, {"content", seg.content}, {"loss", seg.learn}});
  }
  j["messages"] = std::move(msgs);
  j["meta"] = Json{{"error_steps", s.error_steps}};
  return j;
}

inline void write_samples(const std::filesystem::path& path, const std::vector<SftSample>& samples) {
  write_jsonl(path, samples, sample_to_json);
}

}  // namespace trajforge
