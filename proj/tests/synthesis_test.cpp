// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

using namespace trajforge;
using namespace trajforge::testing;

namespace {

std::vector<Trajectory> corpus_of(int household, int shopping) {
  std::vector<Trajectory> out;
  for (int i = 0; i < household; ++i) {
    out.push_back(synthetic_trajectory("h" + std::to_string(1000 + i), TaskKind::household, 1.0, 0));
  }
  for (int i = 0; i < shopping; ++i) {
    out.push_back(synthetic_trajectory("s" + std::to_string(1000 + i), TaskKind::shopping, 1.0, 0));
  }
  return out;
}

std::multiset<std::string> ids(const std::vector<Trajectory>& v) {
  std::multiset<std::string> out;
  for (const auto& t : v) out.insert(t.instruction.id);
  return out;
}

// Policy that answers with a fixed reply.
class FixedPolicy : public Policy {
 public:
  explicit FixedPolicy(ReactPair reply) : reply_(std::move(reply)) {}
  ReactPair decide(const PolicyContext&) const override { return reply_; }
  Json identity() const override { return Json{{"kind", "fixed"}}; }

 private:
  ReactPair reply_;
};

class MalformedPolicy : public Policy {
 public:
  ReactPair decide(const PolicyContext&) const override { return parse_react_or_throw("no template here"); }
  Json identity() const override { return Json{{"kind", "malformed"}}; }
};

// Teacher that rejects everything and proposes an action that does nothing.
class UselessTeacher : public Teacher {
 public:
  Verdict judge(const TaskInstruction&, const std::vector<Step>&, const ReactPair&,
                const std::string&) const override {
    return VerdictError{"bad", "bad", "bad", "dance"};
  }
  Json identity() const override { return Json{{"kind", "useless"}}; }
};

class MumblingTeacher : public Teacher {
 public:
  Verdict judge(const TaskInstruction&, const std::vector<Step>&, const ReactPair&,
                const std::string&) const override {
    return parse_verdict("hmm, maybe");
  }
  Json identity() const override { return Json{{"kind", "mumbling"}}; }
};

}  // namespace

TEST(Split, CountsPerKind) {
  const auto [d1, d2] = split_dataset(corpus_of(10, 8), 0.5, 1);
  int h = 0, s = 0;
  for (const auto& t : d1) (t.instruction.task_kind == TaskKind::household ? h : s) += 1;
  EXPECT_EQ(h, 5);
  EXPECT_EQ(s, 4);
  EXPECT_EQ(d2.size(), 9u);
}

TEST(Split, RoundHalfToEven) {
  EXPECT_EQ(split_size(0.5, 3119), 1560u);
  EXPECT_EQ(split_size(0.5, 7), 4u);
  EXPECT_EQ(split_size(0.5, 5), 2u);
  EXPECT_EQ(split_size(0.5, 1016), 508u);
}

TEST(Split, DisjointCoveringDeterministic) {
  const auto golden = corpus_of(31, 12);
  const auto [a1, a2] = split_dataset(golden, 0.5, 77);
  const auto [b1, b2] = split_dataset(golden, 0.5, 77);
  EXPECT_EQ(a1, b1);
  EXPECT_EQ(a2, b2);
  auto all = ids(a1);
  for (const auto& id : ids(a2)) {
    EXPECT_EQ(all.count(id), 0u);
    all.insert(id);
  }
  EXPECT_EQ(all, ids(golden));
  const auto [c1, c2] = split_dataset(golden, 0.5, 78);
  EXPECT_NE(ids(a1), ids(c1));
}

TEST(Split, InputOrderDoesNotMatter) {
  auto golden = corpus_of(9, 9);
  const auto [a1, a2] = split_dataset(golden, 0.5, 5);
  std::reverse(golden.begin(), golden.end());
  const auto [b1, b2] = split_dataset(golden, 0.5, 5);
  EXPECT_EQ(a1, b1);
}

TEST(Split, Errors) {
  EXPECT_THROW(split_dataset({}, 0.5, 1), Error);
  EXPECT_THROW(split_dataset(corpus_of(2, 2), 1.0, 1), Error);
  try {
    split_dataset(corpus_of(4, 0), 0.5, 1, {TaskKind::household, TaskKind::shopping});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_task);
  }
}

TEST(Synthesize, NoisyWithOracleOnVase) {
  const auto task = vase_task();
  const NoisyPolicy policy({3, 0.4, ErrorKind::wrong_location});
  const OracleTeacher teacher;
  const auto t = synthesize_one(task, policy, teacher);
  EXPECT_TRUE(validate_trajectory(t).empty());
  EXPECT_GE(t.error_count(), 1u);
  EXPECT_EQ(t.reward, 1.0);
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    if (!t.steps[k].delta) {
      ASSERT_LT(k + 1, t.steps.size());
      EXPECT_EQ(t.steps[k + 1].origin, StepOrigin::teacher_correction);
    }
  }
}

TEST(Synthesize, ZeroRateMatchesGolden) {
  const auto task = vase_task();
  const auto t = synthesize_one(task, NoisyPolicy({3, 0.0, ErrorKind::wrong_location}), OracleTeacher());
  const auto g = golden_trajectory(task);
  ASSERT_EQ(t.steps.size(), g.steps.size());
  for (std::size_t k = 0; k < g.steps.size(); ++k) {
    EXPECT_EQ(t.steps[k].action, g.steps[k].action);
    EXPECT_EQ(t.steps[k].observation, g.steps[k].observation);
    EXPECT_TRUE(t.steps[k].delta);
  }
  EXPECT_EQ(t.error_count(), 0u);
  EXPECT_EQ(t.reward, 1.0);
}

TEST(Synthesize, StepLimit) {
  const auto t = synthesize_one(vase_task(2), ScriptedPolicy(), OracleTeacher());
  EXPECT_EQ(t.termination, Termination::step_limit);
  EXPECT_EQ(t.reward, 0.0);
  EXPECT_EQ(t.steps.size(), 2u);
  EXPECT_TRUE(validate_trajectory(t).empty());
}

TEST(Synthesize, CorrectionsCountAgainstBudget) {
  // Every step is wrong, so the budget runs out on an erroneous step.
  const auto t = synthesize_one(vase_task(3), NoisyPolicy({1, 1.0, ErrorKind::wrong_location}), OracleTeacher());
  EXPECT_EQ(t.steps.size(), 3u);
  EXPECT_EQ(t.termination, Termination::step_limit);
  EXPECT_FALSE(t.steps.back().delta);
  EXPECT_TRUE(validate_trajectory(t).empty());
}

TEST(Synthesize, ContextLimit) {
  auto task = vase_task(30, 1);
  task.context_budget = static_cast<int>(system_prompt(TaskKind::household, false).size() +
                                         task.instruction_text.size() + 10);
  const auto t = synthesize_one(task, ScriptedPolicy(), OracleTeacher());
  EXPECT_EQ(t.termination, Termination::context_limit);
  EXPECT_EQ(t.reward, 0.0);
  EXPECT_EQ(t.steps.size(), 1u);
}

TEST(Synthesize, FormatFailureAborts) {
  const auto r = run_episode(vase_task(), MalformedPolicy(), nullptr, default_env_factory());
  EXPECT_EQ(r.trajectory.termination, Termination::aborted);
  EXPECT_EQ(r.trajectory.reward, 0.0);
  EXPECT_TRUE(r.trajectory.steps.empty());
  ASSERT_EQ(r.incidents.size(), 1u);
}

TEST(Synthesize, UncorrectedErrorCap) {
  const UselessTeacher teacher;
  const auto r = run_episode(vase_task(), ScriptedPolicy(), &teacher, default_env_factory());
  EXPECT_EQ(r.trajectory.termination, Termination::aborted);
  EXPECT_EQ(r.trajectory.steps.size(), 6u);  // three errors, three failed corrections
  EXPECT_TRUE(validate_trajectory(r.trajectory).empty());
}

TEST(Synthesize, UnparseableVerdictLeavesStepUnmarked) {
  const MumblingTeacher teacher;
  const auto r = run_episode(vase_task(), ScriptedPolicy(), &teacher, default_env_factory());
  EXPECT_EQ(r.trajectory.reward, 1.0);
  EXPECT_EQ(r.trajectory.error_count(), 0u);
  EXPECT_EQ(r.incidents.size(), r.trajectory.steps.size());
}

TEST(Synthesize, DeterministicReplay) {
  const auto tasks = small_corpus(8, 10, 6);
  const NoisyPolicy policy({3, 0.4, ErrorKind::wrong_object});
  const OracleTeacher teacher;
  const auto a = run_batch(tasks, policy, &teacher, default_env_factory(), {}, 1);
  const auto b = run_batch(tasks, policy, &teacher, default_env_factory(), {}, 4);
  ASSERT_EQ(a.episodes.size(), b.episodes.size());
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    EXPECT_EQ(dump_line(trajectory_to_json(a.episodes[i].trajectory)),
              dump_line(trajectory_to_json(b.episodes[i].trajectory)));
  }
}

TEST(Synthesize, BatchRecordsFailures) {
  auto tasks = small_corpus(2, 2, 0);
  tasks.push_back(vase_task());
  tasks.back().task_kind = TaskKind::science_stub;
  tasks.back().id = "aaa-science";
  const auto b = run_batch(tasks, ScriptedPolicy(), nullptr, default_env_factory(), {}, 2);
  EXPECT_EQ(b.episodes.size(), 2u);
  ASSERT_EQ(b.failures.size(), 1u);
  EXPECT_EQ(b.failures[0].id, "aaa-science");
  EXPECT_EQ(b.failures[0].code, "ConfigError");
}

TEST(Filter, HouseholdCap) {
  std::vector<Trajectory> v;
  for (int e = 0; e <= 3; ++e) v.push_back(synthetic_trajectory("h" + std::to_string(e), TaskKind::household, 1.0, e));
  const auto kept = filter_self_reflected(v, default_error_caps());
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].error_count(), 1u);
  EXPECT_EQ(kept[1].error_count(), 2u);
}

TEST(Filter, ShoppingCapAndReward) {
  const std::vector<Trajectory> v = {synthetic_trajectory("s2", TaskKind::shopping, 1.0, 2),
                                     synthetic_trajectory("s1", TaskKind::shopping, 1.0, 1),
                                     synthetic_trajectory("h1", TaskKind::household, 0.8, 1)};
  const auto kept = filter_self_reflected(v, default_error_caps());
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].instruction.id, "s1");
}

TEST(Filter, MissingThreshold) {
  const std::vector<Trajectory> v = {synthetic_trajectory("s", TaskKind::shopping, 1.0, 1)};
  try {
    filter_self_reflected(v, {{TaskKind::household, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_threshold);
  }
}
