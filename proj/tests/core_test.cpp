// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "support.hpp"

using namespace trajforge;
using namespace trajforge::testing;

TEST(Enums, WireNamesRoundTrip) {
  for (auto k : kAllTaskKinds) EXPECT_EQ(task_kind_from_string(to_string(k)), k);
  EXPECT_EQ(to_string(TaskKind::science_stub), "science-stub");
  for (auto t : {Termination::success, Termination::env_done_partial, Termination::step_limit,
                 Termination::context_limit, Termination::aborted}) {
    EXPECT_EQ(termination_from_string(to_string(t)), t);
  }
  EXPECT_THROW(task_kind_from_string("kitchen"), Error);
}

TEST(Verdict, ErrorFieldsMustBeFilled) {
  EXPECT_NO_THROW(make_error_verdict("a", "b", "c", "d"));
  EXPECT_THROW(make_error_verdict("a", " ", "c", "d"), Error);
}

TEST(ValidateTrajectory, GoldenIsValid) {
  EXPECT_TRUE(validate_trajectory(golden_trajectory(vase_task())).empty());
}

TEST(ValidateTrajectory, ReflectedShapeIsValid) {
  EXPECT_TRUE(validate_trajectory(synthetic_trajectory("x", TaskKind::household, 1.0, 2)).empty());
}

TEST(ValidateTrajectory, ErrorWithoutCorrection) {
  auto t = synthetic_trajectory("x", TaskKind::household, 1.0, 1);
  t.steps[1].origin = StepOrigin::base_policy;
  const auto v = validate_trajectory(t);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "erroneous step 1 is not followed by a teacher correction");
}

TEST(ValidateTrajectory, RewardRules) {
  auto t = synthetic_trajectory("x", TaskKind::household, 1.0, 0);
  t.termination = Termination::step_limit;
  EXPECT_FALSE(validate_trajectory(t).empty());
  t.reward = 0.0;
  EXPECT_TRUE(validate_trajectory(t).empty());
  t.termination = Termination::success;
  EXPECT_FALSE(validate_trajectory(t).empty());
  t.termination = Termination::context_limit;
  t.reward = 0.4;
  EXPECT_FALSE(validate_trajectory(t).empty());
}

TEST(ValidateTrajectory, StepCountAndIndices) {
  auto t = synthetic_trajectory("x", TaskKind::household, 1.0, 0, 3);
  t.instruction.max_steps = 2;
  EXPECT_FALSE(validate_trajectory(t).empty());
  t.instruction.max_steps = 3;
  t.steps[2].index = 7;
  EXPECT_FALSE(validate_trajectory(t).empty());
}

TEST(ValidateTrajectory, CorrectionsAreNeverMarked) {
  auto t = synthetic_trajectory("x", TaskKind::household, 1.0, 1);
  t.steps[1].delta = false;
  EXPECT_FALSE(validate_trajectory(t).empty());
}

TEST(Jsonl, TaskRoundTrip) {
  const auto t = vase_task();
  EXPECT_EQ(task_from_json(task_to_json(t)), t);
}

TEST(Jsonl, TrajectorySchemaAndRoundTrip) {
  const auto g = golden_trajectory(vase_task());
  const auto j = trajectory_to_json(g);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "task_kind", "instruction", "max_steps", "context_budget",
                                            "reward", "termination", "steps"}));
  std::vector<std::string> step_keys;
  for (auto it = j["steps"][0].begin(); it != j["steps"][0].end(); ++it) step_keys.push_back(it.key());
  EXPECT_EQ(step_keys, (std::vector<std::string>{"i", "thought", "action", "observation", "delta", "origin"}));

  auto back = trajectory_from_json(Json::parse(dump_line(j)));
  back.instruction.env_config = g.instruction.env_config;
  EXPECT_EQ(back, g);
}

TEST(Jsonl, FilesAndAttachConfigs) {
  TempDir dir("jsonl");
  const auto tasks = small_corpus(3, 3, 2);
  std::vector<Trajectory> golden;
  for (const auto& t : tasks) golden.push_back(golden_trajectory(t));
  write_tasks(dir.path() / "t.jsonl", tasks);
  write_trajectories(dir.path() / "g.jsonl", golden);
  EXPECT_EQ(read_tasks(dir.path() / "t.jsonl"), tasks);
  auto back = read_trajectories(dir.path() / "g.jsonl");
  attach_configs(back, tasks);
  EXPECT_EQ(back, golden);
  const auto text = read_text_file(dir.path() / "g.jsonl");
  EXPECT_EQ(text.find(" \n"), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Jsonl, ReadErrors) {
  TempDir dir("jsonl-bad");
  EXPECT_THROW(read_jsonl(dir.path() / "missing.jsonl"), Error);
  write_text_file(dir.path() / "bad.jsonl", "{\"a\":1}\n{oops\n");
  try {
    read_jsonl(dir.path() / "bad.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}
