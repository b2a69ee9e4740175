// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "support.hpp"

using namespace trajforge;
using namespace trajforge::testing;

namespace {

std::vector<std::string> actions_of(const std::vector<PlanStep>& plan) {
  std::vector<std::string> out;
  for (const auto& p : plan) out.push_back(p.action);
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::io;
}

}  // namespace

TEST(Household, GoldenPlanForVase) {
  const auto plan = golden_plan(vase_task());
  EXPECT_EQ(actions_of(plan), (std::vector<std::string>{"go to room A", "take vase from room A", "go to safe",
                                                         "put vase in safe"}));
  EXPECT_EQ(plan[0].thought, "I need to find the vase first.");
}

TEST(Household, ResetObservation) {
  HouseholdEnv env;
  const auto obs = env.reset(vase_task());
  EXPECT_EQ(obs.rfind("You are in the hallway.", 0), 0u);
  EXPECT_NE(obs.find("room A"), std::string::npos);
}

TEST(Household, InvalidActionsDoNothing) {
  HouseholdEnv env;
  env.reset(vase_task());
  EXPECT_EQ(env.step("take vase from room A").observation, kNothingHappens);  // not there yet
  EXPECT_EQ(env.step("dance").observation, kNothingHappens);
  EXPECT_EQ(env.step("go to room A").observation, "You arrive at the room A. Here you see: a vase.");
  EXPECT_EQ(env.step("put vase in safe").observation, kNothingHappens);  // not holding it
  EXPECT_EQ(env.step_count(), 4);
  EXPECT_FALSE(env.done());
}

TEST(Household, GoalEndsEpisode) {
  HouseholdEnv env;
  env.reset(vase_task());
  StepResult r;
  for (const auto& p : golden_plan(vase_task())) r = env.step(p.action);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.reward, 1.0);
  EXPECT_EQ(code_of([&] { env.step("look"); }), ErrorCode::step_after_done);
}

TEST(Household, StepBudget) {
  HouseholdEnv env;
  env.reset(vase_task(2));
  env.step("look");
  env.step("look");
  EXPECT_EQ(code_of([&] { env.step("look"); }), ErrorCode::step_budget_exhausted);
}

TEST(Household, HeatedGoalNeedsMicrowave) {
  auto t = vase_task();
  t.env_config["goal"]["modifier"] = "heated";
  EXPECT_EQ(code_of([&] { golden_plan(t); }), ErrorCode::config);
  t.env_config["locations"].push_back(Json{{"name", "microwave"}, {"type", "microwave"}});
  const auto plan = golden_plan(t);
  EXPECT_EQ(actions_of(plan), (std::vector<std::string>{"go to room A", "take vase from room A", "go to microwave",
                                                         "heat vase with microwave", "go to safe",
                                                         "put vase in safe"}));
}

TEST(Household, ConfigErrors) {
  auto t = vase_task();
  t.env_config["goal"]["object"] = "lamp";
  EXPECT_EQ(code_of([&] { golden_plan(t); }), ErrorCode::config);
  auto u = vase_task();
  u.task_kind = TaskKind::shopping;
  HouseholdEnv env;
  EXPECT_EQ(code_of([&] { env.reset(u); }), ErrorCode::config);
}

TEST(Household, CorruptionsDifferFromPlan) {
  HouseholdEnv env;
  env.reset(vase_task());
  for (auto kind : {ErrorKind::wrong_object, ErrorKind::wrong_location, ErrorKind::premature_terminal}) {
    EXPECT_NE(env.corrupt("go to room A", kind), "go to room A");
  }
  EXPECT_EQ(env.corrupt("go to room A", ErrorKind::wrong_location), "go to room B");
}

TEST(Shopping, RewardRule) {
  const ShoppingEnv::Requirement req{{"red", "cotton"}, 30.0};
  EXPECT_EQ(ShoppingEnv::purchase_reward({"a", "t", {"red", "cotton"}, 25.0}, req), 1.0);
  EXPECT_EQ(ShoppingEnv::purchase_reward({"a", "t", {"red", "cotton"}, 45.0}, req), 0.5);
  EXPECT_EQ(ShoppingEnv::purchase_reward({"a", "t", {"red"}, 25.0}, req), 0.5);
  EXPECT_EQ(ShoppingEnv::purchase_reward({"a", "t", {"red"}, 45.0}, req), 0.25);
  EXPECT_EQ(ShoppingEnv::purchase_reward({"a", "t", {"blue"}, 5.0}, req), 0.0);
}

TEST(Shopping, GoldenPlanAndPurchase) {
  const auto plan = golden_plan(shirt_task());
  EXPECT_EQ(actions_of(plan), (std::vector<std::string>{"search[cotton]", "click[P001]", "click[buy now]"}));
  const auto g = golden_trajectory(shirt_task());
  EXPECT_EQ(g.reward, 1.0);
  EXPECT_EQ(g.termination, Termination::success);
}

TEST(Shopping, PartialPurchaseEndsEpisode) {
  ShoppingEnv env;
  EXPECT_EQ(env.reset(shirt_task()), "You are on the search page.");
  env.step("search[red]");
  EXPECT_EQ(env.step("click[P002]").observation.rfind("[P002]", 0), 0u);
  const auto r = env.step("click[buy now]");
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.reward, 0.5);
}

TEST(Shopping, Navigation) {
  ShoppingEnv env;
  env.reset(shirt_task());
  EXPECT_EQ(env.step("click[P001]").observation, kNothingHappens);  // no results yet
  EXPECT_EQ(env.step("click[buy now]").observation, kNothingHappens);
  EXPECT_EQ(env.step("search[purple]").observation, "No results for \"purple\".");
  const auto res = env.step("search[red cotton]").observation;
  EXPECT_NE(res.find("[P001]"), std::string::npos);
  EXPECT_NE(res.find("[P002]"), std::string::npos);
  EXPECT_EQ(res.find("[P004]"), std::string::npos);
  env.step("click[P001]");
  EXPECT_EQ(env.step("click[back]").observation, res);
}

TEST(Environments, ScienceHasNoSimulator) {
  EXPECT_EQ(code_of([] { make_environment(TaskKind::science_stub); }), ErrorCode::config);
}

TEST(Generator, DistinctSolvableDeterministic) {
  const auto a = small_corpus(9, 40, 20);
  const auto b = small_corpus(9, 40, 20);
  ASSERT_EQ(a, b);
  ASSERT_EQ(a.size(), 60u);
  std::set<std::string> configs, ids;
  for (const auto& t : a) {
    configs.insert(dump_line(t.env_config));
    ids.insert(t.id);
    const auto g = golden_trajectory(t);
    EXPECT_EQ(g.reward, 1.0) << t.id;
    EXPECT_LE(static_cast<int>(g.steps.size()), t.max_steps);
  }
  EXPECT_EQ(configs.size(), a.size());
  EXPECT_EQ(ids.size(), a.size());
  EXPECT_EQ(a.front().id, "household-0001");
  EXPECT_EQ(a.back().id, "shopping-0020");
  EXPECT_NE(small_corpus(10, 40, 20), a);
}

// Along any golden prefix, executing a corruption never lengthens the remaining
// plan, so each mistake costs at most one extra step after its correction.
TEST(Generator, CorruptionNeverLengthensRemainingPlan) {
  for (const auto& t : small_corpus(5, 60, 40)) {
    auto env = make_environment(t.task_kind);
    env->reset(t);
    const auto plan = env->plan();
    for (std::size_t k = 0; k < plan.size(); ++k) {
      const auto remaining = env->plan().size();
      for (auto kind : {ErrorKind::wrong_object, ErrorKind::wrong_location, ErrorKind::premature_terminal}) {
        const auto wrong = env->corrupt(plan[k].action, kind);
        ASSERT_NE(wrong, plan[k].action) << t.id;
        auto probe = env->clone();
        probe->step(wrong);
        ASSERT_FALSE(probe->done()) << t.id << " " << wrong;
        EXPECT_LE(probe->plan().size(), remaining) << t.id << " after " << wrong;
      }
      env->step(plan[k].action);
    }
    EXPECT_TRUE(env->done());
  }
}
