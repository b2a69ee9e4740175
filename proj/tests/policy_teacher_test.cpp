// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "support.hpp"

using namespace trajforge;
using namespace trajforge::testing;

namespace {

std::vector<Step> execute(const TaskInstruction& t, const std::vector<std::string>& actions) {
  auto env = make_environment(t.task_kind);
  env->reset(t);
  std::vector<Step> out;
  for (const auto& a : actions) {
    const auto r = env->step(a);
    out.push_back(Step{static_cast<int>(out.size()) + 1, "t", a, r.observation, true, StepOrigin::base_policy});
  }
  return out;
}

}  // namespace

TEST(ScriptedPolicy, FirstStepOfVase) {
  const auto task = vase_task();
  const auto act = ScriptedPolicy().decide(make_context(task));
  EXPECT_EQ(act.thought, "I need to find the vase first.");
  EXPECT_EQ(act.action, "go to room A");
}

TEST(ScriptedPolicy, ResumesAfterCorrection) {
  const auto task = vase_task();
  auto history = execute(task, {"go to room B", "go to room A"});
  history[1].origin = StepOrigin::teacher_correction;
  EXPECT_EQ(ScriptedPolicy().decide(make_context(task, history)).action, "take vase from room A");
}

TEST(ScriptedPolicy, NeedsTask) {
  PolicyContext ctx;
  EXPECT_THROW(ScriptedPolicy().decide(ctx), Error);
}

TEST(NoisyPolicy, FullRateWrongLocationPicksAnotherRoom) {
  const auto task = vase_task();
  const auto act = NoisyPolicy({7, 1.0, ErrorKind::wrong_location}).decide(make_context(task));
  EXPECT_EQ(act.action, "go to room B");
  EXPECT_TRUE(parse_react(render_react(act.thought, act.action)).ok());
}

TEST(NoisyPolicy, ZeroRateEqualsScripted) {
  const ScriptedPolicy scripted;
  const NoisyPolicy noisy({99, 0.0, ErrorKind::wrong_object});
  const auto tasks = small_corpus(17, 60, 40);
  int compared = 0;
  for (const auto& t : tasks) {
    const auto plan = golden_plan(t);
    std::vector<std::string> prefix;
    for (std::size_t k = 0; k < plan.size() && compared < 100; k += 2) {
      const auto ctx = make_context(t, execute(t, prefix));
      const auto a = scripted.decide(ctx);
      const auto b = noisy.decide(ctx);
      EXPECT_EQ(a.thought, b.thought);
      EXPECT_EQ(a.action, b.action);
      ++compared;
      prefix.push_back(plan[k].action);
      if (k + 1 < plan.size()) prefix.push_back(plan[k + 1].action);
    }
    if (compared >= 100) break;
  }
  EXPECT_EQ(compared, 100);
}

TEST(NoisyPolicy, DeterministicAndDoesNotMutate) {
  const auto task = vase_task();
  const NoisyPolicy p({3, 0.5, ErrorKind::wrong_object});
  const auto ctx = make_context(task, execute(task, {"go to room A"}));
  const auto copy = ctx.history;
  const auto a = p.decide(ctx);
  const auto b = p.decide(ctx);
  EXPECT_EQ(a.action, b.action);
  EXPECT_EQ(ctx.history, copy);
}

TEST(NoisyPolicy, RateValidated) {
  EXPECT_THROW(NoisyPolicy({0, 1.5, ErrorKind::wrong_object}), Error);
  EXPECT_THROW(NoisyPolicy({0, -0.1, ErrorKind::wrong_object}), Error);
}

TEST(RemotePolicy, TranscriptLayout) {
  const auto task = vase_task();
  const auto history = execute(task, {"go to room A"});
  const RemotePolicy p(ChatEndpoint{}, false);
  const auto msgs = p.transcript(make_context(task, history));
  ASSERT_EQ(msgs.size(), 4u);
  EXPECT_EQ(msgs[0].role, "system");
  EXPECT_EQ(msgs[0].content, prompts::task_requirements(TaskKind::household));
  EXPECT_EQ(msgs[1].role, "user");
  EXPECT_EQ(msgs[1].content, task.instruction_text);
  EXPECT_EQ(msgs[2].role, "assistant");
  EXPECT_EQ(msgs[2].content, "Thought: t\nAction: go to room A");
  EXPECT_EQ(msgs[3].role, "user");
  EXPECT_EQ(msgs[3].content, history[0].observation);
  EXPECT_EQ(msgs, build_transcript(TaskKind::household, task.instruction_text, history));

  const RemotePolicy one_shot(ChatEndpoint{}, true);
  const auto with_example = one_shot.transcript(make_context(task));
  EXPECT_NE(with_example[0].content.find(prompts::one_shot_example(TaskKind::household)), std::string::npos);
}

// -- teacher ---------------------------------------------------------------

TEST(OracleTeacher, CorrectOnEveryGoldenStep) {
  const OracleTeacher teacher;
  for (const auto& t : small_corpus(23, 30, 20)) {
    const auto g = golden_trajectory(t);
    std::vector<Step> history;
    for (const auto& s : g.steps) {
      EXPECT_TRUE(is_correct(teacher.judge(t, history, {s.thought, s.action}, s.observation))) << t.id;
      history.push_back(s);
    }
  }
}

TEST(OracleTeacher, WrongRoomGetsCorrected) {
  const auto task = vase_task();
  const auto step = execute(task, {"go to room B"})[0];
  const auto v = OracleTeacher().judge(task, {}, {"t", step.action}, step.observation);
  ASSERT_FALSE(is_correct(v));
  const auto& e = std::get<VerdictError>(v);
  EXPECT_EQ(e.corrective_action, "go to room A");
  EXPECT_FALSE(e.error_content.empty());
  EXPECT_FALSE(e.error_reason.empty());
  EXPECT_FALSE(e.reflection.empty());
}

TEST(OracleTeacher, CorrectionKeepsTaskCompletable) {
  const OracleTeacher teacher;
  for (const auto& t : small_corpus(31, 40, 30)) {
    const auto plan = golden_plan(t);
    for (auto kind : {ErrorKind::wrong_object, ErrorKind::wrong_location, ErrorKind::premature_terminal}) {
      auto env = make_environment(t.task_kind);
      env->reset(t);
      const auto wrong = env->corrupt(plan[0].action, kind);
      const auto r = env->step(wrong);
      const auto v = teacher.judge(t, {}, {"t", wrong}, r.observation);
      ASSERT_FALSE(is_correct(v)) << t.id << " " << wrong;
      env->step(std::get<VerdictError>(v).corrective_action);
      const auto rest = env->plan();
      EXPECT_LE(static_cast<int>(rest.size()) + env->step_count(), t.max_steps) << t.id;
      for (const auto& p : rest) env->step(p.action);
      EXPECT_TRUE(env->done()) << t.id;
    }
  }
}

TEST(OracleTeacher, DoesNotMutateHistory) {
  const auto task = vase_task();
  const auto history = execute(task, {"go to room A"});
  const auto copy = history;
  OracleTeacher().judge(task, history, {"t", "go to desk"}, "x");
  EXPECT_EQ(history, copy);
}

TEST(ParseVerdict, Affirmative) {
  EXPECT_TRUE(is_correct(parse_verdict("yes")));
  EXPECT_TRUE(is_correct(parse_verdict("  Yes.\n")));
}

TEST(ParseVerdict, LabelledFields) {
  const auto v = parse_verdict(
      "ERROR: I went to the wrong room\nREASON: the vase is in room A\n"
      "REFLECTION: I should verify object locations before moving\nACTION: go to room A");
  ASSERT_FALSE(is_correct(v));
  const auto& e = std::get<VerdictError>(v);
  EXPECT_EQ(e.error_content, "I went to the wrong room");
  EXPECT_EQ(e.corrective_action, "go to room A");
}

TEST(ParseVerdict, RepairPassToleratesCaseAndIndent) {
  const auto v = parse_verdict("  error : x\n reason: y\nReflection: z\n action:  look  ");
  ASSERT_FALSE(is_correct(v));
  EXPECT_EQ(std::get<VerdictError>(v).corrective_action, "look");
}

TEST(ParseVerdict, Unparseable) {
  for (const char* reply : {"no", "ERROR: x\nREASON: y\nACTION: z", "yes, but", ""}) {
    try {
      parse_verdict(reply);
      ADD_FAILURE() << reply;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::unparseable_verdict);
    }
  }
}

TEST(ReformatCorrection, TemplateOrderAndParse) {
  const VerdictError v{"I went to the wrong room", "the vase is in room A",
                       "I should verify object locations before moving", "go to room A"};
  const auto c = reformat_correction(v);
  EXPECT_EQ(c.action, "go to room A");
  const auto a = c.thought.find("I went to the wrong room");
  const auto b = c.thought.find("the vase is in room A");
  const auto r = c.thought.find("I should verify object locations before moving");
  ASSERT_NE(a, std::string::npos);
  ASSERT_NE(b, std::string::npos);
  ASSERT_NE(r, std::string::npos);
  EXPECT_LT(a, b);
  EXPECT_LT(b, r);
  const auto p = parse_react(render_react(c.thought, c.action));
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p.pair->thought, c.thought);
}

TEST(ReformatCorrection, TrimsAndRejectsMultiLine) {
  EXPECT_EQ(reformat_correction({"a", "b", "c", "go to room A \t "}).action, "go to room A");
  try {
    reformat_correction({"a", "b", "c", "a\nb"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_field);
  }
}

TEST(RemoteTeacher, PromptCarriesEveryPart) {
  const auto task = vase_task();
  const auto history = execute(task, {"go to room A"});
  const auto msgs = RemoteTeacher::prompt(task, history, {"I will take it.", "take vase from room A"}, "You pick up");
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].role, "system");
  EXPECT_NE(msgs[0].content.find(prompts::kTeacherRole), std::string::npos);
  EXPECT_NE(msgs[0].content.find(prompts::task_requirements(TaskKind::household)), std::string::npos);
  EXPECT_NE(msgs[0].content.find(prompts::teacher_considerations(TaskKind::household)), std::string::npos);
  EXPECT_NE(msgs[1].content.find(task.instruction_text), std::string::npos);
  EXPECT_NE(msgs[1].content.find("Action: go to room A"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("Action: take vase from room A"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("You pick up"), std::string::npos);
}
