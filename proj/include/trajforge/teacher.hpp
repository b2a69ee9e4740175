// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "trajforge/chat_client.hpp"
#include "trajforge/envs.hpp"
#include "trajforge/prompts.hpp"
#include "trajforge/react.hpp"

namespace trajforge {

class Teacher {
 public:
  virtual ~Teacher() = default;
  /// `history` holds the steps before `step`; `observation` is the
  /// environment's response to `step`. Never mutates its arguments.
  virtual Verdict judge(const TaskInstruction& task, const std::vector<Step>& history,
                        const ReactPair& step, const std::string& observation) const = 0;
  virtual Json identity() const = 0;
};

/// Judges against the environment's own plan from the true latent state.
class OracleTeacher : public Teacher {
 public:
  explicit OracleTeacher(EnvFactory factory = default_env_factory())
      : factory_(std::move(factory)) {}

  Verdict judge(const TaskInstruction& task, const std::vector<Step>& history,
                const ReactPair& step, const std::string& observation) const override {
    std::vector<std::string> actions;
    actions.reserve(history.size() + 1);
    for (const auto& s : history) actions.push_back(s.action);
    const auto before = replay(factory_, task, actions);
    const auto expected = before->plan();
    if (expected.empty()) fail(ErrorCode::plan_not_found, "no plan for task '" + task.id + "'");
    if (trim(step.action) == expected.front().action) return VerdictCorrect{};

    // The correction is planned from the state the erroneous action left behind.
    auto after = before->clone();
    after->step(step.action);
    auto recovery = after->done() ? expected : after->plan();
    if (recovery.empty()) fail(ErrorCode::plan_not_found, "no recovery plan for '" + task.id + "'");

    const bool invalid = trim_view(observation) == kNothingHappens;
    std::string content = "I chose \"" + trim(step.action) + "\"";
    content += invalid ? ", which was not a valid action here." : ", which does not move the task forward.";
    std::string reason = "the right step at that point was \"" + expected.front().action + "\", because " +
                         lower_first(expected.front().thought);
    std::string reflection = invalid
                                 ? "I should only use actions that are possible in the current state."
                                 : "I should check each action against what the instruction asks for.";
    return make_error_verdict(std::move(content), std::move(reason), std::move(reflection),
                              recovery.front().action);
  }

  Json identity() const override { return Json{{"kind", "oracle"}}; }

 private:
  static std::string lower_first(std::string s) {
    if (s.size() > 1 && std::isupper(static_cast<unsigned char>(s[0])) &&
        !std::isupper(static_cast<unsigned char>(s[1])) && s.rfind("I ", 0) != 0) {
      s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    }
    return s;
  }

  EnvFactory factory_;
};

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline bool is_affirmative(std::string_view reply) {
  auto t = lower(trim_view(reply));
  while (!t.empty() && (t.back() == '.' || t.back() == '!')) t.pop_back();
  return t == "yes";
}

/// Extracts the four labelled lines. `relaxed` trims lines and ignores label case.
inline std::optional<VerdictError> labelled_fields(std::string_view reply, bool relaxed) {
  static constexpr std::array<std::string_view, 4> kLabels = {"ERROR", "REASON", "REFLECTION",
                                                              "ACTION"};
  std::array<std::optional<std::string>, 4> found;
  for (auto line : split_lines(reply)) {
    if (relaxed) line = trim_view(line);
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const auto label = relaxed ? lower(trim_view(line.substr(0, colon))) : std::string(line.substr(0, colon));
    for (std::size_t k = 0; k < kLabels.size(); ++k) {
      const auto want = relaxed ? lower(kLabels[k]) : std::string(kLabels[k]);
      if (label == want && !found[k]) {
        found[k] = trim(line.substr(colon + 1));
        break;
      }
    }
  }
  for (const auto& f : found) {
    if (!f || f->empty()) return std::nullopt;
  }
  return VerdictError{*found[0], *found[1], *found[2], *found[3]};
}

}  // namespace detail

/// Parses a remote teacher reply: a bare "yes" or four labelled lines.
inline Verdict parse_verdict(std::string_view reply) {
  if (detail::is_affirmative(reply)) return VerdictCorrect{};
  if (auto v = detail::labelled_fields(reply, false)) return *v;
  if (auto v = detail::labelled_fields(reply, true)) return *v;
  fail(ErrorCode::unparseable_verdict,
       "teacher reply is neither \"yes\" nor four labelled fields: " +
           std::string(reply.substr(0, 200)));
}

/// Teacher model behind an OpenAI-compatible endpoint.
class RemoteTeacher : public Teacher {
 public:
  explicit RemoteTeacher(ChatEndpoint endpoint) : client_(std::move(endpoint)) {}

  static std::vector<ChatMessage> prompt(const TaskInstruction& task, const std::vector<Step>& history,
                                         const ReactPair& step, const std::string& observation) {
    std::string system(prompts::kTeacherRole);
    system += "\n\nTask definition:\n";
    system += prompts::task_requirements(task.task_kind);
    system += "\n\n";
    system += prompts::teacher_considerations(task.task_kind);

    std::string user = "Instruction:\n" + task.instruction_text + "\n\nInteraction history:\n";
    if (history.empty()) user += "(none)\n";
    for (const auto& s : history) {
      user += render_react(s.thought, s.action) + "\nObservation: " + s.observation + "\n";
    }
    user += "\nCurrent step:\n" + render_react(step.thought, step.action) +
            "\n\nObservation:\n" + observation;
    return {{"system", std::move(system)}, {"user", std::move(user)}};
  }

  Verdict judge(const TaskInstruction& task, const std::vector<Step>& history,
                const ReactPair& step, const std::string& observation) const override {
    return parse_verdict(client_.complete(prompt(task, history, step, observation)));
  }

  Json identity() const override {
    return Json{{"kind", "remote"},
                {"base_url", client_.endpoint().base_url},
                {"model", client_.endpoint().model}};
  }

 private:
  ChatClient client_;
};

namespace detail {

inline std::string sentence(std::string_view s) {
  auto t = trim(s);
  while (!t.empty() && (t.back() == '.' || t.back() == ' ')) t.pop_back();
  return t + ".";
}

inline std::string clause(std::string_view s) {
  auto t = sentence(s);
  if (t.size() > 1 && std::isupper(static_cast<unsigned char>(t[0])) &&
      !std::isupper(static_cast<unsigned char>(t[1])) && t.rfind("I ", 0) != 0) {
    t[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(t[0])));
  }
  return t;
}

}  // namespace detail

/// Turns an error verdict into the first-person correction step.
inline ReactPair reformat_correction(const VerdictError& v) {
  const auto action = trim(v.corrective_action);
  if (action.empty()) fail(ErrorCode::invalid_field, "corrective action is empty");
  if (action.find_first_of("\r\n") != std::string::npos) {
    fail(ErrorCode::invalid_field, "corrective action spans several lines");
  }
  if (trim_view(v.error_content).empty() || trim_view(v.error_reason).empty() ||
      trim_view(v.reflection).empty()) {
    fail(ErrorCode::invalid_field, "error verdict has an empty field");
  }
  std::string thought(prompts::kCorrectionOpening);
  thought += detail::clause(v.error_content);
  thought += prompts::kCorrectionReason;
  thought += detail::clause(v.error_reason);
  thought += prompts::kCorrectionReflection;
  thought += detail::clause(v.reflection);
  thought += prompts::kCorrectionClosing;
  // Keep the thought on one logical block that render_react accepts.
  for (auto& c : thought) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  render_react(thought, action);
  return {thought, action};
}

}  // namespace trajforge
