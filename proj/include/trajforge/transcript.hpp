// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "trajforge/core.hpp"
#include "trajforge/prompts.hpp"
#include "trajforge/react.hpp"

namespace trajforge {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

inline std::string system_prompt(TaskKind kind, bool one_shot) {
  std::string s(prompts::task_requirements(kind));
  const auto example = prompts::one_shot_example(kind);
  if (one_shot && !example.empty()) {
    s += "\n\n";
    s += example;
  }
  return s;
}

/// The conversation layout shared by inference and training data:
///   system    = task requirements (plus the worked example in one-shot mode)
///   user      = instruction
///   then per step: assistant = "Thought: ...\nAction: ...", user = observation
inline std::vector<ChatMessage> build_transcript(TaskKind kind, const std::string& instruction,
                                                 const std::vector<Step>& steps,
                                                 bool one_shot = false) {
  std::vector<ChatMessage> out;
  out.reserve(2 + 2 * steps.size());
  out.push_back({"system", system_prompt(kind, one_shot)});
  out.push_back({"user", instruction});
  for (const auto& s : steps) {
    out.push_back({"assistant", render_react(s.thought, s.action)});
    out.push_back({"user", s.observation});
  }
  return out;
}

/// Character count used against TaskInstruction::context_budget.
inline std::size_t transcript_chars(const std::vector<ChatMessage>& messages) {
  std::size_t n = 0;
  for (const auto& m : messages) n += m.content.size();
  return n;
}

}  // namespace trajforge
