// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trajforge/trajforge.hpp"

namespace trajforge::testing {

/// Four-step task: the vase is in room A and goes into the safe.
inline TaskInstruction vase_task(int max_steps = 30, int context_budget = 16000) {
  TaskInstruction t;
  t.id = "fixture-vase";
  t.task_kind = TaskKind::household;
  t.instruction_text = "Your task is to: put the vase in the safe.";
  t.max_steps = max_steps;
  t.context_budget = context_budget;
  t.env_config = Json::parse(R"({
    "start": "hallway",
    "locations": [
      {"name": "hallway", "type": "room"},
      {"name": "room A", "type": "room"},
      {"name": "room B", "type": "room"},
      {"name": "safe", "type": "receptacle"},
      {"name": "desk", "type": "receptacle"}
    ],
    "objects": [
      {"name": "vase", "location": "room A"},
      {"name": "book", "location": "room B"}
    ],
    "goal": {"object": "vase", "receptacle": "safe", "modifier": "none"}
  })");
  return t;
}

/// P001 is the only item that is red, cotton and under 30.
inline TaskInstruction shirt_task(int max_steps = 10) {
  TaskInstruction t;
  t.id = "fixture-shirt";
  t.task_kind = TaskKind::shopping;
  t.instruction_text = "Find me a shirt item that is red and cotton, with price lower than 30.00 dollars.";
  t.max_steps = max_steps;
  t.context_budget = 16000;
  t.env_config = Json::parse(R"({
    "catalog": [
      {"id": "P001", "title": "red cotton shirt", "tags": ["red", "cotton", "medium"], "price": 25.0},
      {"id": "P002", "title": "red cotton shirt", "tags": ["red", "cotton", "large"], "price": 45.0},
      {"id": "P003", "title": "blue cotton shirt", "tags": ["blue", "cotton", "small"], "price": 20.0},
      {"id": "P004", "title": "red silk shirt", "tags": ["red", "silk", "small"], "price": 15.0}
    ],
    "query_index": {
      "red": ["P001", "P002", "P004"],
      "cotton": ["P001", "P002", "P003"],
      "shirt": ["P001", "P002", "P003", "P004"],
      "blue": ["P003"],
      "silk": ["P004"]
    },
    "requirement": {"attributes": ["red", "cotton"], "price_ceiling": 30.0}
  })");
  return t;
}

inline std::vector<TaskInstruction> small_corpus(std::uint64_t seed = 42, int household = 20, int shopping = 10) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.household = household;
  spec.shopping = shopping;
  return generate_tasks(spec);
}

inline Step make_step(int index, std::string action, bool delta = true,
                      StepOrigin origin = StepOrigin::base_policy) {
  return Step{index, "thinking about step " + std::to_string(index), std::move(action), "ok", delta, origin};
}

/// Trajectory with `errors` marked steps, each followed by a correction.
inline Trajectory synthetic_trajectory(const std::string& id, TaskKind kind, double reward, int errors,
                                       int plain_steps = 2) {
  Trajectory t;
  t.instruction.id = id;
  t.instruction.task_kind = kind;
  t.instruction.instruction_text = "Your task is to: do something.";
  t.instruction.max_steps = 50;
  t.instruction.context_budget = 100000;
  int i = 1;
  for (int e = 0; e < errors; ++e) {
    t.steps.push_back(make_step(i++, "wrong " + std::to_string(e), false));
    t.steps.push_back(make_step(i++, "fix " + std::to_string(e), true, StepOrigin::teacher_correction));
  }
  for (int k = 0; k < plain_steps; ++k) t.steps.push_back(make_step(i++, "act " + std::to_string(k)));
  t.reward = reward;
  t.termination = reward == 1.0 ? Termination::success
                  : reward > 0.0 ? Termination::env_done_partial
                                 : Termination::step_limit;
  return t;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("trajforge-test-" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace trajforge::testing
