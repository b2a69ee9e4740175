// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "trajforge/core.hpp"

namespace trajforge {

// Compact, UTF-8, no trailing whitespace.
inline std::string dump_line(const Json& j) { return j.dump(-1, ' ', false); }

// ---------------------------------------------------------------------------
// Task records: {"id","task_kind","instruction","max_steps","context_budget","env_config"}

inline Json task_to_json(const TaskInstruction& t) {
  Json j;
  j["id"] = t.id;
  j["task_kind"] = std::string(to_string(t.task_kind));
  j["instruction"] = t.instruction_text;
  j["max_steps"] = t.max_steps;
  j["context_budget"] = t.context_budget;
  j["env_config"] = t.env_config;
  return j;
}

inline TaskInstruction task_from_json(const Json& j) {
  try {
    TaskInstruction t;
    t.id = j.at("id").get<std::string>();
    t.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
    t.instruction_text = j.at("instruction").get<std::string>();
    t.max_steps = j.at("max_steps").get<int>();
    t.context_budget = j.at("context_budget").get<int>();
    if (j.contains("env_config")) t.env_config = j.at("env_config");
    if (t.max_steps < 1 || t.context_budget < 1) {
      fail(ErrorCode::config, "task '" + t.id + "' has a non-positive budget");
    }
    return t;
  } catch (const Json::exception& e) {
    fail(ErrorCode::config, std::string("bad task record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Trajectory records. The env_config blob is not part of the trajectory schema;
// readers re-attach it from the task file with attach_configs().

inline Json trajectory_to_json(const Trajectory& t) {
  Json j;
  j["id"] = t.instruction.id;
  j["task_kind"] = std::string(to_string(t.instruction.task_kind));
  j["instruction"] = t.instruction.instruction_text;
  j["max_steps"] = t.instruction.max_steps;
  j["context_budget"] = t.instruction.context_budget;
  j["reward"] = t.reward;
  j["termination"] = std::string(to_string(t.termination));
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json js;
    js["i"] = s.index;
    js["thought"] = s.thought;
    js["action"] = s.action;
    js["observation"] = s.observation;
    js["delta"] = s.delta;
    js["origin"] = std::string(to_string(s.origin));
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);
  return j;
}

inline Trajectory trajectory_from_json(const Json& j) {
  try {
    Trajectory t;
    t.instruction.id = j.at("id").get<std::string>();
    t.instruction.task_kind = task_kind_from_string(j.at("task_kind").get<std::string>());
    t.instruction.instruction_text = j.at("instruction").get<std::string>();
    t.instruction.max_steps = j.at("max_steps").get<int>();
    t.instruction.context_budget = j.at("context_budget").get<int>();
    t.reward = j.at("reward").get<double>();
    t.termination = termination_from_string(j.at("termination").get<std::string>());
    for (const auto& js : j.at("steps")) {
      Step s;
      s.index = js.at("i").get<int>();
      s.thought = js.at("thought").get<std::string>();
      s.action = js.at("action").get<std::string>();
      s.observation = js.at("observation").get<std::string>();
      s.delta = js.at("delta").get<bool>();
      s.origin = step_origin_from_string(js.at("origin").get<std::string>());
      t.steps.push_back(std::move(s));
    }
    return t;
  } catch (const Json::exception& e) {
    fail(ErrorCode::config, std::string("bad trajectory record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// File helpers.

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) fail(ErrorCode::io, "write to '" + path.string() + "' failed");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

template <class T, class ToJson>
void write_jsonl(const std::filesystem::path& path, const std::vector<T>& items, ToJson to_json) {
  std::string text;
  for (const auto& item : items) {
    text += dump_line(to_json(item));
    text += '\n';
  }
  write_text_file(path, text);
}

inline std::vector<Json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot open '" + path.string() + "'");
  std::vector<Json> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_view(line).empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      fail(ErrorCode::io, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline void write_tasks(const std::filesystem::path& path, const std::vector<TaskInstruction>& v) {
  write_jsonl(path, v, task_to_json);
}

inline void write_trajectories(const std::filesystem::path& path,
                               const std::vector<Trajectory>& v) {
  write_jsonl(path, v, trajectory_to_json);
}

inline std::vector<TaskInstruction> read_tasks(const std::filesystem::path& path) {
  std::vector<TaskInstruction> out;
  for (const auto& j : read_jsonl(path)) out.push_back(task_from_json(j));
  return out;
}

inline std::vector<Trajectory> read_trajectories(const std::filesystem::path& path) {
  std::vector<Trajectory> out;
  for (const auto& j : read_jsonl(path)) out.push_back(trajectory_from_json(j));
  return out;
}

/// Restores env_config on trajectories read back from JSONL, keyed by task id.
inline void attach_configs(std::vector<Trajectory>& trajs,
                           const std::vector<TaskInstruction>& tasks) {
  std::map<std::string, const TaskInstruction*> by_id;
  for (const auto& t : tasks) by_id[t.id] = &t;
  for (auto& tr : trajs) {
    auto it = by_id.find(tr.instruction.id);
    if (it == by_id.end()) {
      fail(ErrorCode::config, "no task record for trajectory '" + tr.instruction.id + "'");
    }
    tr.instruction.env_config = it->second->env_config;
  }
}

}  // namespace trajforge
