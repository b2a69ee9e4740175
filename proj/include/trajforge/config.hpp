// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>

#include <toml.hpp>

#include "trajforge/eval.hpp"
#include "trajforge/masking.hpp"
#include "trajforge/synthesis.hpp"

namespace trajforge {

enum class PolicyKind { scripted, noisy, remote };
enum class TeacherKind { oracle, remote };

struct PolicyConfig {
  PolicyKind kind = PolicyKind::noisy;
  NoiseSchedule noise{7, 0.4, ErrorKind::wrong_location};
  ChatEndpoint endpoint;
  bool one_shot = false;
};

struct TeacherConfig {
  TeacherKind kind = TeacherKind::oracle;
  ChatEndpoint endpoint;
};

struct SynthesisConfig {
  double split_fraction = 0.5;
  std::uint64_t split_seed = 0;
  ErrorCaps max_errors = default_error_caps();
  int max_uncorrected_errors = 3;
};

struct MaskingConfig {
  std::uint64_t seed = 0;
  MaskMode mode = MaskMode::partial_mask;  // applied to the reflected set
  bool sequential = false;                 // also export d1 and dr as separate files
};

struct EvalConfig {
  CorpusSpec corpus{1, 20, 10, 30, 10, 16000, "test-"};
  std::string tasks_file;  // evaluated instead of a generated corpus when set
  bool teacher_benefit = true;
};

struct Config {
  std::filesystem::path out_dir = "out";
  CorpusSpec corpus{42, 20, 10, 30, 10, 16000, ""};
  PolicyConfig policy;
  TeacherConfig teacher;
  SynthesisConfig synthesis;
  MaskingConfig masking;
  EvalConfig eval;
  int parallelism = 1;

  /// Replaces every seed with `seed`.
  void override_seeds(std::uint64_t seed) {
    corpus.seed = seed;
    policy.noise.seed = seed;
    synthesis.split_seed = seed;
    masking.seed = seed;
    eval.corpus.seed = seed;
  }

  /// Values written to manifests. API keys never appear; only the variable name.
  Json to_json() const;
};

namespace detail {

class TableReader {
 public:
  TableReader(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!table_) return;
    const auto* node = table_->get(key);
    if (!node) return;
    if constexpr (std::is_same_v<T, bool>) {
      out = require<bool>(node, key, "a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      out = require<std::string>(node, key, "a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (auto v = node->value<double>()) {
        out = *v;
      } else {
        bad(key, "a number");
      }
    } else if constexpr (std::is_unsigned_v<T>) {
      const auto v = require<std::int64_t>(node, key, "an integer");
      if (v < 0) bad(key, "a non-negative integer");
      out = static_cast<T>(v);
    } else {
      out = static_cast<T>(require<std::int64_t>(node, key, "an integer"));
    }
  }

  const toml::table* sub(const char* key) {
    seen_.insert(key);
    if (!table_) return nullptr;
    const auto* node = table_->get(key);
    if (!node) return nullptr;
    if (!node->is_table()) bad(key, "a table");
    return node->as_table();
  }

  /// Unknown keys are configuration errors.
  void finish() const {
    if (!table_) return;
    for (const auto& [k, v] : *table_) {
      if (!seen_.count(std::string(k.str()))) {
        fail(ErrorCode::config, "unknown key '" + std::string(k.str()) + "' in " + name_);
      }
    }
  }

 private:
  template <class T>
  T require(const toml::node* node, const char* key, const char* what) {
    if (auto v = node->value_exact<T>()) return *v;
    bad(key, what);
  }

  [[noreturn]] void bad(const char* key, const char* what) const {
    fail(ErrorCode::config, name_ + "." + key + " must be " + what);
  }

  const toml::table* table_;
  std::string name_;
  std::set<std::string> seen_;
};

inline void read_endpoint(TableReader& r, ChatEndpoint& e) {
  r.get("base_url", e.base_url);
  r.get("model", e.model);
  r.get("api_key_env", e.api_key_env);
  r.get("max_tokens", e.max_tokens);
  r.get("timeout_ms", e.timeout_ms);
  r.get("attempts", e.attempts);
  r.get("backoff_ms", e.backoff_ms);
  if (e.max_tokens < 1 || e.timeout_ms < 1 || e.attempts < 1 || e.backoff_ms < 0) {
    fail(ErrorCode::config, "endpoint limits must be positive");
  }
}

inline void read_corpus(TableReader& r, CorpusSpec& c) {
  r.get("seed", c.seed);
  r.get("household", c.household);
  r.get("shopping", c.shopping);
  r.get("household_max_steps", c.household_max_steps);
  r.get("shopping_max_steps", c.shopping_max_steps);
  r.get("context_budget", c.context_budget);
  r.get("id_prefix", c.id_prefix);
  if (c.household < 0 || c.shopping < 0) fail(ErrorCode::config, "task counts must be non-negative");
  if (c.household_max_steps < 1 || c.shopping_max_steps < 1 || c.context_budget < 1) {
    fail(ErrorCode::config, "step limits and context budget must be positive");
  }
}

inline Json endpoint_json(const ChatEndpoint& e) {
  return Json{{"base_url", e.base_url},   {"model", e.model},       {"api_key_env", e.api_key_env},
              {"max_tokens", e.max_tokens}, {"timeout_ms", e.timeout_ms}, {"attempts", e.attempts}};
}

inline Json corpus_json(const CorpusSpec& c) {
  return Json{{"seed", c.seed},
              {"household", c.household},
              {"shopping", c.shopping},
              {"household_max_steps", c.household_max_steps},
              {"shopping_max_steps", c.shopping_max_steps},
              {"context_budget", c.context_budget},
              {"id_prefix", c.id_prefix}};
}

}  // namespace detail

inline Config parse_config(std::string_view text, const std::string& source = "config") {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::string msg(e.description());
    const auto& at = e.source().begin;
    fail(ErrorCode::config, source + ":" + std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + msg);
  }

  Config cfg;
  detail::TableReader top(&root, source);
  {
    detail::TableReader r(top.sub("run"), "[run]");
    std::string out = cfg.out_dir.string();
    r.get("out_dir", out);
    r.get("parallelism", cfg.parallelism);
    cfg.out_dir = out;
    r.finish();
  }
  {
    detail::TableReader r(top.sub("corpus"), "[corpus]");
    detail::read_corpus(r, cfg.corpus);
    r.finish();
  }
  {
    detail::TableReader r(top.sub("policy"), "[policy]");
    std::string kind = "noisy";
    std::string error_kind(to_string(cfg.policy.noise.error_kind));
    r.get("kind", kind);
    r.get("seed", cfg.policy.noise.seed);
    r.get("error_rate", cfg.policy.noise.error_rate);
    r.get("error_kind", error_kind);
    r.get("one_shot", cfg.policy.one_shot);
    detail::read_endpoint(r, cfg.policy.endpoint);
    r.finish();
    if (kind == "scripted") {
      cfg.policy.kind = PolicyKind::scripted;
    } else if (kind == "noisy") {
      cfg.policy.kind = PolicyKind::noisy;
    } else if (kind == "remote") {
      cfg.policy.kind = PolicyKind::remote;
    } else {
      fail(ErrorCode::config, "[policy].kind must be scripted, noisy or remote");
    }
    cfg.policy.noise.error_kind = error_kind_from_string(error_kind);
    if (!(cfg.policy.noise.error_rate >= 0.0 && cfg.policy.noise.error_rate <= 1.0)) {
      fail(ErrorCode::config, "[policy].error_rate must lie in [0, 1]");
    }
  }
  {
    detail::TableReader r(top.sub("teacher"), "[teacher]");
    std::string kind = "oracle";
    r.get("kind", kind);
    detail::read_endpoint(r, cfg.teacher.endpoint);
    r.finish();
    if (kind == "oracle") {
      cfg.teacher.kind = TeacherKind::oracle;
    } else if (kind == "remote") {
      cfg.teacher.kind = TeacherKind::remote;
    } else {
      fail(ErrorCode::config, "[teacher].kind must be oracle or remote");
    }
  }
  {
    detail::TableReader r(top.sub("synthesis"), "[synthesis]");
    r.get("split_fraction", cfg.synthesis.split_fraction);
    r.get("split_seed", cfg.synthesis.split_seed);
    r.get("max_uncorrected_errors", cfg.synthesis.max_uncorrected_errors);
    if (const auto* caps = r.sub("max_errors")) {
      cfg.synthesis.max_errors.clear();
      for (const auto& [k, v] : *caps) {
        const auto n = v.value_exact<std::int64_t>();
        if (!n || *n < 0) fail(ErrorCode::config, "[synthesis.max_errors] values must be non-negative integers");
        cfg.synthesis.max_errors[task_kind_from_string(k.str())] = static_cast<int>(*n);
      }
    }
    r.finish();
    if (!(cfg.synthesis.split_fraction > 0.0 && cfg.synthesis.split_fraction < 1.0)) {
      fail(ErrorCode::config, "[synthesis].split_fraction must lie in (0, 1)");
    }
    if (cfg.synthesis.max_uncorrected_errors < 1) {
      fail(ErrorCode::config, "[synthesis].max_uncorrected_errors must be positive");
    }
  }
  {
    detail::TableReader r(top.sub("masking"), "[masking]");
    std::string mode(to_string(cfg.masking.mode));
    r.get("seed", cfg.masking.seed);
    r.get("mode", mode);
    r.get("sequential", cfg.masking.sequential);
    r.finish();
    cfg.masking.mode = mask_mode_from_string(mode);
  }
  {
    detail::TableReader r(top.sub("eval"), "[eval]");
    detail::read_corpus(r, cfg.eval.corpus);
    r.get("tasks_file", cfg.eval.tasks_file);
    r.get("teacher_benefit", cfg.eval.teacher_benefit);
    r.finish();
  }
  top.finish();
  if (cfg.parallelism < 1) fail(ErrorCode::config, "parallelism must be at least 1");
  return cfg;
}

inline Config load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string());
}

inline Json Config::to_json() const {
  Json caps = Json::object();
  for (const auto& [kind, cap] : synthesis.max_errors) caps[std::string(to_string(kind))] = cap;
  const char* policy_kind = policy.kind == PolicyKind::scripted ? "scripted"
                            : policy.kind == PolicyKind::noisy  ? "noisy"
                                                                : "remote";
  Json p{{"kind", policy_kind},
         {"seed", policy.noise.seed},
         {"error_rate", policy.noise.error_rate},
         {"error_kind", std::string(to_string(policy.noise.error_kind))},
         {"one_shot", policy.one_shot}};
  if (policy.kind == PolicyKind::remote) p["endpoint"] = detail::endpoint_json(policy.endpoint);
  Json t{{"kind", teacher.kind == TeacherKind::oracle ? "oracle" : "remote"}};
  if (teacher.kind == TeacherKind::remote) t["endpoint"] = detail::endpoint_json(teacher.endpoint);
  return Json{{"corpus", detail::corpus_json(corpus)},
              {"policy", std::move(p)},
              {"teacher", std::move(t)},
              {"synthesis", Json{{"split_fraction", synthesis.split_fraction},
                                 {"split_seed", synthesis.split_seed},
                                 {"max_errors", std::move(caps)},
                                 {"max_uncorrected_errors", synthesis.max_uncorrected_errors}}},
              {"masking", Json{{"seed", masking.seed},
                               {"mode", std::string(to_string(masking.mode))},
                               {"sequential", masking.sequential}}},
              {"eval", Json{{"corpus", detail::corpus_json(eval.corpus)},
                            {"tasks_file", eval.tasks_file},
                            {"teacher_benefit", eval.teacher_benefit}}}};
}

}  // namespace trajforge
