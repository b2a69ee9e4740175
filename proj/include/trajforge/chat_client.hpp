// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "trajforge/core.hpp"
#include "trajforge/transcript.hpp"

namespace trajforge {

/// Connection settings for an OpenAI-compatible chat-completions server.
struct ChatEndpoint {
  std::string base_url = "http://127.0.0.1:8000/v1";
  std::string model;
  std::string api_key_env;  // name of the environment variable holding the key
  int max_tokens = 512;
  int timeout_ms = 60000;
  int attempts = 3;
  int backoff_ms = 500;
};

/// Minimal blocking client for POST {base_url}/chat/completions.
/// Sampling temperature is fixed at 0 and not configurable.
class ChatClient {
 public:
  explicit ChatClient(ChatEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    const auto scheme_end = endpoint_.base_url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = endpoint_.base_url.find('/', host_start);
    if (path_start == std::string::npos) {
      origin_ = endpoint_.base_url;
    } else {
      origin_ = endpoint_.base_url.substr(0, path_start);
      prefix_ = endpoint_.base_url.substr(path_start);
      while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }
  }

  const ChatEndpoint& endpoint() const { return endpoint_; }

  static Json build_request(const std::string& model, const std::vector<ChatMessage>& messages,
                            int max_tokens) {
    Json req;
    req["model"] = model;
    Json msgs = Json::array();
    for (const auto& m : messages) msgs.push_back(Json{{"role", m.role}, {"content", m.content}});
    req["messages"] = std::move(msgs);
    req["temperature"] = 0.0;
    req["max_tokens"] = max_tokens;
    return req;
  }

  /// Returns choices[0].message.content. Transport failures, 429 and 5xx are
  /// retried with exponential backoff; anything else fails immediately.
  std::string complete(const std::vector<ChatMessage>& messages) const {
    const auto body = build_request(endpoint_.model, messages, endpoint_.max_tokens).dump();
    httplib::Headers headers;
    if (!endpoint_.api_key_env.empty()) {
      if (const char* key = std::getenv(endpoint_.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
    }

    std::string last_error;
    const int attempts = std::max(1, endpoint_.attempts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(endpoint_.backoff_ms) *
                                    (1 << (attempt - 1)));
      }
      httplib::Client cli(origin_);
      if (!cli.is_valid()) {
        fail(ErrorCode::remote_unavailable, "unsupported endpoint '" + endpoint_.base_url + "'");
      }
      const auto timeout = std::chrono::milliseconds(endpoint_.timeout_ms);
      cli.set_connection_timeout(timeout);
      cli.set_read_timeout(timeout);
      cli.set_write_timeout(timeout);
      auto res = cli.Post(prefix_ + "/chat/completions", headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200) {
        fail(ErrorCode::remote_unavailable,
             "HTTP " + std::to_string(res->status) + " from " + endpoint_.base_url + ": " +
                 res->body.substr(0, 200));
      }
      try {
        const auto j = Json::parse(res->body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_null()) return {};
        return content.get<std::string>();
      } catch (const Json::exception& e) {
        last_error = std::string("malformed response body: ") + e.what();
      }
    }
    fail(ErrorCode::remote_unavailable, endpoint_.base_url + " after " +
                                            std::to_string(attempts) + " attempts: " + last_error);
  }

 private:
  ChatEndpoint endpoint_;
  std::string origin_;
  std::string prefix_;
};

}  // namespace trajforge
