// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trajforge/core.hpp"

namespace trajforge {

inline constexpr std::string_view kThoughtMarker = "Thought:";
inline constexpr std::string_view kActionMarker = "Action:";

struct ReactPair {
  std::string thought;
  std::string action;

  friend bool operator==(const ReactPair&, const ReactPair&) = default;
};

enum class ReactDefect { none, missing_marker, empty_field, out_of_order, duplicate_marker };

inline std::string_view to_string(ReactDefect d) {
  switch (d) {
    case ReactDefect::none: return "none";
    case ReactDefect::missing_marker: return "missing_marker";
    case ReactDefect::empty_field: return "empty_field";
    case ReactDefect::out_of_order: return "out_of_order";
    case ReactDefect::duplicate_marker: return "duplicate_marker";
  }
  return "?";
}

struct ReactParse {
  std::optional<ReactPair> pair;
  ReactDefect defect = ReactDefect::none;
  std::string diagnostic;
  // Set when text outside the two-field template (preamble or trailing lines)
  // was dropped.
  bool lenient = false;

  bool ok() const { return pair.has_value(); }
};

namespace detail {

enum class Marker { none, thought, action };

// Markers count only at the start of a line, after optional whitespace.
inline Marker line_marker(std::string_view line, std::string_view* rest) {
  auto pos = line.find_first_not_of(" \t");
  if (pos == std::string_view::npos) return Marker::none;
  line.remove_prefix(pos);
  if (line.substr(0, kThoughtMarker.size()) == kThoughtMarker) {
    *rest = line.substr(kThoughtMarker.size());
    return Marker::thought;
  }
  if (line.substr(0, kActionMarker.size()) == kActionMarker) {
    *rest = line.substr(kActionMarker.size());
    return Marker::action;
  }
  return Marker::none;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline ReactParse reject(ReactDefect d, std::string msg) {
  ReactParse p;
  p.defect = d;
  p.diagnostic = std::move(msg);
  return p;
}

}  // namespace detail

/// Parses "Thought: ...\nAction: ...". Never throws; malformed input is
/// reported through ReactParse::defect.
inline ReactParse parse_react(std::string_view text) {
  using detail::Marker;
  const auto lines = detail::split_lines(text);

  std::size_t thought_line = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view rest;
    const auto m = detail::line_marker(lines[i], &rest);
    if (m == Marker::thought) {
      thought_line = i;
      break;
    }
    if (m == Marker::action) {
      for (std::size_t k = i + 1; k < lines.size(); ++k) {
        if (detail::line_marker(lines[k], &rest) == Marker::thought) {
          return detail::reject(ReactDefect::out_of_order, "Action: appears before Thought:");
        }
      }
      return detail::reject(ReactDefect::missing_marker, "missing Thought: marker");
    }
  }
  if (thought_line == lines.size()) {
    return detail::reject(ReactDefect::missing_marker, "missing Thought: marker");
  }

  bool lenient = false;
  for (std::size_t i = 0; i < thought_line; ++i) {
    if (!trim_view(lines[i]).empty()) lenient = true;
  }

  std::string_view first_rest;
  detail::line_marker(lines[thought_line], &first_rest);
  std::string thought(first_rest);
  std::size_t action_line = lines.size();
  std::string_view action_rest;
  for (std::size_t i = thought_line + 1; i < lines.size(); ++i) {
    std::string_view rest;
    const auto m = detail::line_marker(lines[i], &rest);
    if (m == Marker::thought) {
      return detail::reject(ReactDefect::duplicate_marker, "second Thought: before Action:");
    }
    if (m == Marker::action) {
      action_line = i;
      action_rest = rest;
      break;
    }
    thought += '\n';
    thought += lines[i];
  }
  if (action_line == lines.size()) {
    return detail::reject(ReactDefect::missing_marker, "missing Action: marker");
  }

  ReactParse out;
  auto t = trim(thought);
  auto a = trim(action_rest);
  if (t.empty()) return detail::reject(ReactDefect::empty_field, "empty thought");
  if (a.empty()) return detail::reject(ReactDefect::empty_field, "empty action");
  for (std::size_t i = action_line + 1; i < lines.size(); ++i) {
    if (!trim_view(lines[i]).empty()) lenient = true;
  }
  out.pair = ReactPair{std::move(t), std::move(a)};
  out.lenient = lenient;
  if (lenient) out.diagnostic = "content outside the Thought/Action template was dropped";
  return out;
}

inline ReactPair parse_react_or_throw(std::string_view text) {
  auto p = parse_react(text);
  if (!p.ok()) fail(ErrorCode::malformed_react, p.diagnostic);
  return *p.pair;
}

/// Renders the two-field template. Inputs are trimmed; the thought may span
/// lines but none of its lines may begin with a marker.
inline std::string render_react(std::string_view thought, std::string_view action) {
  const auto t = trim_view(thought);
  const auto a = trim_view(action);
  if (t.empty()) fail(ErrorCode::invalid_field, "thought is empty");
  if (a.empty()) fail(ErrorCode::invalid_field, "action is empty");
  if (a.find('\n') != std::string_view::npos || a.find('\r') != std::string_view::npos) {
    fail(ErrorCode::invalid_field, "action spans multiple lines");
  }
  const auto lines = detail::split_lines(t);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::string_view rest;
    if (detail::line_marker(lines[i], &rest) != detail::Marker::none) {
      fail(ErrorCode::invalid_field, "thought contains a line starting with a ReAct marker");
    }
  }
  std::string out;
  out.reserve(t.size() + a.size() + 18);
  out.append(kThoughtMarker).append(" ").append(t);
  out.append("\n").append(kActionMarker).append(" ").append(a);
  return out;
}

}  // namespace trajforge
