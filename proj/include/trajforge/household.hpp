// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trajforge/environment.hpp"

namespace trajforge {

/// Desk-scale household simulator: a handful of named locations, a few
/// portable objects and a goal "put <object> in <receptacle>", optionally
/// requiring the object to be heated (microwave) or cooled (fridge) first.
///
/// Config JSON:
///   {"start": "hallway",
///    "locations": [{"name": "hallway", "type": "room"}, ...],   // type: room|receptacle|microwave|fridge
///    "objects": [{"name": "vase", "location": "room A"}, ...],
///    "goal": {"object": "vase", "receptacle": "safe", "modifier": "none"}}  // none|heated|cooled
class HouseholdEnv final : public Environment {
 public:
  static constexpr int kMaxLocations = 8;

  enum class LocationType { room, receptacle, microwave, fridge };
  enum class Modifier { none, heated, cooled };

  TaskKind kind() const override { return TaskKind::household; }
  std::unique_ptr<Environment> clone() const override {
    return std::make_unique<HouseholdEnv>(*this);
  }

  std::vector<PlanStep> plan() const override {
    std::vector<PlanStep> out;
    const auto& obj = objects_[goal_object_];
    const auto& goal = obj.name;
    const auto& recep = locations_[goal_receptacle_].name;
    if (goal_satisfied()) {
      out.push_back({"The " + goal + " already seems to be in the " + recep +
                         ". Let me look around to confirm.",
                     "look"});
      return out;
    }
    std::size_t at = agent_;
    if (!obj.held) {
      const auto& where = locations_[obj.location].name;
      if (at != obj.location) {
        out.push_back({"I need to find the " + goal + " first.", "go to " + where});
        at = obj.location;
      }
      out.push_back({"I found the " + goal + " at the " + where + ". I should pick it up.",
                     "take " + goal + " from " + where});
    }
    if (!modifier_met(obj)) {
      const bool heat = modifier_ == Modifier::heated;
      const auto app = appliance(heat ? LocationType::microwave : LocationType::fridge);
      const auto& app_name = locations_[app].name;
      const std::string verb = heat ? "heat" : "cool";
      if (at != app) {
        out.push_back({"Now I need to " + verb + " the " + goal + ", so I should go to the " +
                           app_name + ".",
                       "go to " + app_name});
        at = app;
      }
      out.push_back({"I am at the " + app_name + ". I will " + verb + " the " + goal + " here.",
                     verb + " " + goal + " with " + app_name});
    }
    if (at != goal_receptacle_) {
      out.push_back({"Next, I need to put the " + goal + " in the " + recep + ".",
                     "go to " + recep});
    }
    out.push_back({"I am at the " + recep + " with the " + goal + ". I will put it in.",
                   "put " + goal + " in " + recep});
    return out;
  }

  std::string corrupt(std::string_view planned, ErrorKind kind) const override {
    const auto cmd = parse(planned);
    const auto& goal = objects_[goal_object_].name;
    const auto& recep = locations_[goal_receptacle_].name;
    switch (kind) {
      case ErrorKind::wrong_location: {
        switch (cmd.verb) {
          case Verb::go: return "go to " + other_location({cmd.where, agent_});
          case Verb::take: return "take " + cmd.object_name + " from " + other_location({cmd.where});
          case Verb::heat:
          case Verb::cool:
            return cmd.verb_text + " " + cmd.object_name + " with " + other_location({cmd.where});
          case Verb::put: return "put " + cmd.object_name + " in " + other_location({cmd.where});
          default: return "go to " + other_location({agent_});
        }
      }
      case ErrorKind::wrong_object: {
        const auto d = distractor();
        if (!d) return corrupt(planned, ErrorKind::wrong_location);
        const auto& dname = objects_[*d].name;
        switch (cmd.verb) {
          case Verb::go: {
            const auto& dobj = objects_[*d];
            if (!dobj.held && dobj.location != cmd.where && dobj.location != agent_) {
              return "go to " + locations_[dobj.location].name;
            }
            return "go to " + other_location({cmd.where, agent_});
          }
          case Verb::take: return "take " + dname + " from " + cmd.where_name;
          case Verb::heat:
          case Verb::cool: return cmd.verb_text + " " + dname + " with " + cmd.where_name;
          case Verb::put: return "put " + dname + " in " + cmd.where_name;
          default: return "take " + dname + " from " + locations_[agent_].name;
        }
      }
      case ErrorKind::premature_terminal: {
        const auto terminal = "put " + goal + " in " + recep;
        if (terminal != trim_view(planned) && !valid(parse(terminal))) return terminal;
        return "put " + goal + " in " + other_location({goal_receptacle_, agent_});
      }
    }
    return "look";
  }

  // Test hooks.
  std::string_view agent_location() const { return locations_[agent_].name; }

 protected:
  std::string do_reset(const Json& config) override {
    load(config);
    return "You are in the " + locations_[agent_].name + ". Around you, you see: " +
           list_locations() + ".";
  }

  StepResult do_step(std::string_view action) override {
    const auto cmd = parse(action);
    StepResult r;
    if (!valid(cmd)) {
      r.observation = std::string(kNothingHappens);
    } else {
      r.observation = apply(cmd);
    }
    if (goal_satisfied()) {
      r.done = true;
      r.reward = 1.0;
    }
    return r;
  }

 private:
  struct Location {
    std::string name;
    LocationType type = LocationType::room;
  };
  struct Object {
    std::string name;
    std::size_t location = 0;
    bool held = false;
    bool heated = false;
    bool cooled = false;
  };
  enum class Verb { invalid, go, take, put, heat, cool, look, inventory };
  struct Command {
    Verb verb = Verb::invalid;
    std::string verb_text;
    std::size_t object = npos;
    std::string object_name;
    std::size_t where = npos;
    std::string where_name;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static LocationType location_type(std::string_view s) {
    if (s == "room") return LocationType::room;
    if (s == "receptacle") return LocationType::receptacle;
    if (s == "microwave") return LocationType::microwave;
    if (s == "fridge") return LocationType::fridge;
    fail(ErrorCode::config, "unknown location type '" + std::string(s) + "'");
  }

  void load(const Json& cfg) {
    locations_.clear();
    objects_.clear();
    try {
      std::set<std::string> names;
      for (const auto& l : cfg.at("locations")) {
        Location loc{l.at("name").get<std::string>(),
                     location_type(l.at("type").get<std::string>())};
        if (trim_view(loc.name).empty() || !names.insert(loc.name).second) {
          fail(ErrorCode::config, "location names must be unique and non-empty");
        }
        locations_.push_back(std::move(loc));
      }
      if (locations_.empty() || locations_.size() > kMaxLocations) {
        fail(ErrorCode::config, "household needs 1.." + std::to_string(kMaxLocations) +
                                    " locations");
      }
      agent_ = find_location(cfg.at("start").get<std::string>());
      if (agent_ == npos) fail(ErrorCode::config, "start location does not exist");

      std::set<std::string> onames;
      for (const auto& o : cfg.at("objects")) {
        Object obj;
        obj.name = o.at("name").get<std::string>();
        obj.location = find_location(o.at("location").get<std::string>());
        if (obj.location == npos) {
          fail(ErrorCode::config, "object '" + obj.name + "' sits at an unknown location");
        }
        if (trim_view(obj.name).empty() || !onames.insert(obj.name).second) {
          fail(ErrorCode::config, "object names must be unique and non-empty");
        }
        objects_.push_back(std::move(obj));
      }

      const auto& g = cfg.at("goal");
      goal_object_ = find_object(g.at("object").get<std::string>());
      if (goal_object_ == npos) fail(ErrorCode::config, "goal names a nonexistent object");
      goal_receptacle_ = find_location(g.at("receptacle").get<std::string>());
      if (goal_receptacle_ == npos) {
        fail(ErrorCode::config, "goal names a nonexistent receptacle");
      }
      const auto rtype = locations_[goal_receptacle_].type;
      if (rtype == LocationType::microwave || rtype == LocationType::fridge) {
        fail(ErrorCode::config, "goal receptacle cannot be an appliance");
      }
      const auto mod = g.value("modifier", std::string("none"));
      if (mod == "none") {
        modifier_ = Modifier::none;
      } else if (mod == "heated") {
        modifier_ = Modifier::heated;
      } else if (mod == "cooled") {
        modifier_ = Modifier::cooled;
      } else {
        fail(ErrorCode::config, "unknown goal modifier '" + mod + "'");
      }
      if (modifier_ == Modifier::heated && appliance(LocationType::microwave) == npos) {
        fail(ErrorCode::config, "heated goal without a microwave");
      }
      if (modifier_ == Modifier::cooled && appliance(LocationType::fridge) == npos) {
        fail(ErrorCode::config, "cooled goal without a fridge");
      }
    } catch (const Json::exception& e) {
      fail(ErrorCode::config, std::string("household config: ") + e.what());
    }
  }

  std::size_t find_location(std::string_view name) const {
    for (std::size_t i = 0; i < locations_.size(); ++i) {
      if (locations_[i].name == name) return i;
    }
    return npos;
  }

  std::size_t find_object(std::string_view name) const {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (objects_[i].name == name) return i;
    }
    return npos;
  }

  std::size_t appliance(LocationType type) const {
    for (std::size_t i = 0; i < locations_.size(); ++i) {
      if (locations_[i].type == type) return i;
    }
    return npos;
  }

  bool modifier_met(const Object& o) const {
    switch (modifier_) {
      case Modifier::none: return true;
      case Modifier::heated: return o.heated;
      case Modifier::cooled: return o.cooled;
    }
    return true;
  }

  bool goal_satisfied() const {
    const auto& o = objects_[goal_object_];
    return !o.held && o.location == goal_receptacle_ && modifier_met(o);
  }

  std::optional<std::size_t> distractor() const {
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (i != goal_object_) return i;
    }
    return std::nullopt;
  }

  // First location, in config order, outside `exclude`.
  std::string other_location(std::initializer_list<std::size_t> exclude) const {
    for (std::size_t i = 0; i < locations_.size(); ++i) {
      if (std::find(exclude.begin(), exclude.end(), i) == exclude.end()) {
        return locations_[i].name;
      }
    }
    return "nowhere";
  }

  Command parse(std::string_view text) const {
    Command c;
    const auto s = trim_view(text);
    auto starts = [&](std::string_view p) { return s.substr(0, p.size()) == p; };
    auto object_and_place = [&](std::string_view rest, std::string_view sep) {
      const auto k = rest.find(sep);
      if (k == std::string_view::npos) return false;
      c.object_name = std::string(trim_view(rest.substr(0, k)));
      c.where_name = std::string(trim_view(rest.substr(k + sep.size())));
      c.object = find_object(c.object_name);
      c.where = find_location(c.where_name);
      return true;
    };
    if (s == "look") {
      c.verb = Verb::look;
    } else if (s == "inventory") {
      c.verb = Verb::inventory;
    } else if (starts("go to ")) {
      c.verb = Verb::go;
      c.where_name = std::string(trim_view(s.substr(6)));
      c.where = find_location(c.where_name);
    } else if (starts("take ") && object_and_place(s.substr(5), " from ")) {
      c.verb = Verb::take;
    } else if (starts("put ") && object_and_place(s.substr(4), " in ")) {
      c.verb = Verb::put;
    } else if (starts("heat ") && object_and_place(s.substr(5), " with ")) {
      c.verb = Verb::heat;
      c.verb_text = "heat";
    } else if (starts("cool ") && object_and_place(s.substr(5), " with ")) {
      c.verb = Verb::cool;
      c.verb_text = "cool";
    }
    return c;
  }

  bool valid(const Command& c) const {
    switch (c.verb) {
      case Verb::look:
      case Verb::inventory: return true;
      case Verb::go: return c.where != npos;
      case Verb::take:
        return c.object != npos && c.where != npos && agent_ == c.where &&
               !objects_[c.object].held && objects_[c.object].location == c.where;
      case Verb::put: {
        if (c.object == npos || c.where == npos) return false;
        const auto t = locations_[c.where].type;
        return agent_ == c.where && objects_[c.object].held && t != LocationType::microwave &&
               t != LocationType::fridge;
      }
      case Verb::heat:
      case Verb::cool:
        return c.object != npos && c.where != npos && agent_ == c.where &&
               objects_[c.object].held &&
               locations_[c.where].type ==
                   (c.verb == Verb::heat ? LocationType::microwave : LocationType::fridge);
      case Verb::invalid: return false;
    }
    return false;
  }

  std::string apply(const Command& c) {
    switch (c.verb) {
      case Verb::look:
        return "You are at the " + locations_[agent_].name + ". Here you see: " +
               list_objects_at(agent_) + ".";
      case Verb::inventory: {
        std::string items;
        for (const auto& o : objects_) {
          if (!o.held) continue;
          if (!items.empty()) items += ", ";
          items += with_article(o.name);
        }
        return items.empty() ? "You are not carrying anything."
                             : "You are carrying: " + items + ".";
      }
      case Verb::go:
        if (agent_ == c.where) return "You are already at the " + c.where_name + ".";
        agent_ = c.where;
        return "You arrive at the " + c.where_name + ". Here you see: " +
               list_objects_at(agent_) + ".";
      case Verb::take:
        objects_[c.object].held = true;
        return "You pick up the " + c.object_name + " from the " + c.where_name + ".";
      case Verb::put:
        objects_[c.object].held = false;
        objects_[c.object].location = c.where;
        return "You put the " + c.object_name + " in the " + c.where_name + ".";
      case Verb::heat:
        objects_[c.object].heated = true;
        objects_[c.object].cooled = false;
        return "You heat the " + c.object_name + " using the " + c.where_name + ".";
      case Verb::cool:
        objects_[c.object].cooled = true;
        objects_[c.object].heated = false;
        return "You cool the " + c.object_name + " using the " + c.where_name + ".";
      case Verb::invalid: break;
    }
    return std::string(kNothingHappens);
  }

  static std::string with_article(const std::string& noun) {
    const bool vowel = !noun.empty() && std::string_view("aeiou").find(noun[0]) != std::string_view::npos;
    return (vowel ? "an " : "a ") + noun;
  }

  std::string list_objects_at(std::size_t loc) const {
    std::string out;
    for (const auto& o : objects_) {
      if (o.held || o.location != loc) continue;
      if (!out.empty()) out += ", ";
      out += with_article(o.name);
    }
    return out.empty() ? "nothing" : out;
  }

  std::string list_locations() const {
    std::string out;
    for (std::size_t i = 0; i < locations_.size(); ++i) {
      if (i == agent_) continue;
      if (!out.empty()) out += ", ";
      out += locations_[i].name;
    }
    return out.empty() ? "nothing else" : out;
  }

  std::vector<Location> locations_;
  std::vector<Object> objects_;
  std::size_t agent_ = 0;
  std::size_t goal_object_ = 0;
  std::size_t goal_receptacle_ = 0;
  Modifier modifier_ = Modifier::none;
};

}  // namespace trajforge
