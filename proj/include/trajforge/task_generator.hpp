// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "trajforge/envs.hpp"
#include "trajforge/jsonl.hpp"

namespace trajforge {

/// Small deterministic RNG wrapper. std::mt19937_64's output sequence is fixed
/// by the standard; the mapping to ranges below is ours so results do not
/// depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  std::size_t below(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }

  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 gen_;
};

/// Seed mixing for derived streams (splitmix64 finaliser over a combined key).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9E3779B97F4A7C15ULL + b + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct CorpusSpec {
  std::uint64_t seed = 0;
  int household = 0;
  int shopping = 0;
  int household_max_steps = 30;
  int shopping_max_steps = 10;
  int context_budget = 16000;
  std::string id_prefix;
};

namespace detail {

template <class T>
std::vector<T> take_distinct(Rng& rng, std::vector<T> pool, std::size_t k) {
  std::vector<T> out;
  while (out.size() < k && !pool.empty()) {
    const auto i = rng.below(pool.size());
    out.push_back(pool[i]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return out;
}

inline Json household_config(Rng& rng, std::string* instruction) {
  const std::vector<std::string> rooms = {"room A", "room B", "room C"};
  const std::vector<std::string> receptacles = {"safe",       "drawer", "cabinet",
                                                "shelf",      "desk",   "countertop",
                                                "sidetable",  "dresser"};
  const std::vector<std::string> heatable = {"mug", "potato", "egg", "cup", "apple"};
  const std::vector<std::string> coolable = {"apple", "potato", "egg", "cup", "plate", "bowl"};
  const std::vector<std::string> portable = {"vase", "book",  "keychain", "pen",  "candle",
                                             "mug",  "apple", "plate",    "bowl", "cup"};

  const auto roll = rng.below(4);
  const std::string modifier = roll < 2 ? "none" : (roll == 2 ? "heated" : "cooled");

  Json locs = Json::array();
  auto add = [&](const std::string& name, const std::string& type) {
    locs.push_back(Json{{"name", name}, {"type", type}});
  };
  add("hallway", "room");
  const auto chosen_rooms = take_distinct(rng, rooms, 1 + rng.below(2));
  for (const auto& r : chosen_rooms) add(r, "room");
  if (modifier == "heated" || rng.below(2) == 0) add("microwave", "microwave");
  if (modifier == "cooled" || rng.below(2) == 0) add("fridge", "fridge");
  const auto room_for_receptacles = HouseholdEnv::kMaxLocations - locs.size();
  const auto chosen_receptacles =
      take_distinct(rng, receptacles, std::min<std::size_t>(room_for_receptacles, 2 + rng.below(2)));
  for (const auto& r : chosen_receptacles) add(r, "receptacle");

  std::string goal_obj;
  if (modifier == "heated") {
    goal_obj = rng.pick(heatable);
  } else if (modifier == "cooled") {
    goal_obj = rng.pick(coolable);
  } else {
    goal_obj = rng.pick(portable);
  }
  const auto goal_recep = rng.pick(chosen_receptacles);

  // Places an object may start at: any room or receptacle except the start.
  std::vector<std::string> spots = chosen_rooms;
  for (const auto& r : chosen_receptacles) spots.push_back(r);
  std::vector<std::string> goal_spots;
  for (const auto& s : spots) {
    if (s != goal_recep) goal_spots.push_back(s);
  }

  Json objects = Json::array();
  objects.push_back(Json{{"name", goal_obj}, {"location", rng.pick(goal_spots)}});
  std::vector<std::string> others;
  for (const auto& p : portable) {
    if (p != goal_obj) others.push_back(p);
  }
  for (const auto& d : take_distinct(rng, others, 2)) {
    objects.push_back(Json{{"name", d}, {"location", rng.pick(spots)}});
  }

  if (modifier == "none") {
    *instruction = "Your task is to: put the " + goal_obj + " in the " + goal_recep + ".";
  } else {
    const std::string verb = modifier == "heated" ? "heat" : "cool";
    *instruction = "Your task is to: " + verb + " the " + goal_obj + " and put it in the " +
                   goal_recep + ".";
  }

  Json cfg;
  cfg["start"] = "hallway";
  cfg["locations"] = std::move(locs);
  cfg["objects"] = std::move(objects);
  cfg["goal"] = Json{{"object", goal_obj}, {"receptacle", goal_recep}, {"modifier", modifier}};
  return cfg;
}

inline std::string money(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline Json shopping_config(Rng& rng, std::string* instruction) {
  const std::vector<std::string> categories = {"shirt",  "shoes", "bag",   "hat",
                                               "jacket", "socks", "scarf", "dress"};
  const std::vector<std::string> colors = {"red", "blue", "black", "white", "green", "grey"};
  const std::vector<std::string> materials = {"cotton", "leather", "wool",
                                              "polyester", "denim", "silk"};
  const std::vector<std::string> sizes = {"small", "medium", "large"};

  struct Draft {
    std::string category, color, material, size;
    int cents = 0;
  };
  auto random_item = [&](const std::string& category) {
    return Draft{category, rng.pick(colors), rng.pick(materials), rng.pick(sizes),
                 500 + static_cast<int>(rng.below(7500))};
  };

  const auto cats = take_distinct(rng, categories, 2 + rng.below(2));
  const std::size_t n_items = 8 + rng.below(7);
  std::vector<Draft> items;
  for (std::size_t i = 0; i < n_items; ++i) items.push_back(random_item(rng.pick(cats)));

  const Draft t = items[rng.below(items.size())];
  std::vector<std::string> req = {t.color, t.material};
  if (rng.below(2) == 0) req.push_back(t.size);
  const int ceiling_dollars = t.cents / 100 + 1 + static_cast<int>(rng.below(20));
  const int ceiling_cents = ceiling_dollars * 100;

  // Near misses in the target's category: one over budget, one missing an attribute.
  Draft over = t;
  over.cents = ceiling_cents + 100 + static_cast<int>(rng.below(3000));
  items.insert(items.begin() + static_cast<std::ptrdiff_t>(rng.below(items.size() + 1)), over);
  Draft near = t;
  for (const auto& c : colors) {
    if (c != t.color) {
      near.color = c;
      break;
    }
  }
  near.cents = 500 + static_cast<int>(rng.below(static_cast<std::size_t>(ceiling_cents - 500)));
  items.insert(items.begin() + static_cast<std::ptrdiff_t>(rng.below(items.size() + 1)), near);

  // Keep the intended item the only full match.
  const Draft& tref = t;
  bool target_seen = false;
  for (auto& it : items) {
    const bool is_target = !target_seen && it.category == tref.category &&
                           it.color == tref.color && it.material == tref.material &&
                           it.size == tref.size && it.cents == tref.cents;
    if (is_target) {
      target_seen = true;
      continue;
    }
    const bool has_all = it.color == tref.color && it.material == tref.material &&
                         (req.size() < 3 || it.size == tref.size);
    if (has_all && it.cents <= ceiling_cents) {
      for (const auto& c : colors) {
        if (c != tref.color) {
          it.color = c;
          break;
        }
      }
    }
  }

  Json catalog = Json::array();
  std::map<std::string, std::vector<std::string>> index;
  for (std::size_t i = 0; i < items.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "P%03zu", i + 1);
    const auto& it = items[i];
    const auto title = it.color + " " + it.material + " " + it.category;
    catalog.push_back(Json{{"id", id},
                           {"title", title},
                           {"tags", Json::array({it.color, it.material, it.size})},
                           {"price", it.cents / 100.0}});
    for (const auto& w : {it.color, it.material, it.category, it.size}) {
      auto& hits = index[w];
      if (hits.empty() || hits.back() != id) hits.push_back(id);
    }
  }
  Json qi = Json::object();
  for (const auto& [term, hits] : index) qi[term] = hits;

  std::string attrs;
  for (std::size_t i = 0; i < req.size(); ++i) {
    if (i) attrs += i + 1 == req.size() ? " and " : ", ";
    attrs += req[i];
  }
  *instruction = "Find me a " + tref.category + " item that is " + attrs + ", with price lower than " +
                 money(ceiling_dollars) + " dollars.";

  Json cfg;
  cfg["catalog"] = std::move(catalog);
  cfg["query_index"] = std::move(qi);
  cfg["requirement"] = Json{{"attributes", req}, {"price_ceiling", ceiling_dollars * 1.0}};
  return cfg;
}

inline std::string task_id(const std::string& prefix, TaskKind kind, int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", n);
  return prefix + std::string(to_string(kind)) + "-" + buf;
}

}  // namespace detail

/// Generates `household` + `shopping` distinct solvable tasks from one seed.
inline std::vector<TaskInstruction> generate_tasks(const CorpusSpec& spec) {
  std::vector<TaskInstruction> out;
  auto produce = [&](TaskKind kind, int count, int max_steps) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(kind) + 1));
    std::set<std::string> seen;
    int attempts = 0;
    while (static_cast<int>(seen.size()) < count) {
      if (++attempts > count * 50 + 100) {
        fail(ErrorCode::config, "cannot generate " + std::to_string(count) + " distinct " +
                                    std::string(to_string(kind)) + " tasks");
      }
      TaskInstruction t;
      t.task_kind = kind;
      t.max_steps = max_steps;
      t.context_budget = spec.context_budget;
      t.env_config = kind == TaskKind::household
                         ? detail::household_config(rng, &t.instruction_text)
                         : detail::shopping_config(rng, &t.instruction_text);
      if (!seen.insert(dump_line(t.env_config)).second) continue;
      t.id = detail::task_id(spec.id_prefix, kind, static_cast<int>(seen.size()));
      if (static_cast<int>(golden_plan(t).size()) > max_steps) {
        fail(ErrorCode::config, "generated " + std::string(to_string(kind)) + " task needs more than " +
                                    std::to_string(max_steps) + " steps");
      }
      out.push_back(std::move(t));
    }
  };
  produce(TaskKind::household, spec.household, spec.household_max_steps);
  produce(TaskKind::shopping, spec.shopping, spec.shopping_max_steps);
  return out;
}

}  // namespace trajforge
