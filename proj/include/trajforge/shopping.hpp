// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trajforge/environment.hpp"

namespace trajforge {

/// Desk-scale web-shopping simulator with three page kinds (search, results,
/// item) and a graded reward at purchase time:
///   reward = |required attributes present on the item| / |required attributes|,
///   halved when the item's price exceeds the ceiling.
///
/// Config JSON:
///   {"catalog": [{"id": "P001", "title": "red cotton shirt",
///                 "tags": ["red", "cotton"], "price": 25.0}, ...],
///    "query_index": {"shirt": ["P001", ...], ...},
///    "requirement": {"attributes": ["red", "cotton"], "price_ceiling": 30.0}}
class ShoppingEnv final : public Environment {
 public:
  static constexpr std::size_t kMaxCatalog = 50;

  struct Item {
    std::string id;
    std::string title;
    std::vector<std::string> tags;
    double price = 0.0;
  };

  struct Requirement {
    std::vector<std::string> attributes;
    double price_ceiling = 0.0;
  };

  static double purchase_reward(const Item& item, const Requirement& req) {
    std::size_t matched = 0;
    for (const auto& a : req.attributes) {
      if (std::find(item.tags.begin(), item.tags.end(), a) != item.tags.end()) ++matched;
    }
    const double fraction =
        static_cast<double>(matched) / static_cast<double>(req.attributes.size());
    return item.price <= req.price_ceiling ? fraction : fraction * 0.5;
  }

  static bool satisfies(const Item& item, const Requirement& req) {
    return purchase_reward(item, req) == 1.0;
  }

  TaskKind kind() const override { return TaskKind::shopping; }
  std::unique_ptr<Environment> clone() const override {
    return std::make_unique<ShoppingEnv>(*this);
  }

  std::vector<PlanStep> plan() const override {
    const auto& t = catalog_[target_];
    std::vector<PlanStep> out;
    const bool on_target = page_ == Page::item && item_ == target_;
    if (!on_target) {
      if (!(page_ != Page::search && in_results(target_))) {
        out.push_back({"I should search for " + golden_term_ +
                           " items that could match the requirements.",
                       "search[" + golden_term_ + "]"});
      }
      out.push_back({"Item " + t.id + " looks like it is " + join(requirement_.attributes, " and ") +
                         " within my budget. I will check it.",
                     "click[" + t.id + "]"});
    }
    out.push_back({"This item satisfies the requirements. I will buy it.", "click[buy now]"});
    return out;
  }

  std::string corrupt(std::string_view planned, ErrorKind kind) const override {
    const auto p = trim_view(planned);
    const bool is_search = p.substr(0, 7) == "search[";
    const bool is_buy = p == "click[buy now]";
    switch (kind) {
      case ErrorKind::premature_terminal:
        return is_buy ? "click[buy]" : "click[buy now]";
      case ErrorKind::wrong_location:
        if (is_search) return "search[" + term_without_target(std::nullopt) + "]";
        return "click[" + item_off_page(false) + "]";
      case ErrorKind::wrong_object:
        if (is_search) return "search[" + term_without_target(distractor()) + "]";
        if (!is_buy) {
          for (auto i : results_) {
            if (i != target_ && !satisfies(catalog_[i], requirement_)) {
              return "click[" + catalog_[i].id + "]";
            }
          }
        }
        return "click[" + item_off_page(true) + "]";
    }
    return "click[buy]";
  }

  const std::vector<Item>& catalog() const { return catalog_; }
  const Requirement& requirement() const { return requirement_; }
  const std::string& golden_term() const { return golden_term_; }

 protected:
  std::string do_reset(const Json& config) override {
    load(config);
    page_ = Page::search;
    results_.clear();
    query_.clear();
    return "You are on the search page.";
  }

  StepResult do_step(std::string_view action) override {
    StepResult r;
    r.observation = std::string(kNothingHappens);
    if (action.size() >= 8 && action.substr(0, 7) == "search[" && action.back() == ']') {
      query_ = std::string(trim_view(action.substr(7, action.size() - 8)));
      results_ = search(query_);
      page_ = Page::results;
      r.observation = render_results();
      return r;
    }
    if (action.size() >= 7 && action.substr(0, 6) == "click[" && action.back() == ']') {
      const auto value = trim_view(action.substr(6, action.size() - 7));
      if (value == "buy now") {
        if (page_ != Page::item) return r;
        const auto& item = catalog_[item_];
        r.reward = purchase_reward(item, requirement_);
        r.done = true;
        r.observation = "You bought " + item.title + " for $" + money(item.price) + ".";
        return r;
      }
      if (value == "back") {
        if (page_ == Page::item) {
          page_ = Page::results;
          r.observation = render_results();
        } else if (page_ == Page::results) {
          page_ = Page::search;
          results_.clear();
          query_.clear();
          r.observation = "You are on the search page.";
        }
        return r;
      }
      if (page_ == Page::search) return r;
      for (auto i : results_) {
        if (catalog_[i].id == value) {
          page_ = Page::item;
          item_ = i;
          r.observation = render_item(catalog_[i]);
          return r;
        }
      }
    }
    return r;
  }

 private:
  enum class Page { search, results, item };

  static std::string money(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
  }

  static std::string join(const std::vector<std::string>& v, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += sep;
      out += v[i];
    }
    return out;
  }

  void load(const Json& cfg) {
    catalog_.clear();
    index_.clear();
    try {
      std::set<std::string> ids;
      for (const auto& j : cfg.at("catalog")) {
        Item it;
        it.id = j.at("id").get<std::string>();
        it.title = j.at("title").get<std::string>();
        it.tags = j.at("tags").get<std::vector<std::string>>();
        it.price = j.at("price").get<double>();
        if (it.id.empty() || !ids.insert(it.id).second) {
          fail(ErrorCode::config, "catalog ids must be unique and non-empty");
        }
        if (!(it.price >= 0.0)) fail(ErrorCode::config, "negative price for " + it.id);
        catalog_.push_back(std::move(it));
      }
      if (catalog_.empty() || catalog_.size() > kMaxCatalog) {
        fail(ErrorCode::config, "catalog size must be 1.." + std::to_string(kMaxCatalog));
      }
      for (const auto& [term, list] : cfg.at("query_index").items()) {
        std::vector<std::size_t> hits;
        for (const auto& id : list) {
          const auto k = find_item(id.get<std::string>());
          if (!k) fail(ErrorCode::config, "query_index references unknown item");
          hits.push_back(*k);
        }
        std::sort(hits.begin(), hits.end());
        index_[term] = std::move(hits);
      }
      const auto& rq = cfg.at("requirement");
      requirement_.attributes = rq.at("attributes").get<std::vector<std::string>>();
      requirement_.price_ceiling = rq.at("price_ceiling").get<double>();
      if (requirement_.attributes.empty()) {
        fail(ErrorCode::config, "requirement needs at least one attribute");
      }
    } catch (const Json::exception& e) {
      fail(ErrorCode::config, std::string("shopping config: ") + e.what());
    }

    std::optional<std::size_t> target;
    for (std::size_t i = 0; i < catalog_.size() && !target; ++i) {
      if (satisfies(catalog_[i], requirement_)) target = i;
    }
    if (!target) fail(ErrorCode::config, "no catalog item satisfies the requirement");
    target_ = *target;

    // Golden search term: the indexed term with the fewest hits that still
    // lists the target; ties break alphabetically.
    golden_term_.clear();
    std::size_t best = static_cast<std::size_t>(-1);
    for (const auto& [term, hits] : index_) {
      if (std::find(hits.begin(), hits.end(), target_) == hits.end()) continue;
      if (hits.size() < best) {
        best = hits.size();
        golden_term_ = term;
      }
    }
    if (golden_term_.empty()) {
      fail(ErrorCode::config, "no indexed search term reaches the satisfying item");
    }
  }

  std::optional<std::size_t> find_item(std::string_view id) const {
    for (std::size_t i = 0; i < catalog_.size(); ++i) {
      if (catalog_[i].id == id) return i;
    }
    return std::nullopt;
  }

  // Every whitespace-separated word must be an indexed term; the result is
  // the intersection of their hit lists.
  std::vector<std::size_t> search(std::string_view q) const {
    std::vector<std::size_t> acc;
    bool first = true;
    std::size_t pos = 0;
    while (pos < q.size()) {
      const auto start = q.find_first_not_of(' ', pos);
      if (start == std::string_view::npos) break;
      auto end = q.find(' ', start);
      if (end == std::string_view::npos) end = q.size();
      std::string word(q.substr(start, end - start));
      std::transform(word.begin(), word.end(), word.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      pos = end;
      const auto it = index_.find(word);
      if (it == index_.end()) return {};
      if (first) {
        acc = it->second;
        first = false;
      } else {
        std::vector<std::size_t> both;
        std::set_intersection(acc.begin(), acc.end(), it->second.begin(), it->second.end(),
                              std::back_inserter(both));
        acc = std::move(both);
      }
    }
    return acc;
  }

  bool in_results(std::size_t i) const {
    return std::find(results_.begin(), results_.end(), i) != results_.end();
  }

  std::optional<std::size_t> distractor() const {
    for (std::size_t i = 0; i < catalog_.size(); ++i) {
      if (!satisfies(catalog_[i], requirement_)) return i;
    }
    return std::nullopt;
  }

  // An indexed term whose hits exclude the target (and include `prefer` when
  // given). Falls back to a term nothing matches.
  std::string term_without_target(std::optional<std::size_t> prefer) const {
    std::string fallback;
    for (const auto& [term, hits] : index_) {
      if (std::find(hits.begin(), hits.end(), target_) != hits.end()) continue;
      if (!prefer || std::find(hits.begin(), hits.end(), *prefer) != hits.end()) return term;
      if (fallback.empty()) fallback = term;
    }
    return fallback.empty() ? "unavailable" : fallback;
  }

  // Id of a catalog item not clickable from the current page.
  std::string item_off_page(bool from_back) const {
    if (from_back) {
      for (std::size_t i = catalog_.size(); i-- > 0;) {
        if (!in_results(i)) return catalog_[i].id;
      }
    } else {
      for (std::size_t i = 0; i < catalog_.size(); ++i) {
        if (!in_results(i)) return catalog_[i].id;
      }
    }
    return "P999";
  }

  std::string render_results() const {
    if (results_.empty()) return "No results for \"" + query_ + "\".";
    std::string out = "Results for \"" + query_ + "\": ";
    for (std::size_t k = 0; k < results_.size(); ++k) {
      const auto& it = catalog_[results_[k]];
      if (k) out += " | ";
      out += "[" + it.id + "] " + it.title + " $" + money(it.price);
    }
    return out;
  }

  static std::string render_item(const Item& it) {
    return "[" + it.id + "] " + it.title + " | attributes: " + join(it.tags, ", ") +
           " | price: $" + money(it.price) + " | Actions: click[buy now], click[back]";
  }

  std::vector<Item> catalog_;
  std::map<std::string, std::vector<std::size_t>> index_;
  Requirement requirement_;
  std::size_t target_ = 0;
  std::string golden_term_;

  Page page_ = Page::search;
  std::string query_;
  std::vector<std::size_t> results_;
  std::size_t item_ = 0;
};

}  // namespace trajforge
