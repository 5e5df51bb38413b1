// Fixpoint driver: alternate the Rule1/Rule2 pass and the Rule3 pass until
// neither changes the model, then optionally run the multiple-inheritance
// pass once.

#pragma once

#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cdrestruct/metrics.hpp"
#include "cdrestruct/model.hpp"
#include "cdrestruct/rules.hpp"

namespace cdrestruct {

struct EngineOptions {
  bool multi_inheritance = false;
  std::size_t min_subclasses = 2;
  std::optional<std::size_t> max_iterations;
  bool trace = false;
  // Receives one line per application when `trace` is set; std::clog if null.
  std::ostream* trace_stream = nullptr;
  // Called after every successful rule application.
  std::function<void(const ClassModel&, const RuleApplication&)> on_application;
};

struct RestructureReport {
  std::vector<RuleApplication> applications;
  std::size_t iterations = 0;
  EntitySet created_entities;
  MetricsSnapshot metrics_before;
  MetricsSnapshot metrics_after;
};

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when max_iterations passes did not reach a fixpoint. The model is
// left in the consistent state reached after the last pass.
class IterationLimitExceeded : public EngineError {
 public:
  IterationLimitExceeded(std::size_t limit, RestructureReport partial)
      : EngineError("no fixpoint after " + std::to_string(limit) + " iterations"), report_(std::move(partial)) {}
  const RestructureReport& report() const noexcept { return report_; }

 private:
  RestructureReport report_;
};

namespace detail {

inline void record(const ClassModel& model, const EngineOptions& options, std::vector<RuleApplication>* log,
                   RuleApplication app) {
  if (options.trace) (options.trace_stream ? *options.trace_stream : std::clog) << describe(model, app) << '\n';
  if (options.on_application) options.on_application(model, app);
  if (log) log->push_back(std::move(app));
}

inline void check_options(const EngineOptions& options) {
  if (options.min_subclasses < 1) throw std::invalid_argument("min_subclasses must be at least 1");
  if (options.max_iterations && *options.max_iterations < 1)
    throw std::invalid_argument("max_iterations must be at least 1");
}

}  // namespace detail

// Remembers superclasses whose Rule1/Rule2 evaluation applied nothing, with
// the model clock at that point. Such a superclass is skipped until it or one
// of its direct subclasses changes, since nothing else feeds the evaluation.
class QuietSuperclasses {
 public:
  bool still_quiet(const ClassModel& model, EntityId super) const {
    if (super.value >= since_.size() || since_[super.value] == 0) return false;
    std::uint64_t t = since_[super.value];
    if (model.revision(super) > t) return false;
    for (EntityId sub : model.subs(super))
      if (model.revision(sub) > t) return false;
    return true;
  }
  void mark(const ClassModel& model, EntityId super) {
    if (super.value >= since_.size()) since_.resize(model.entity_count(), 0);
    since_[super.value] = model.clock();
  }

 private:
  std::vector<std::uint64_t> since_;
};

// Rule1/Rule2 for every entity of the entity list as it was when the pass
// started. Entities created during the pass are first visited by the next one.
inline bool pass_rules_1_2(ClassModel& model, const EngineOptions& options,
                           std::vector<RuleApplication>* log = nullptr, QuietSuperclasses* quiet = nullptr) {
  const std::size_t snapshot_size = model.entity_count();
  bool applied = false;
  for (std::uint32_t i = 0; i < snapshot_size; ++i) {
    EntityId super{i};
    if (model.subs(super).empty()) continue;
    if (quiet && quiet->still_quiet(model, super)) continue;
    EntitySet classes = direct_subclasses(model, super);
    if (auto app = apply_shared_superclass_rule(model, super, classes, options.min_subclasses)) {
      detail::record(model, options, log, std::move(*app));
      applied = true;
    } else if (quiet) {
      quiet->mark(model, super);
    }
  }
  return applied;
}

// Owner sets of the properties of top-level entities, kept up to date from
// entity revisions instead of being rebuilt for every Rule3 attempt. Only
// owner sets with at least two members are ranked: a single owner never makes
// Rule3 apply.
class TopLevelCandidates {
 public:
  // Equal to first_candidate(model, top_level_entities(model)) whenever that
  // candidate has two or more owners; nullopt otherwise.
  std::optional<Candidate> best(const ClassModel& model) {
    sync(model);
    if (ranked_.empty()) return std::nullopt;
    const Rank& top = *ranked_.begin();
    const auto& keys = groups_.at(top.owners);
    return Candidate{{keys.begin(), keys.end()}, top.owners};
  }

 private:
  struct Rank {
    std::size_t frequency;
    std::vector<std::string> names;  // sorted owner names
    EntitySet owners;

    friend bool operator<(const Rank& a, const Rank& b) {
      if (a.owners.size() != b.owners.size()) return a.owners.size() > b.owners.size();
      if (a.frequency != b.frequency) return a.frequency > b.frequency;
      return a.names < b.names;
    }
  };

  void sync(const ClassModel& model) {
    indexed_.resize(model.entity_count());
    for (const Entity& e : model.entities()) {
      if (model.revision(e.id) <= synced_) continue;
      for (const PropKey& k : indexed_[e.id.value]) move_owner(model, k, e.id, false);
      indexed_[e.id.value].clear();
      if (!model.supers(e.id).empty()) continue;
      for (const auto& p : e.properties) {
        indexed_[e.id.value].push_back(p.key());
        move_owner(model, indexed_[e.id.value].back(), e.id, true);
      }
    }
    synced_ = model.clock();
  }

  void move_owner(const ClassModel& model, const PropKey& key, EntityId id, bool add) {
    EntitySet& owners = owners_[key];
    leave_group(model, owners, key);
    auto it = std::lower_bound(owners.begin(), owners.end(), id);
    if (add) owners.insert(it, id);
    else owners.erase(it);
    if (owners.empty()) {
      owners_.erase(key);
      return;
    }
    enter_group(model, owners, key);
  }

  void leave_group(const ClassModel& model, const EntitySet& owners, const PropKey& key) {
    if (owners.size() < 2) return;
    auto group = groups_.find(owners);
    ranked_.erase(rank(model, owners, group->second.size()));
    group->second.erase(key);
    if (group->second.empty()) groups_.erase(group);
    else ranked_.insert(rank(model, owners, group->second.size()));
  }

  void enter_group(const ClassModel& model, const EntitySet& owners, const PropKey& key) {
    if (owners.size() < 2) return;
    auto& keys = groups_[owners];
    if (!keys.empty()) ranked_.erase(rank(model, owners, keys.size()));
    keys.insert(key);
    ranked_.insert(rank(model, owners, keys.size()));
  }

  static Rank rank(const ClassModel& model, const EntitySet& owners, std::size_t frequency) {
    Rank r{frequency, {}, owners};
    for (EntityId id : owners) r.names.push_back(model.name_of(id));
    std::sort(r.names.begin(), r.names.end());
    return r;
  }

  std::uint64_t synced_ = 0;
  std::vector<std::vector<PropKey>> indexed_;
  std::unordered_map<PropKey, EntitySet, PropKeyHash> owners_;
  std::map<EntitySet, std::set<PropKey>> groups_;
  std::set<Rank> ranked_;
};

// One Rule3 attempt over all current top-level entities.
inline bool pass_rule_3(ClassModel& model, const EngineOptions& options, std::vector<RuleApplication>* log = nullptr,
                        TopLevelCandidates* index = nullptr) {
  std::optional<RuleApplication> app;
  if (index) {
    if (auto best = index->best(model))
      app = detail::apply_candidate(model, std::nullopt, make_entity_set(top_level_entities(model)), std::move(*best),
                                    options.min_subclasses);
  } else {
    app = apply_shared_superclass_rule(model, std::nullopt, top_level_entities(model), options.min_subclasses);
  }
  if (!app) return false;
  detail::record(model, options, log, std::move(*app));
  return true;
}

inline RestructureReport restructure(ClassModel& model, const EngineOptions& options = {}) {
  detail::check_options(options);
  if (auto problems = validate(model); !problems.empty())
    throw EngineError("input model is invalid: " + problems.front());

  RestructureReport report;
  report.metrics_before = snapshot(model);
  const std::size_t original_count = model.entity_count();
  auto finish = [&] {
    report.created_entities.clear();
    for (std::size_t i = original_count; i < model.entity_count(); ++i)
      report.created_entities.push_back(EntityId{static_cast<std::uint32_t>(i)});
    report.metrics_after = snapshot(model);
  };

  QuietSuperclasses quiet;
  TopLevelCandidates top_level;
  for (;;) {
    if (options.max_iterations && report.iterations == *options.max_iterations) {
      finish();
      throw IterationLimitExceeded(*options.max_iterations, std::move(report));
    }
    ++report.iterations;
    bool r12 = pass_rules_1_2(model, options, &report.applications, &quiet);
    bool r3 = pass_rule_3(model, options, &report.applications, &top_level);
    if (!r12 && !r3) break;
  }

  if (options.multi_inheritance) {
    exploit_multiple_inheritance(model, [&](const RuleApplication& app) {
      detail::record(model, options, &report.applications, app);
    });
  }
  finish();
  return report;
}

}  // namespace cdrestruct
