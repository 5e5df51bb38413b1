// Pull-up rules.
//
//   Rule1  keys shared by every direct subclass move into the existing super.
//   Rule2  keys shared by >= 2 (but not all) direct subclasses move into a new
//          class inserted between those subclasses and the super.
//   Rule3  keys shared by >= 2 top-level classes move into a new top-level
//          class.
//   MultiInheritReuse / MultiInheritNew
//          the final multiple-inheritance pass; every remaining duplicate set
//          gets an additional superclass.
//
// All rule functions check preconditions first and throw RuleError without
// touching the model when one fails.

#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdrestruct/analysis.hpp"
#include "cdrestruct/model.hpp"

namespace cdrestruct {

enum class RuleKind { Rule1, Rule2, Rule3, MultiInheritReuse, MultiInheritNew };

inline std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::Rule1: return "Rule1";
    case RuleKind::Rule2: return "Rule2";
    case RuleKind::Rule3: return "Rule3";
    case RuleKind::MultiInheritReuse: return "MultiInheritReuse";
    case RuleKind::MultiInheritNew: return "MultiInheritNew";
  }
  return "?";
}

struct RuleApplication {
  RuleKind rule = RuleKind::Rule1;
  std::vector<PropKey> keys;
  EntitySet sources;
  EntityId target;
  std::optional<EntityId> created;

  friend bool operator==(const RuleApplication&, const RuleApplication&) = default;
};

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One line per application, e.g. "Rule3 [c:T] {B, C, D} -> NewClass1 (new)".
inline std::string describe(const ClassModel& model, const RuleApplication& app) {
  std::string s(to_string(app.rule));
  s += " [";
  for (std::size_t i = 0; i < app.keys.size(); ++i)
    s += (i ? ", " : "") + app.keys[i].prop_name + ":" + app.keys[i].type_name;
  s += "] {";
  for (std::size_t i = 0; i < app.sources.size(); ++i) s += (i ? ", " : "") + model.name_of(app.sources[i]);
  s += "} -> " + model.name_of(app.target);
  if (app.created) s += " (new)";
  return s;
}

namespace detail {

inline void check_pull_up(const ClassModel& model, std::span<const PropKey> keys, const EntitySet& sources,
                          EntityId target) {
  if (keys.empty()) throw RuleError("pull-up needs at least one property");
  if (sources.empty()) throw RuleError("pull-up needs at least one source entity");
  if (!model.exists(target)) throw RuleError("unknown target entity");
  if (contains(sources, target)) throw RuleError("target " + model.name_of(target) + " is also a source");
  const Entity& t = model.entity(target);
  for (const PropKey& k : keys) {
    if (!model.has_type(k.type_name)) throw RuleError("unresolved type " + k.type_name);
    if (t.find_property(k.prop_name) != nullptr)
      throw RuleError("target " + t.name + " already declares " + k.prop_name);
  }
  for (EntityId s : sources) {
    if (!model.exists(s)) throw RuleError("unknown source entity");
    const Entity& e = model.entity(s);
    for (const PropKey& k : keys)
      if (!e.declares(k))
        throw RuleError("source " + e.name + " does not declare " + k.prop_name + ":" + k.type_name);
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    for (std::size_t j = i + 1; j < keys.size(); ++j)
      if (keys[i].prop_name == keys[j].prop_name) throw RuleError("property " + keys[i].prop_name + " listed twice");
}

inline void move_keys(ClassModel& model, std::span<const PropKey> keys, const EntitySet& sources, EntityId target) {
  for (const PropKey& k : keys) {
    model.add_property(target, k);
    for (EntityId s : sources) model.delete_property(s, k.prop_name);
  }
}

}  // namespace detail

// Moves `keys` from every source into `target`.
inline void pull_up_props(ClassModel& model, std::span<const PropKey> keys, std::span<const EntityId> sources,
                          EntityId target) {
  EntitySet src = make_entity_set({sources.begin(), sources.end()});
  detail::check_pull_up(model, keys, src, target);
  detail::move_keys(model, keys, src, target);
}

namespace detail {

// Rule1/Rule2/Rule3 for an already ranked best candidate of `classes`.
inline std::optional<RuleApplication> apply_candidate(ClassModel& model, std::optional<EntityId> super,
                                                      const EntitySet& cls, Candidate best,
                                                      std::size_t min_subclasses) {
  auto& [keys, owners] = best;

  if (super && owners == cls && cls.size() >= min_subclasses) {
    const Entity& s = model.entity(*super);
    bool clash = std::any_of(keys.begin(), keys.end(), [&](const PropKey& k) { return s.find_property(k.prop_name); });
    if (!clash) {
      detail::check_pull_up(model, keys, owners, *super);
      detail::move_keys(model, keys, owners, *super);
      return RuleApplication{RuleKind::Rule1, std::move(keys), std::move(owners), *super, std::nullopt};
    }
  }
  if (owners.size() <= 1) return std::nullopt;

  EntityId nc = model.create_entity();
  detail::move_keys(model, keys, owners, nc);
  for (EntityId s : owners) {
    if (super) model.delete_generalization(s, *super);
    model.add_generalization(s, nc);
  }
  if (super) model.add_generalization(nc, *super);
  return RuleApplication{super ? RuleKind::Rule2 : RuleKind::Rule3, std::move(keys), std::move(owners), nc, nc};
}

}  // namespace detail

// Applies Rule1, Rule2 (super present) or Rule3 (super absent) for the
// best-ranked candidate of `classes`, or nothing.
//
// Rule1 additionally requires |classes| >= min_subclasses and that `super`
// does not already declare one of the candidate's property names; when either
// fails, the Rule2 path is taken instead.
inline std::optional<RuleApplication> apply_shared_superclass_rule(ClassModel& model, std::optional<EntityId> super,
                                                                   std::span<const EntityId> classes,
                                                                   std::size_t min_subclasses = 2) {
  if (min_subclasses < 1) throw RuleError("min_subclasses must be at least 1");
  for (EntityId c : classes)
    if (!model.exists(c)) throw RuleError("unknown entity in classes");
  EntitySet cls = make_entity_set({classes.begin(), classes.end()});
  if (super) {
    if (!model.exists(*super)) throw RuleError("unknown super entity");
    if (cls != direct_subclasses(model, *super))
      throw RuleError("classes are not the direct subclasses of " + model.name_of(*super));
  }
  if (cls.empty()) return std::nullopt;

  std::optional<Candidate> best = first_candidate(model, cls);
  if (!best) return std::nullopt;
  return detail::apply_candidate(model, super, cls, std::move(*best), min_subclasses);
}

// Removes all remaining declared duplication by giving each duplicate owner
// set an additional superclass. A top-level Synthesized owner that declares
// exactly the candidate's keys is reused as that superclass (smallest name
// first); otherwise a new class is created.
// `observer`, when set, sees each application right after it was made.
inline std::vector<RuleApplication> exploit_multiple_inheritance(
    ClassModel& model, const std::function<void(const RuleApplication&)>& observer = {}) {
  std::vector<EntityId> all;
  all.reserve(model.entity_count());
  for (const Entity& e : model.entities()) all.push_back(e.id);
  const CandidateRanking ranking = common_props(model, all);

  std::vector<RuleApplication> applied;
  for (const Candidate& cand : ranking) {
    if (cand.owners.size() <= 1) break;

    // Earlier applications may have moved some of these keys already.
    EntitySet owners = filter_by_properties(model, cand.keys, cand.owners);
    if (owners.size() < 2) continue;

    std::optional<EntityId> reuse;
    for (EntityId o : owners) {
      const Entity& e = model.entity(o);
      if (e.origin != Origin::Synthesized || !is_top_level(model, o)) continue;
      if (e.properties.size() != cand.keys.size()) continue;
      if (!reuse || e.name < model.name_of(*reuse)) reuse = o;
    }

    if (reuse) {
      EntitySet others;
      for (EntityId o : owners)
        if (o != *reuse) others.push_back(o);
      for (EntityId o : others) {
        for (const PropKey& k : cand.keys) model.delete_property(o, k.prop_name);
        if (!model.has_generalization(o, *reuse)) model.add_generalization(o, *reuse);
      }
      applied.push_back({RuleKind::MultiInheritReuse, cand.keys, std::move(others), *reuse, std::nullopt});
      if (observer) observer(applied.back());
    } else {
      EntityId nc = model.create_entity();
      detail::move_keys(model, cand.keys, owners, nc);
      for (EntityId o : owners) model.add_generalization(o, nc);
      applied.push_back({RuleKind::MultiInheritNew, cand.keys, std::move(owners), nc, nc});
      if (observer) observer(applied.back());
    }
  }
  return applied;
}

}  // namespace cdrestruct
