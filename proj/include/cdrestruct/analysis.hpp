// Read-only sharing analysis over a set of entities.
//
// common_props() ranks every group of identically-typed properties shared by
// the same owner set: larger owner sets first, then owner sets that occur for
// more keys, then a name-based tie-break that is independent of entity order.
// Equal owner sets are merged into one Candidate.

#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cdrestruct/model.hpp"

namespace cdrestruct {

struct Candidate {
  std::vector<PropKey> keys;  // sorted, no duplicates
  EntitySet owners;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

using CandidateRanking = std::vector<Candidate>;

// One (key, owner set) pair before collapsing.
struct KeyOwners {
  PropKey key;
  EntitySet owners;

  friend bool operator==(const KeyOwners&, const KeyOwners&) = default;
};

inline std::set<PropKey> prop_type_set(const ClassModel& model, EntityId id) {
  std::set<PropKey> out;
  for (const auto& p : model.entity(id).properties) out.insert(p.key());
  return out;
}

// The entities among `entities` that declare every key in `keys`.
inline EntitySet filter_by_properties(const ClassModel& model, std::span<const PropKey> keys,
                                      std::span<const EntityId> entities) {
  std::vector<EntityId> out;
  for (EntityId id : entities) {
    const Entity& e = model.entity(id);
    if (std::all_of(keys.begin(), keys.end(), [&](const PropKey& k) { return e.declares(k); })) out.push_back(id);
  }
  return make_entity_set(std::move(out));
}

inline std::map<EntitySet, std::size_t> entity_set_frequency(std::span<const KeyOwners> pairs) {
  std::map<EntitySet, std::size_t> freq;
  for (const auto& p : pairs) ++freq[make_entity_set(p.owners)];
  return freq;
}

namespace detail {

// Owner names in ascending order; the tie-break key of an owner set.
inline std::vector<const std::string*> sorted_names(const ClassModel& model, const EntitySet& owners) {
  std::vector<const std::string*> names;
  names.reserve(owners.size());
  for (EntityId id : owners) names.push_back(&model.name_of(id));
  std::sort(names.begin(), names.end(), [](const std::string* a, const std::string* b) { return *a < *b; });
  return names;
}

inline bool names_less(const std::vector<const std::string*>& a, const std::vector<const std::string*>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const std::string* x, const std::string* y) { return *x < *y; });
}

// A PropKey borrowed from a declaration, so grouping copies no strings.
struct KeyRef {
  const PropertyDecl* decl;
  PropKey key() const { return decl->key(); }
  friend bool operator==(KeyRef a, KeyRef b) {
    return a.decl->prop_name == b.decl->prop_name && a.decl->type_name == b.decl->type_name;
  }
};

struct KeyRefHash {
  std::size_t operator()(KeyRef k) const noexcept {
    std::size_t h = std::hash<std::string_view>{}(k.decl->prop_name);
    return h ^ (std::hash<std::string_view>{}(k.decl->type_name) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

// Every (key, owners ∩ classes) pair, owners computed in one sweep.
inline std::unordered_map<KeyRef, std::vector<EntityId>, KeyRefHash> owners_by_key(const ClassModel& model,
                                                                                   const EntitySet& classes) {
  std::unordered_map<KeyRef, std::vector<EntityId>, KeyRefHash> by_key;
  for (EntityId id : classes)
    for (const auto& p : model.entity(id).properties) by_key[KeyRef{&p}].push_back(id);
  return by_key;
}

}  // namespace detail

// The full pair set pes = {(k, filter_by_properties([k], classes))}, sorted by key.
inline std::vector<KeyOwners> shared_pairs(const ClassModel& model, std::span<const EntityId> classes) {
  EntitySet cls = make_entity_set({classes.begin(), classes.end()});
  std::vector<KeyOwners> pairs;
  for (auto& [key, owners] : detail::owners_by_key(model, cls)) pairs.push_back({key.key(), std::move(owners)});
  std::sort(pairs.begin(), pairs.end(), [](const KeyOwners& a, const KeyOwners& b) { return a.key < b.key; });
  return pairs;
}

inline CandidateRanking common_props(const ClassModel& model, std::span<const EntityId> classes) {
  std::vector<KeyOwners> pes = shared_pairs(model, classes);
  std::map<EntitySet, std::size_t> freq = entity_set_frequency(pes);

  std::map<EntitySet, std::vector<const std::string*>> names;
  for (const auto& [owners, _] : freq) names.emplace(owners, detail::sorted_names(model, owners));

  std::sort(pes.begin(), pes.end(), [&](const KeyOwners& a, const KeyOwners& b) {
    if (a.owners.size() != b.owners.size()) return a.owners.size() > b.owners.size();
    std::size_t fa = freq.at(a.owners), fb = freq.at(b.owners);
    if (fa != fb) return fa > fb;
    if (a.owners != b.owners) return detail::names_less(names.at(a.owners), names.at(b.owners));
    return a.key < b.key;
  });

  CandidateRanking ranking;
  for (auto& pair : pes) {
    if (ranking.empty() || ranking.back().owners != pair.owners)
      ranking.push_back({{}, std::move(pair.owners)});
    ranking.back().keys.push_back(std::move(pair.key));
  }
  return ranking;
}

// Equivalent to common_props(model, classes).front(), without ranking the
// whole list. Returns nullopt when `classes` declare no properties.
inline std::optional<Candidate> first_candidate(const ClassModel& model, std::span<const EntityId> classes) {
  EntitySet cls = make_entity_set({classes.begin(), classes.end()});
  std::unordered_map<EntitySet, std::vector<PropKey>, EntitySetHash> groups;
  auto by_key = detail::owners_by_key(model, cls);
  // Singleton owner sets rank last, so they only matter when nothing is shared.
  bool shared = std::any_of(by_key.begin(), by_key.end(), [](const auto& kv) { return kv.second.size() > 1; });
  for (auto& [key, owners] : by_key) {
    if (shared && owners.size() < 2) continue;
    groups[std::move(owners)].push_back(key.key());
  }
  if (groups.empty()) return std::nullopt;

  using Group = decltype(groups)::value_type;
  const Group* best = nullptr;
  std::vector<const std::string*> best_names;
  for (const Group& g : groups) {
    if (best != nullptr) {
      if (g.first.size() != best->first.size()) {
        if (g.first.size() < best->first.size()) continue;
      } else if (g.second.size() != best->second.size()) {
        if (g.second.size() < best->second.size()) continue;
      } else {
        auto names = detail::sorted_names(model, g.first);
        if (!detail::names_less(names, best_names)) continue;
        best = &g;
        best_names = std::move(names);
        continue;
      }
    }
    best = &g;
    best_names = detail::sorted_names(model, g.first);
  }
  Candidate c{best->second, best->first};
  std::sort(c.keys.begin(), c.keys.end());
  return c;
}

}  // namespace cdrestruct
