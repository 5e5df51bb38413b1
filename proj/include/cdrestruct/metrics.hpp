// Model measurements used for reporting and for checking transformation
// outcomes.

#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "cdrestruct/model.hpp"

namespace cdrestruct {

struct MetricsSnapshot {
  std::size_t entity_count = 0;
  std::size_t declaration_count = 0;
  std::size_t duplication_count = 0;
  std::size_t top_level_count = 0;
  std::size_t max_inheritance_depth = 0;

  friend bool operator==(const MetricsSnapshot&, const MetricsSnapshot&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const MetricsSnapshot& m) {
  return os << "entities=" << m.entity_count << " declarations=" << m.declaration_count
            << " duplication=" << m.duplication_count << " top_level=" << m.top_level_count
            << " max_depth=" << m.max_inheritance_depth;
}

// Total number of declared properties.
inline std::size_t declaration_count(const ClassModel& model) {
  std::size_t n = 0;
  for (const Entity& e : model.entities()) n += e.properties.size();
  return n;
}

// Sum over distinct keys of (number of declaring entities - 1).
inline std::size_t duplication_count(const ClassModel& model) {
  std::unordered_map<PropKey, std::size_t, PropKeyHash> owners;
  for (const Entity& e : model.entities())
    for (const auto& p : e.properties) ++owners[p.key()];
  std::size_t dup = 0;
  for (const auto& [_, n] : owners) dup += n - 1;
  return dup;
}

// Length of the longest generalization path starting anywhere; 0 without edges.
inline std::size_t max_inheritance_depth(const ClassModel& model) {
  const std::size_t n = model.entity_count();
  // Kahn's algorithm from the top-level entities downwards.
  std::vector<std::size_t> pending(n), depth(n, 0);
  std::vector<EntityId> ready;
  for (const Entity& e : model.entities()) {
    pending[e.id.value] = model.supers(e.id).size();
    if (pending[e.id.value] == 0) ready.push_back(e.id);
  }
  std::size_t best = 0;
  while (!ready.empty()) {
    EntityId cur = ready.back();
    ready.pop_back();
    best = std::max(best, depth[cur.value]);
    for (EntityId sub : model.subs(cur)) {
      depth[sub.value] = std::max(depth[sub.value], depth[cur.value] + 1);
      if (--pending[sub.value] == 0) ready.push_back(sub);
    }
  }
  return best;
}

inline MetricsSnapshot snapshot(const ClassModel& model) {
  MetricsSnapshot m;
  m.entity_count = model.entity_count();
  m.declaration_count = declaration_count(model);
  m.duplication_count = duplication_count(model);
  for (const Entity& e : model.entities())
    if (model.supers(e.id).empty()) ++m.top_level_count;
  m.max_inheritance_depth = max_inheritance_depth(model);
  return m;
}

// Fraction of the input duplication removed; nullopt when there was none.
inline std::optional<double> effectiveness(const MetricsSnapshot& before, const MetricsSnapshot& after) {
  if (before.duplication_count == 0) return std::nullopt;
  double removed = static_cast<double>(before.duplication_count) - static_cast<double>(after.duplication_count);
  return removed / static_cast<double>(before.duplication_count);
}

namespace detail {

// For each Original entity: its transitive Original ancestors, as sorted ids.
inline std::vector<std::vector<EntityId>> original_ancestors(const ClassModel& model) {
  std::vector<std::vector<EntityId>> out;
  std::vector<std::uint32_t> seen(model.entity_count(), 0);
  std::uint32_t stamp = 0;
  for (const Entity& e : model.entities()) {
    if (e.origin != Origin::Original) continue;
    ++stamp;
    std::vector<EntityId> ancestors;
    std::vector<EntityId> stack(model.supers(e.id).begin(), model.supers(e.id).end());
    while (!stack.empty()) {
      EntityId cur = stack.back();
      stack.pop_back();
      if (seen[cur.value] == stamp) continue;
      seen[cur.value] = stamp;
      if (model.entity(cur).origin == Origin::Original) ancestors.push_back(cur);
      for (EntityId g : model.supers(cur)) stack.push_back(g);
    }
    std::sort(ancestors.begin(), ancestors.end());
    out.push_back(std::move(ancestors));
  }
  return out;
}

}  // namespace detail

// True iff the transitive specialization relation restricted to Original
// entities is the same in both models. Throws std::invalid_argument when the
// Original entities of the two models do not correspond.
inline bool hierarchy_restriction_equal(const ClassModel& before, const ClassModel& after) {
  auto originals = [](const ClassModel& m) {
    std::vector<std::pair<EntityId, std::string>> out;
    for (const Entity& e : m.entities())
      if (e.origin == Origin::Original) out.emplace_back(e.id, e.name);
    return out;
  };
  if (originals(before) != originals(after))
    throw std::invalid_argument("models do not share the same Original entities");
  return detail::original_ancestors(before) == detail::original_ancestors(after);
}

}  // namespace cdrestruct
