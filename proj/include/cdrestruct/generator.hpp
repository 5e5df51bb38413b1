// Seeded synthetic models for scaling runs.
//
//   FlatShared       n groups of 2-5 top-level classes sharing a group
//                    property set, some pairwise-shared and private
//                    properties, and occasional properties from a small
//                    global pool (Rule3 and the multiple-inheritance pass).
//   StarHierarchies  n stars: one superclass over 2-5 subclasses that share
//                    some properties fully and some partially (Rule1, Rule2);
//                    some stars hang below an earlier star.
//   Mixed            each unit is a flat group or a star, by coin flip.
//
// These are stand-ins exercising each rule class, not reconstructions of any
// particular benchmark. Only std::mt19937_64 raw output is used, so a spec
// produces the same model on every platform.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdrestruct/model.hpp"

namespace cdrestruct {

enum class ModelFamily { FlatShared, StarHierarchies, Mixed };

inline std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::FlatShared: return "flat";
    case ModelFamily::StarHierarchies: return "star";
    case ModelFamily::Mixed: return "mixed";
  }
  return "?";
}

inline std::optional<ModelFamily> parse_family(std::string_view s) {
  if (s == "flat" || s == "FlatShared") return ModelFamily::FlatShared;
  if (s == "star" || s == "StarHierarchies") return ModelFamily::StarHierarchies;
  if (s == "mixed" || s == "Mixed") return ModelFamily::Mixed;
  return std::nullopt;
}

struct GeneratorSpec {
  ModelFamily family = ModelFamily::Mixed;
  std::uint64_t scale = 1;
  std::uint64_t seed = 0;
};

// Entities + property declarations + generalizations.
inline std::size_t element_count(const ClassModel& model) {
  std::size_t n = model.entity_count() + model.generalization_count();
  for (const Entity& e : model.entities()) n += e.properties.size();
  return n;
}

namespace detail {

class ModelBuilder {
 public:
  explicit ModelBuilder(std::uint64_t seed) : rng_(seed) {
    for (auto t : kTypes) model_.add_type(std::string(t));
  }

  // Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) { return lo + rng_() % (hi - lo + 1); }
  bool chance(unsigned percent) { return rng_() % 100 < percent; }
  std::string type() { return std::string(kTypes[uniform(0, kTypes.size() - 1)]); }

  void maybe_global(EntityId e, unsigned percent) {
    if (!chance(percent)) return;
    const auto& [name, type] = kGlobal[uniform(0, kGlobal.size() - 1)];
    model_.add_property(e, {std::string(name), std::string(type)});
  }

  void flat_group(const std::string& prefix) {
    std::size_t k = uniform(2, 5);
    std::vector<PropKey> shared;
    for (std::size_t j = 0, n = uniform(1, 3); j < n; ++j) shared.push_back({prefix + "s" + std::to_string(j), type()});
    std::vector<EntityId> members;
    for (std::size_t i = 0; i < k; ++i) {
      EntityId e = model_.add_entity(prefix + "C" + std::to_string(i));
      members.push_back(e);
      for (const auto& key : shared) model_.add_property(e, key);
      for (std::size_t j = 0, n = uniform(0, 2); j < n; ++j)
        model_.add_property(e, {prefix + "c" + std::to_string(i) + "p" + std::to_string(j), type()});
      maybe_global(e, 25);
    }
    partial_share(members, prefix + "q");
  }

  void star(const std::string& prefix, std::vector<EntityId>& roots) {
    EntityId root = model_.add_entity(prefix + "S");
    for (std::size_t j = 0, n = uniform(0, 1); j < n; ++j)
      model_.add_property(root, {prefix + "r" + std::to_string(j), type()});
    if (!roots.empty() && chance(20)) model_.add_generalization(root, roots[uniform(0, roots.size() - 1)]);
    roots.push_back(root);

    std::size_t m = uniform(2, 5);
    std::vector<PropKey> full;
    for (std::size_t j = 0, n = uniform(1, 2); j < n; ++j) full.push_back({prefix + "f" + std::to_string(j), type()});
    std::vector<EntityId> subs;
    for (std::size_t i = 0; i < m; ++i) {
      EntityId e = model_.add_entity(prefix + "K" + std::to_string(i));
      subs.push_back(e);
      model_.add_generalization(e, root);
      for (const auto& key : full) model_.add_property(e, key);
      for (std::size_t j = 0, n = uniform(0, 2); j < n; ++j)
        model_.add_property(e, {prefix + "k" + std::to_string(i) + "p" + std::to_string(j), type()});
      maybe_global(e, 20);
    }
    partial_share(subs, prefix + "h");
  }

  ClassModel take() { return std::move(model_); }

 private:
  // A property declared by a random subset of at least two but not all members.
  void partial_share(const std::vector<EntityId>& members, const std::string& name) {
    if (members.size() < 3 || !chance(50)) return;
    std::size_t count = uniform(2, members.size() - 1);
    std::vector<EntityId> pool = members;
    PropKey key{name, type()};
    for (std::size_t i = 0; i < count; ++i) {
      std::size_t pick = uniform(i, pool.size() - 1);
      std::swap(pool[i], pool[pick]);
      model_.add_property(pool[i], key);
    }
  }

  static constexpr std::array<std::string_view, 5> kTypes{"Int", "String", "Bool", "Real", "Date"};
  static constexpr std::array<std::pair<std::string_view, std::string_view>, 4> kGlobal{
      {{"id", "Int"}, {"name", "String"}, {"created", "Date"}, {"active", "Bool"}}};

  std::mt19937_64 rng_;
  ClassModel model_;
};

}  // namespace detail

inline ClassModel generate_model(const GeneratorSpec& spec) {
  if (spec.scale < 1) throw std::invalid_argument("generator scale must be at least 1");
  detail::ModelBuilder b(spec.seed);
  std::vector<EntityId> roots;
  for (std::uint64_t g = 0; g < spec.scale; ++g) {
    std::string prefix = "U" + std::to_string(g);
    bool flat = spec.family == ModelFamily::FlatShared ||
                (spec.family == ModelFamily::Mixed && b.chance(50));
    if (flat) b.flat_group(prefix);
    else b.star(prefix, roots);
  }
  return b.take();
}

}  // namespace cdrestruct
