// In-memory class model: types, entities with declared properties, and the
// generalization DAG between entities.
//
// Entities are never removed, so an EntityId is simply the position of the
// entity in the model's ordered entity list. That list is the iteration order
// for every "all entities" traversal in the library: input order first,
// synthesized entities appended as they are created.
//
// Mutators check their preconditions before touching any state and throw
// ModelError on violation, leaving the model unchanged. The `unchecked_*`
// members exist for importers that need to materialize a possibly-invalid
// model and then report problems through validate().

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cdrestruct {

struct EntityId {
  std::uint32_t value = 0;

  friend auto operator<=>(EntityId, EntityId) = default;
};

// A set of entities, kept as a strictly ascending vector of ids.
using EntitySet = std::vector<EntityId>;

inline EntitySet make_entity_set(std::vector<EntityId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline bool contains(const EntitySet& set, EntityId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

// The (property name, type name) identity of a declared attribute. Two
// declarations duplicate each other iff their keys compare equal.
struct PropKey {
  std::string prop_name;
  std::string type_name;

  friend auto operator<=>(const PropKey&, const PropKey&) = default;
  friend bool operator==(const PropKey&, const PropKey&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const PropKey& key) {
  return os << key.prop_name << ':' << key.type_name;
}

struct PropKeyHash {
  std::size_t operator()(const PropKey& key) const noexcept {
    std::size_t h = std::hash<std::string>{}(key.prop_name);
    return h ^ (std::hash<std::string>{}(key.type_name) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

struct EntitySetHash {
  std::size_t operator()(const EntitySet& set) const noexcept {
    std::size_t h = set.size();
    for (EntityId id : set) h ^= id.value + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct PropertyDecl {
  std::string prop_name;
  std::string type_name;

  PropKey key() const { return {prop_name, type_name}; }
  friend bool operator==(const PropertyDecl&, const PropertyDecl&) = default;
};

enum class Origin { Original, Synthesized };

inline std::string_view to_string(Origin origin) {
  return origin == Origin::Original ? "original" : "synthesized";
}

struct Entity {
  EntityId id;
  std::string name;
  std::vector<PropertyDecl> properties;
  Origin origin = Origin::Original;

  const PropertyDecl* find_property(std::string_view prop_name) const {
    for (const auto& p : properties)
      if (p.prop_name == prop_name) return &p;
    return nullptr;
  }
  bool declares(const PropKey& key) const {
    const PropertyDecl* p = find_property(key.prop_name);
    return p != nullptr && p->type_name == key.type_name;
  }
};

struct Generalization {
  EntityId specific;
  EntityId general;

  friend auto operator<=>(const Generalization&, const Generalization&) = default;
};

enum class ModelErrc {
  UnknownEntity,
  DuplicateEntity,
  DuplicateType,
  InvalidName,
  DuplicateProperty,
  UnresolvedType,
  PropertyNotFound,
  SelfGeneralization,
  DuplicateGeneralization,
  WouldCreateCycle,
  GeneralizationNotFound,
};

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ModelErrc code() const noexcept { return code_; }

 private:
  ModelErrc code_;
};

// Names are written unquoted by the model file format, so they must be
// non-empty runs of printable, non-space characters.
inline bool is_valid_name(std::string_view name) {
  if (name.empty() || name.front() == '#') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u > 0x20 && u != 0x7f;
  });
}

class ClassModel {
 public:
  // ---- construction -------------------------------------------------------

  void add_type(const std::string& name) {
    if (!is_valid_name(name)) throw ModelError(ModelErrc::InvalidName, "invalid type name '" + name + "'");
    if (type_index_.contains(name)) throw ModelError(ModelErrc::DuplicateType, "duplicate type " + name);
    type_index_.insert(name);
    types_.push_back(name);
  }

  EntityId add_entity(const std::string& name, Origin origin = Origin::Original) {
    if (!is_valid_name(name)) throw ModelError(ModelErrc::InvalidName, "invalid entity name '" + name + "'");
    if (by_name_.contains(name)) throw ModelError(ModelErrc::DuplicateEntity, "duplicate entity " + name);
    EntityId id{static_cast<std::uint32_t>(entities_.size())};
    entities_.push_back(Entity{id, name, {}, origin});
    supers_.emplace_back();
    subs_.emplace_back();
    revisions_.push_back(++clock_);
    by_name_.emplace(name, id);
    return id;
  }

  // Creates a property-less, top-level Synthesized entity named NewClass<k>,
  // k being the smallest positive integer that gives a fresh name.
  EntityId create_entity() {
    // Names are never released, so every k below the hint is still taken.
    std::string name;
    do {
      name = "NewClass" + std::to_string(next_synthesized_suffix_++);
    } while (by_name_.contains(name));
    return add_entity(name, Origin::Synthesized);
  }

  // ---- lookups ------------------------------------------------------------

  const std::vector<std::string>& types() const { return types_; }
  bool has_type(std::string_view name) const { return type_index_.contains(std::string(name)); }

  const std::vector<Entity>& entities() const { return entities_; }
  std::size_t entity_count() const { return entities_.size(); }
  bool exists(EntityId id) const { return id.value < entities_.size(); }

  const Entity& entity(EntityId id) const {
    require(id);
    return entities_[id.value];
  }
  const std::string& name_of(EntityId id) const { return entity(id).name; }

  std::optional<EntityId> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  EntityId id_of(std::string_view name) const {
    auto id = find(name);
    if (!id) throw ModelError(ModelErrc::UnknownEntity, "unknown entity " + std::string(name));
    return *id;
  }

  // Direct superclasses of `id`, in edge insertion order.
  const std::vector<EntityId>& supers(EntityId id) const {
    require(id);
    return supers_[id.value];
  }
  // Direct subclasses of `id`, in edge insertion order.
  const std::vector<EntityId>& subs(EntityId id) const {
    require(id);
    return subs_[id.value];
  }

  bool has_generalization(EntityId sub, EntityId super) const {
    const auto& s = supers(sub);
    return std::find(s.begin(), s.end(), super) != s.end();
  }

  // All edges, grouped by specific entity in entity order.
  std::vector<Generalization> generalizations() const {
    std::vector<Generalization> edges;
    for (std::uint32_t i = 0; i < supers_.size(); ++i)
      for (EntityId g : supers_[i]) edges.push_back({EntityId{i}, g});
    return edges;
  }

  std::size_t generalization_count() const {
    std::size_t n = 0;
    for (const auto& s : supers_) n += s.size();
    return n;
  }

  // True iff `ancestor` is reachable from `id` through one or more
  // generalization edges.
  bool specializes(EntityId id, EntityId ancestor) const {
    require(id);
    require(ancestor);
    std::vector<EntityId> stack(supers_[id.value].begin(), supers_[id.value].end());
    std::unordered_set<std::uint32_t> seen;
    while (!stack.empty()) {
      EntityId cur = stack.back();
      stack.pop_back();
      if (cur == ancestor) return true;
      if (!seen.insert(cur.value).second) continue;
      for (EntityId g : supers_[cur.value]) stack.push_back(g);
    }
    return false;
  }

  // ---- checked mutations ---------------------------------------------------

  void add_property(EntityId id, const PropKey& key) {
    require(id);
    Entity& e = entities_[id.value];
    if (!is_valid_name(key.prop_name))
      throw ModelError(ModelErrc::InvalidName, "invalid property name '" + key.prop_name + "'");
    if (e.find_property(key.prop_name) != nullptr)
      throw ModelError(ModelErrc::DuplicateProperty, e.name + " already declares " + key.prop_name);
    if (!type_index_.contains(key.type_name))
      throw ModelError(ModelErrc::UnresolvedType, "unresolved type " + key.type_name);
    e.properties.push_back({key.prop_name, key.type_name});
    touch(id);
  }

  void delete_property(EntityId id, std::string_view prop_name) {
    require(id);
    auto& props = entities_[id.value].properties;
    auto it = std::find_if(props.begin(), props.end(), [&](const PropertyDecl& p) { return p.prop_name == prop_name; });
    if (it == props.end())
      throw ModelError(ModelErrc::PropertyNotFound,
                       entities_[id.value].name + " does not declare " + std::string(prop_name));
    props.erase(it);
    touch(id);
  }

  void add_generalization(EntityId sub, EntityId super) {
    require(sub);
    require(super);
    if (sub == super) throw ModelError(ModelErrc::SelfGeneralization, "self-generalization " + name_of(sub));
    if (has_generalization(sub, super))
      throw ModelError(ModelErrc::DuplicateGeneralization,
                       "duplicate generalization " + name_of(sub) + " -> " + name_of(super));
    if (specializes(super, sub))
      throw ModelError(ModelErrc::WouldCreateCycle,
                       "generalization " + name_of(sub) + " -> " + name_of(super) + " would create a cycle");
    unchecked_add_generalization(sub, super);
  }

  void delete_generalization(EntityId sub, EntityId super) {
    require(sub);
    require(super);
    auto& up = supers_[sub.value];
    auto it = std::find(up.begin(), up.end(), super);
    if (it == up.end())
      throw ModelError(ModelErrc::GeneralizationNotFound,
                       "no generalization " + name_of(sub) + " -> " + name_of(super));
    up.erase(it);
    auto& down = subs_[super.value];
    down.erase(std::find(down.begin(), down.end(), sub));
    touch(sub);
    touch(super);
  }

  // ---- unchecked construction (importers only; run validate() after) -------

  void unchecked_add_property(EntityId id, const PropKey& key) {
    require(id);
    entities_[id.value].properties.push_back({key.prop_name, key.type_name});
    touch(id);
  }

  void unchecked_add_generalization(EntityId sub, EntityId super) {
    require(sub);
    require(super);
    supers_[sub.value].push_back(super);
    subs_[super.value].push_back(sub);
    touch(sub);
    touch(super);
  }

  // ---- change tracking -----------------------------------------------------

  // Logical time of the last change to the entity's properties or to an edge
  // incident to it. Strictly increasing across all entities of a model.
  std::uint64_t revision(EntityId id) const {
    require(id);
    return revisions_[id.value];
  }
  // Time of the latest change anywhere in the model.
  std::uint64_t clock() const { return clock_; }

  // Structural equality: same types and entities in the same order, same
  // edge set (edge insertion order is irrelevant).
  friend bool operator==(const ClassModel& a, const ClassModel& b) {
    if (a.types_ != b.types_ || a.entities_.size() != b.entities_.size()) return false;
    for (std::size_t i = 0; i < a.entities_.size(); ++i) {
      const Entity& x = a.entities_[i];
      const Entity& y = b.entities_[i];
      if (x.name != y.name || x.origin != y.origin || x.properties != y.properties) return false;
      auto sx = make_entity_set(a.supers_[i]);
      auto sy = make_entity_set(b.supers_[i]);
      if (sx != sy) return false;
    }
    return true;
  }

 private:
  void touch(EntityId id) { revisions_[id.value] = ++clock_; }

  void require(EntityId id) const {
    if (!exists(id)) throw ModelError(ModelErrc::UnknownEntity, "unknown entity id " + std::to_string(id.value));
  }

  std::vector<std::string> types_;
  std::unordered_set<std::string> type_index_;
  std::vector<Entity> entities_;
  std::unordered_map<std::string, EntityId> by_name_;
  std::vector<std::vector<EntityId>> supers_;
  std::vector<std::vector<EntityId>> subs_;
  std::vector<std::uint64_t> revisions_;
  std::uint64_t clock_ = 0;
  std::uint64_t next_synthesized_suffix_ = 1;
};

// ---- hierarchy queries -------------------------------------------------------

inline EntitySet direct_subclasses(const ClassModel& model, EntityId id) {
  return make_entity_set(model.subs(id));
}

inline bool is_top_level(const ClassModel& model, EntityId id) { return model.supers(id).empty(); }

inline std::vector<EntityId> top_level_entities(const ClassModel& model) {
  std::vector<EntityId> out;
  for (const Entity& e : model.entities())
    if (model.supers(e.id).empty()) out.push_back(e.id);
  return out;
}

// Own plus all inherited property keys of `id`.
inline std::set<PropKey> flattened_props(const ClassModel& model, EntityId id) {
  std::set<PropKey> out;
  std::vector<bool> seen(model.entity_count(), false);
  std::vector<EntityId> stack{id};
  (void)model.entity(id);  // throws on unknown id
  while (!stack.empty()) {
    EntityId cur = stack.back();
    stack.pop_back();
    if (seen[cur.value]) continue;
    seen[cur.value] = true;
    for (const auto& p : model.entity(cur).properties) out.insert(p.key());
    for (EntityId g : model.supers(cur)) stack.push_back(g);
  }
  return out;
}

// Every invariant violation of the model, one human-readable line each.
inline std::vector<std::string> validate(const ClassModel& model) {
  std::vector<std::string> out;
  const auto& entities = model.entities();

  std::set<std::string> seen_types;
  for (const auto& t : model.types()) {
    if (!is_valid_name(t)) out.push_back("invalid type name '" + t + "'");
    if (!seen_types.insert(t).second) out.push_back("duplicate type " + t);
  }

  std::set<std::string> seen_names;
  for (const Entity& e : entities) {
    if (!is_valid_name(e.name)) out.push_back("invalid entity name '" + e.name + "'");
    if (!seen_names.insert(e.name).second) out.push_back("duplicate entity " + e.name);
    std::set<std::string> props;
    for (const auto& p : e.properties) {
      if (!is_valid_name(p.prop_name)) out.push_back("invalid property name '" + p.prop_name + "' in " + e.name);
      if (!props.insert(p.prop_name).second) out.push_back("duplicate property " + e.name + "." + p.prop_name);
      if (!model.has_type(p.type_name))
        out.push_back("unresolved type " + p.type_name + " of " + e.name + "." + p.prop_name);
    }
  }

  for (const Entity& e : entities) {
    std::set<EntityId> parents;
    for (EntityId g : model.supers(e.id)) {
      if (!model.exists(g)) {
        out.push_back("generalization " + e.name + " -> unknown entity");
        continue;
      }
      if (g == e.id) out.push_back("self-generalization " + e.name);
      else if (!parents.insert(g).second) out.push_back("duplicate generalization " + e.name + " -> " + model.name_of(g));
    }
  }

  // Non-trivial strongly connected components are generalization cycles.
  const std::size_t n = entities.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<EntityId> stack;
  int counter = 0;
  struct Frame {
    EntityId node;
    std::size_t next;
  };
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{EntityId{root}, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(EntityId{root});
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& up = model.supers(f.node);
      if (f.next < up.size()) {
        EntityId w = up[f.next++];
        if (!model.exists(w) || w == f.node) continue;
        if (index[w.value] < 0) {
          index[w.value] = low[w.value] = counter++;
          stack.push_back(w);
          on_stack[w.value] = true;
          call.push_back({w, 0});
        } else if (on_stack[w.value]) {
          low[f.node.value] = std::min(low[f.node.value], index[w.value]);
        }
        continue;
      }
      EntityId v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node.value] = std::min(low[call.back().node.value], low[v.value]);
      if (low[v.value] != index[v.value]) continue;
      std::vector<std::string> members;
      EntityId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w.value] = false;
        members.push_back(model.name_of(w));
      } while (w != v);
      if (members.size() > 1) {
        std::sort(members.begin(), members.end());
        std::string msg = "generalization cycle through";
        for (std::size_t i = 0; i < members.size(); ++i) msg += (i ? ", " : " ") + members[i];
        out.push_back(msg);
      }
    }
  }
  return out;
}

}  // namespace cdrestruct
