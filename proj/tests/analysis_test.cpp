#include <gtest/gtest.h>

#include <map>

#include "cdrestruct/analysis.hpp"
#include "cdrestruct/model_io.hpp"
#include "support/random_models.hpp"

namespace cdrestruct {
namespace {

std::vector<EntityId> all_ids(const ClassModel& m) {
  std::vector<EntityId> ids;
  for (const auto& e : m.entities()) ids.push_back(e.id);
  return ids;
}

EntitySet ids(const ClassModel& m, std::initializer_list<const char*> names) {
  std::vector<EntityId> out;
  for (const char* n : names) out.push_back(m.id_of(n));
  return make_entity_set(out);
}

ClassModel fixture(const char* name) { return load_model_file(std::string(CDRESTRUCT_MODELS_DIR) + "/" + name); }

// Candidate rendered with owner names, independent of ids.
using NamedCandidate = std::pair<std::vector<PropKey>, std::set<std::string>>;

std::vector<NamedCandidate> named(const ClassModel& m, const CandidateRanking& r) {
  std::vector<NamedCandidate> out;
  for (const auto& c : r) {
    std::set<std::string> owners;
    for (EntityId o : c.owners) owners.insert(m.name_of(o));
    out.push_back({c.keys, owners});
  }
  return out;
}

TEST(AnalysisTest, PropTypeSetIsOwnPropertiesOnly) {
  ClassModel m;
  m.add_type("T");
  m.add_type("U");
  EntityId e = m.add_entity("E"), s = m.add_entity("S"), empty = m.add_entity("Empty");
  m.add_property(e, {"a", "T"});
  m.add_property(e, {"b", "U"});
  m.add_property(s, {"z", "T"});
  m.add_generalization(e, s);
  EXPECT_EQ(prop_type_set(m, e), (std::set<PropKey>{{"a", "T"}, {"b", "U"}}));
  EXPECT_TRUE(prop_type_set(m, empty).empty());
  EXPECT_THROW(prop_type_set(m, EntityId{9}), ModelError);
}

TEST(AnalysisTest, FilterByPropertiesRequiresIdenticalTypes) {
  ClassModel m;
  m.add_type("T");
  m.add_type("U");
  EntityId a = m.add_entity("A"), b = m.add_entity("B"), c = m.add_entity("C");
  m.add_property(a, {"a", "T"});
  m.add_property(b, {"a", "U"});
  m.add_property(c, {"a", "T"});
  m.add_property(c, {"b", "T"});
  std::vector<EntityId> abc{a, b, c};
  std::vector<PropKey> k1{{"a", "T"}};
  EXPECT_EQ(filter_by_properties(m, k1, abc), (EntitySet{a, c}));
  EXPECT_EQ(filter_by_properties(m, {}, abc), (EntitySet{a, b, c}));
  std::vector<PropKey> k2{{"a", "T"}, {"b", "T"}};
  std::vector<EntityId> ac{a, c};
  EXPECT_EQ(filter_by_properties(m, k2, ac), (EntitySet{c}));
}

TEST(AnalysisTest, EntitySetFrequencyCountsExactSets) {
  ClassModel m = fixture("right.model");
  EntitySet pq = ids(m, {"P", "Q"}), pr = ids(m, {"P", "R"});
  std::vector<KeyOwners> pairs{{{"a", "T"}, pq}, {{"b", "T"}, pq}, {{"d", "T"}, pr}};

  // Exhaustive tally: compare every pair against every other.
  std::map<EntitySet, std::size_t> tally;
  for (const auto& p : pairs) {
    std::size_t n = 0;
    for (const auto& q : pairs) n += (q.owners == p.owners);
    tally[p.owners] = n;
  }
  EXPECT_EQ(entity_set_frequency(pairs), tally);
  EXPECT_EQ(tally, (std::map<EntitySet, std::size_t>{{pq, 2}, {pr, 1}}));

  std::vector<KeyOwners> single{{{"a", "T"}, pq}};
  EXPECT_EQ(entity_set_frequency(single), (std::map<EntitySet, std::size_t>{{pq, 1}}));
}

TEST(AnalysisTest, EntitySetFrequencyUsesSetEquality) {
  EntityId e1{1}, e2{2};
  std::vector<KeyOwners> pairs{{{"a", "T"}, {e1, e2}}, {{"b", "T"}, {e2, e1}}};
  auto freq = entity_set_frequency(pairs);
  ASSERT_EQ(freq.size(), 1u);
  EXPECT_EQ(freq.begin()->second, 2u);
}

TEST(AnalysisTest, AbstractRankingExample) {
  ClassModel m;
  m.add_type("t1");
  m.add_type("t2");
  for (const char* n : {"e1", "e2", "e3", "e4", "e5"}) m.add_entity(n);
  PropKey pn1{"pn1", "t1"}, pn2{"pn2", "t2"}, pn3{"pn3", "t2"}, pn4{"pn4", "t2"};
  auto declare = [&](const PropKey& k, std::initializer_list<const char*> owners) {
    for (const char* o : owners) m.add_property(m.id_of(o), k);
  };
  declare(pn1, {"e1", "e2", "e3"});
  declare(pn2, {"e2", "e3", "e4", "e5"});
  declare(pn3, {"e1", "e2", "e3"});
  declare(pn4, {"e2", "e3", "e4"});

  CandidateRanking r = common_props(m, all_ids(m));
  CandidateRanking expected{
      {{pn2}, ids(m, {"e2", "e3", "e4", "e5"})},
      {{pn1, pn3}, ids(m, {"e1", "e2", "e3"})},
      {{pn4}, ids(m, {"e2", "e3", "e4"})},
  };
  EXPECT_EQ(r, expected);
}

TEST(AnalysisTest, LeftExampleRanksLargestOwnerSetFirst) {
  ClassModel m = fixture("left.model");
  CandidateRanking r = common_props(m, all_ids(m));
  ASSERT_FALSE(r.empty());
  EXPECT_EQ(r.front(), (Candidate{{{"c", "T"}}, ids(m, {"B", "C", "D"})}));
}

TEST(AnalysisTest, RightExampleBreaksSizeTieByFrequency) {
  ClassModel m = fixture("right.model");
  CandidateRanking r = common_props(m, all_ids(m));
  ASSERT_GE(r.size(), 2u);
  EXPECT_EQ(r[0], (Candidate{{{"a", "T"}, {"b", "T"}}, ids(m, {"P", "Q"})}));
  EXPECT_EQ(r[1], (Candidate{{{"d", "T"}}, ids(m, {"P", "R"})}));
}

TEST(AnalysisTest, DisjointPropertiesGiveSingletonOwners) {
  ClassModel m;
  m.add_type("T");
  for (int i = 0; i < 4; ++i) m.add_property(m.add_entity("X" + std::to_string(i)), {"p" + std::to_string(i), "T"});
  for (const auto& c : common_props(m, all_ids(m))) EXPECT_EQ(c.owners.size(), 1u);
  EXPECT_TRUE(common_props(m, {}).empty());
  EXPECT_FALSE(first_candidate(m, {}).has_value());
}

TEST(AnalysisTest, RankingInvariantsOnRandomModels) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    ClassModel m = testing::corpus_model(seed);
    ClassModel copy = m;
    auto classes = all_ids(m);
    CandidateRanking r = common_props(m, classes);

    std::vector<KeyOwners> pes;
    std::set<PropKey> all_keys;
    for (const auto& e : m.entities())
      for (const auto& p : e.properties) all_keys.insert(p.key());
    for (const auto& k : all_keys) pes.push_back({k, filter_by_properties(m, std::vector<PropKey>{k}, classes)});
    auto freq = entity_set_frequency(pes);

    std::set<EntitySet> seen_owner_sets;
    std::set<std::pair<PropKey, EntitySet>> reproduced;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const Candidate& c = r[i];
      ASSERT_FALSE(c.keys.empty());
      EXPECT_TRUE(std::is_sorted(c.keys.begin(), c.keys.end()));
      EXPECT_EQ(filter_by_properties(m, c.keys, c.owners), c.owners);
      EXPECT_TRUE(seen_owner_sets.insert(c.owners).second) << "owner set repeated";
      if (i > 0) {
        const Candidate& p = r[i - 1];
        EXPECT_GE(p.owners.size(), c.owners.size());
        if (p.owners.size() == c.owners.size()) { EXPECT_GE(freq.at(p.owners), freq.at(c.owners)); }
      }
      for (const auto& k : c.keys) reproduced.insert({k, c.owners});
    }
    std::set<std::pair<PropKey, EntitySet>> expected;
    for (const auto& p : pes) expected.insert({p.key, p.owners});
    EXPECT_EQ(reproduced, expected) << "seed " << seed;

    EXPECT_EQ(common_props(m, classes), r);
    EXPECT_EQ(m, copy);
  }
}

TEST(AnalysisTest, FirstCandidateAgreesWithFullRanking) {
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    ClassModel m = testing::corpus_model(seed);
    std::vector<EntityId> subset;
    std::mt19937_64 rng(seed);
    for (const auto& e : m.entities())
      if (rng() % 3 != 0) subset.push_back(e.id);
    for (const auto& classes : {all_ids(m), subset}) {
      auto r = common_props(m, classes);
      auto first = first_candidate(m, classes);
      ASSERT_EQ(first.has_value(), !r.empty());
      if (first) { EXPECT_EQ(*first, r.front()) << "seed " << seed; }
    }
  }
}

// Same entities in a different list order rank identically.
TEST(AnalysisTest, RankingIndependentOfEntityOrder) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ClassModel m = testing::random_model(seed, {.min_entities = 3, .max_entities = 10, .edge_percent = 0});
    std::vector<std::size_t> order(m.entity_count());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    ClassModel shuffled;
    for (const auto& t : m.types()) shuffled.add_type(t);
    for (std::size_t i : order) {
      const Entity& e = m.entities()[i];
      EntityId id = shuffled.add_entity(e.name);
      for (const auto& p : e.properties) shuffled.add_property(id, p.key());
    }
    EXPECT_EQ(named(m, common_props(m, all_ids(m))), named(shuffled, common_props(shuffled, all_ids(shuffled))));
  }
}

}  // namespace
}  // namespace cdrestruct
