#include <gtest/gtest.h>

#include <sstream>

#include "cdrestruct/engine.hpp"
#include "cdrestruct/metrics.hpp"
#include "cdrestruct/model_io.hpp"
#include "support/oracles.hpp"
#include "support/random_models.hpp"

namespace cdrestruct {
namespace {

ClassModel fixture(const char* name) { return load_model_file(std::string(CDRESTRUCT_MODELS_DIR) + "/" + name); }

TEST(MetricsTest, LeftExampleCounts) {
  auto s = snapshot(fixture("left.model"));
  EXPECT_EQ(s.entity_count, 4u);
  EXPECT_EQ(s.declaration_count, 8u);
  EXPECT_EQ(s.duplication_count, 4u);
  EXPECT_EQ(s.top_level_count, 4u);
  EXPECT_EQ(s.max_inheritance_depth, 0u);
}

TEST(MetricsTest, RightExampleCounts) {
  ClassModel m = fixture("right.model");
  EXPECT_EQ(declaration_count(m), 7u);
  EXPECT_EQ(duplication_count(m), 3u);
}

TEST(MetricsTest, EmptyModel) {
  EXPECT_EQ(snapshot(ClassModel{}), MetricsSnapshot{});
}

TEST(MetricsTest, DepthFollowsLongestChain) {
  ClassModel m = load_model(
      "classmodel 1\nentity A\nentity B\n super A\nentity C\n super B\nentity D\n super A\n super C\n");
  EXPECT_EQ(max_inheritance_depth(m), 3u);
  EXPECT_EQ(snapshot(m).top_level_count, 1u);
}

TEST(MetricsTest, SnapshotPrintsAllFields) {
  std::ostringstream os;
  os << snapshot(fixture("left.model"));
  EXPECT_EQ(os.str(), "entities=4 declarations=8 duplication=4 top_level=4 max_depth=0");
}

TEST(MetricsTest, Effectiveness) {
  MetricsSnapshot before, after;
  before.duplication_count = 4;
  after.duplication_count = 0;
  EXPECT_DOUBLE_EQ(*effectiveness(before, after), 1.0);
  after.duplication_count = 2;
  EXPECT_DOUBLE_EQ(*effectiveness(before, after), 0.5);
  before.duplication_count = 0;
  after.duplication_count = 0;
  EXPECT_FALSE(effectiveness(before, after).has_value());
}

TEST(MetricsTest, DuplicationMatchesOracle) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    ClassModel m = testing::corpus_model(i);
    EXPECT_EQ(duplication_count(m), oracle::duplication(m)) << i;
  }
}

TEST(HierarchyRestrictionTest, ReflexiveAndPreservedByRestructuring) {
  ClassModel before = fixture("left.model");
  EXPECT_TRUE(hierarchy_restriction_equal(before, before));
  ClassModel after = before;
  EngineOptions options;
  options.multi_inheritance = true;
  restructure(after, options);
  EXPECT_TRUE(hierarchy_restriction_equal(before, after));
}

TEST(HierarchyRestrictionTest, DetectsNewPathBetweenOriginals) {
  ClassModel before = fixture("left.model");
  ClassModel after = before;
  EntityId x = after.add_entity("X", Origin::Synthesized);
  after.add_generalization(after.id_of("A"), x);
  EXPECT_TRUE(hierarchy_restriction_equal(before, after));
  after.add_generalization(x, after.id_of("B"));
  EXPECT_FALSE(hierarchy_restriction_equal(before, after));
}

TEST(HierarchyRestrictionTest, DetectsLostPath) {
  ClassModel before = load_model("classmodel 1\nentity A\nentity B\n super A\n");
  ClassModel after = before;
  after.delete_generalization(after.id_of("B"), after.id_of("A"));
  EXPECT_FALSE(hierarchy_restriction_equal(before, after));
}

TEST(HierarchyRestrictionTest, RejectsUnrelatedModels) {
  EXPECT_THROW(hierarchy_restriction_equal(fixture("left.model"), fixture("right.model")), std::invalid_argument);
}

}  // namespace
}  // namespace cdrestruct
