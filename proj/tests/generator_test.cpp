#include <gtest/gtest.h>

#include "cdrestruct/engine.hpp"
#include "cdrestruct/generator.hpp"
#include "cdrestruct/model_io.hpp"

namespace cdrestruct {
namespace {

TEST(GeneratorTest, SameSpecSameModel) {
  for (auto family : {ModelFamily::FlatShared, ModelFamily::StarHierarchies, ModelFamily::Mixed}) {
    GeneratorSpec spec{family, 20, 42};
    EXPECT_EQ(save_model(generate_model(spec)), save_model(generate_model(spec)));
    GeneratorSpec other{family, 20, 43};
    EXPECT_NE(save_model(generate_model(spec)), save_model(generate_model(other)));
  }
}

TEST(GeneratorTest, ModelsAreValidAndGrowWithScale) {
  std::size_t previous = 0;
  for (std::uint64_t scale : {1, 10, 100, 1000}) {
    ClassModel m = generate_model({ModelFamily::Mixed, scale, 3});
    EXPECT_TRUE(validate(m).empty());
    std::size_t n = element_count(m);
    EXPECT_GT(n, previous);
    previous = n;
  }
}

TEST(GeneratorTest, FamiliesHaveTheirShape) {
  ClassModel flat = generate_model({ModelFamily::FlatShared, 30, 1});
  EXPECT_EQ(flat.generalization_count(), 0u);
  ClassModel star = generate_model({ModelFamily::StarHierarchies, 30, 1});
  EXPECT_GT(star.generalization_count(), 0u);
}

TEST(GeneratorTest, FlatScaleOneReachesZeroDuplication) {
  ClassModel m = generate_model({ModelFamily::FlatShared, 1, 7});
  EngineOptions options;
  options.multi_inheritance = true;
  auto report = restructure(m, options);
  EXPECT_GT(report.metrics_before.duplication_count, 0u);
  EXPECT_EQ(report.metrics_after.duplication_count, 0u);
}

TEST(GeneratorTest, FamilyNames) {
  EXPECT_EQ(parse_family("flat"), ModelFamily::FlatShared);
  EXPECT_EQ(parse_family("StarHierarchies"), ModelFamily::StarHierarchies);
  EXPECT_EQ(parse_family(to_string(ModelFamily::Mixed)), ModelFamily::Mixed);
  EXPECT_FALSE(parse_family("tree"));
  EXPECT_THROW(generate_model({ModelFamily::Mixed, 0, 1}), std::invalid_argument);
}

}  // namespace
}  // namespace cdrestruct
