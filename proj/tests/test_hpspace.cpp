#include <gtest/gtest.h>

#include <set>

#include "grs/hpspace.hpp"

using namespace grs;

namespace {

SearchSpace space_of(std::vector<ParamSpec> params, Family family = Family::DT) {
  return SearchSpace{family, std::move(params)};
}

}  // namespace

TEST(GridValues, ContinuousDefaultStepIsHalf) {
  const auto v = grid_values(ParamSpec::continuous("x", 0.0, 1.0));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(std::get<double>(v[0]), 0.0);
  EXPECT_EQ(std::get<double>(v[1]), 0.5);
  EXPECT_EQ(std::get<double>(v[2]), 1.0);
}

TEST(GridValues, EstimatorCountStepsByFive) {
  const auto v = grid_values(ParamSpec::integer("n_estimators", 5, 15, 5.0));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(std::get<std::int64_t>(v[0]), 5);
  EXPECT_EQ(std::get<std::int64_t>(v[2]), 15);
  const auto d = grid_values(ParamSpec::integer("n_estimators", 5, 100));
  ASSERT_EQ(d.size(), 20u);
  for (std::size_t i = 0; i < d.size(); ++i)
    EXPECT_EQ(std::get<std::int64_t>(d[i]), static_cast<std::int64_t>(5 * (i + 1)));
}

TEST(GridValues, OtherIntegersStepByOne) {
  EXPECT_EQ(grid_values(ParamSpec::integer("max_depth", 1, 20)).size(), 20u);
}

TEST(GridValues, RangeNotAMultipleOfStepStopsBelowHi) {
  const auto v = grid_values(ParamSpec::continuous("x", 0.0, 1.2));
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(std::get<double>(v.back()), 1.0);
}

TEST(GridValues, AccumulatedRoundingSnapsToHi) {
  const auto v = grid_values(ParamSpec::continuous("x", 0.0, 1.0, 0.1));
  ASSERT_EQ(v.size(), 11u);
  EXPECT_EQ(std::get<double>(v.back()), 1.0);
}

TEST(GridEnumerate, ProductInLexicographicOrder) {
  const auto space = space_of({ParamSpec::integer("a", 1, 3), ParamSpec::categorical("b", {"u", "v"})});
  const auto configs = grid_enumerate(space);
  ASSERT_EQ(configs.size(), 6u);
  EXPECT_EQ(std::get<std::int64_t>(configs.front().at("a")), 1);
  EXPECT_EQ(std::get<std::string>(configs.front().at("b")), "u");
  EXPECT_EQ(std::get<std::int64_t>(configs[1].at("a")), 1);
  EXPECT_EQ(std::get<std::string>(configs[1].at("b")), "v");
  EXPECT_EQ(std::get<std::int64_t>(configs.back().at("a")), 3);
  EXPECT_EQ(std::get<std::string>(configs.back().at("b")), "v");
}

TEST(GridEnumerate, DuplicateFreeAndSizeMatches) {
  const auto space = space_of({ParamSpec::continuous("x", 0.0, 1.0),
                               ParamSpec::integer("k", 1, 4),
                               ParamSpec::categorical("c", {"p", "q"})});
  const auto configs = grid_enumerate(space);
  EXPECT_EQ(configs.size(), grid_size(space));
  EXPECT_EQ(grid_size(space), 24u);
  std::set<Config> unique(configs.begin(), configs.end());
  EXPECT_EQ(unique.size(), configs.size());
}

TEST(GridSize, Examples) {
  EXPECT_EQ(grid_size(space_of({ParamSpec::categorical("a", {"x", "y", "z"})})), 3u);
  EXPECT_EQ(grid_size(space_of({})), 1u);
  EXPECT_EQ(grid_enumerate(space_of({})).size(), 1u);
  EXPECT_TRUE(grid_enumerate(space_of({})).front().empty());
}

TEST(GridSize, SaturatesInsteadOfOverflowing) {
  std::vector<ParamSpec> params;
  for (int i = 0; i < 20; ++i)
    params.push_back(ParamSpec::continuous("p" + std::to_string(i), 0.0, 1000.0, 0.001));
  EXPECT_EQ(grid_size(space_of(params)), std::numeric_limits<std::size_t>::max());
}

TEST(RandomSample, ZeroBudgetIsEmpty) {
  EXPECT_TRUE(random_sample(space_of({ParamSpec::continuous("x", 0, 1)}), 0, 1).empty());
}

TEST(RandomSample, ContinuousDrawsStayInRangeWithCentredMean) {
  const auto draws = random_sample(space_of({ParamSpec::continuous("x", 0, 1)}), 1000, 42);
  ASSERT_EQ(draws.size(), 1000u);
  double sum = 0.0;
  for (const auto& c : draws) {
    const double v = std::get<double>(c.at("x"));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    sum += v;
  }
  EXPECT_NEAR(sum / 1000.0, 0.5, 0.05);
}

TEST(RandomSample, IntegersAndChoicesCoverTheirRange) {
  const auto space = space_of({ParamSpec::integer("k", 1, 4), ParamSpec::categorical("c", {"a", "b"})});
  std::set<std::int64_t> ks;
  std::set<std::string> cs;
  for (const auto& c : random_sample(space, 200, 3)) {
    ks.insert(std::get<std::int64_t>(c.at("k")));
    cs.insert(std::get<std::string>(c.at("c")));
  }
  EXPECT_EQ(ks, (std::set<std::int64_t>{1, 2, 3, 4}));
  EXPECT_EQ(cs.size(), 2u);
}

TEST(RandomSample, DeterministicPerSeed) {
  const auto space = space_of({ParamSpec::continuous("x", 0, 1), ParamSpec::integer("k", 1, 9)});
  EXPECT_EQ(random_sample(space, 50, 8), random_sample(space, 50, 8));
  EXPECT_NE(random_sample(space, 50, 8), random_sample(space, 50, 9));
}

TEST(RandomSample, DefaultBudgetIsGridCapped) {
  EXPECT_EQ(default_rs_budget(space_of({ParamSpec::integer("k", 1, 9)})), 9u);
  EXPECT_EQ(default_rs_budget(space_of({ParamSpec::continuous("x", 0, 1000, 1.0)})),
            kDefaultRsBudgetCap);
}

TEST(Validation, RejectsMalformedParams) {
  EXPECT_THROW(validate_param(ParamSpec::continuous("x", 1.0, 0.0)), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::continuous("x", 0.0, 1.0, 0.0)), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::continuous("x", 0.0, 1.0, -0.5)), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::categorical("c", {})), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::categorical("c", {"a", "a"})), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::integer("k", 1, 4, 0.5)), ValueError);
}

TEST(Validation, ChecksAgainstFamilySchema) {
  EXPECT_NO_THROW(validate_param(ParamSpec::integer("max_depth", 1, 20), Family::DT));
  EXPECT_THROW(validate_param(ParamSpec::integer("max_depth", 0, 20), Family::DT), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::integer("n_neighbors", 1, 5), Family::DT), ValueError);
  EXPECT_THROW(validate_param(ParamSpec::categorical("criterion", {"gini", "log"}), Family::DT),
               ValueError);
  EXPECT_THROW(validate_param(ParamSpec::continuous("max_depth", 1, 5), Family::DT), ValueError);
  EXPECT_THROW(validate_space(space_of({ParamSpec::integer("max_depth", 1, 5),
                                        ParamSpec::integer("max_depth", 2, 6)})),
               ValueError);
}
