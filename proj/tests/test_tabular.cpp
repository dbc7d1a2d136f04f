#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "grs/tabular.hpp"

using namespace grs;

namespace {

Table majors_table() {
  return parse_csv("gpa,major,grad\n3.1,CS,1\n2.5,CS,0\n3.9,EE,1\n2.0,ME,0\n", "grad");
}

}  // namespace

TEST(Csv, ParsesNumericCategoricalAndTarget) {
  const auto t = parse_csv("gpa,major,grad\n3.5,CS,1\n,EE,0\n", "grad");
  ASSERT_EQ(t.n_rows(), 2u);
  ASSERT_EQ(t.n_cols(), 3u);
  EXPECT_EQ(t.schema(0).kind, ColumnKind::numeric);
  EXPECT_DOUBLE_EQ(t.numeric(0, 0), 3.5);
  EXPECT_TRUE(t.is_missing(0, 1));
  EXPECT_DOUBLE_EQ(t.missing_fraction(0), 0.5);
  EXPECT_EQ(t.schema(1).kind, ColumnKind::categorical);
  EXPECT_EQ(t.schema(1).categories, (std::vector<std::string>{"CS", "EE"}));
  EXPECT_EQ(t.schema(2).kind, ColumnKind::target);
  EXPECT_EQ(t.schema(2).categories, (std::vector<std::string>{"0", "1"}));
  EXPECT_EQ(t.label(0), 1);
  EXPECT_EQ(t.label(1), 0);
}

TEST(Csv, RaggedRowNamesTheRow) {
  try {
    parse_csv("a,b,c\n1,2,0\n1,2\n", "c");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Csv, NonBinaryTargetIsSchemaError) {
  EXPECT_THROW(parse_csv("x,y\n1,0\n2,1\n3,2\n", "y"), SchemaError);
}

TEST(Csv, UnknownTargetColumnIsSchemaError) {
  EXPECT_THROW(parse_csv("x,y\n1,0\n2,1\n", "z"), SchemaError);
}

TEST(Csv, NaAndQuotedFields) {
  const auto t = parse_csv("name,score,y\n\"Smith, J\",NA,1\n\"say \"\"hi\"\"\",4,0\n", "y");
  EXPECT_EQ(t.schema(0).categories, (std::vector<std::string>{"Smith, J", "say \"hi\""}));
  EXPECT_TRUE(t.is_missing(1, 0));
  EXPECT_DOUBLE_EQ(t.numeric(1, 1), 4.0);
}

TEST(Csv, RowsWithMissingTargetAreDropped) {
  const auto t = parse_csv("x,y\n1,0\n2,\n3,1\n", "y");
  EXPECT_EQ(t.n_rows(), 2u);
}

TEST(Csv, RoundTripPreservesTable) {
  const auto t = generate_synthetic(300, 11);
  const auto back = parse_csv(to_csv(t), "graduated");
  EXPECT_EQ(t, back);
}

TEST(Csv, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "grs_tabular_roundtrip.csv";
  const auto t = generate_synthetic(50, 3);
  write_csv(t, path.string());
  EXPECT_EQ(load_csv(path.string(), "graduated"), t);
  std::filesystem::remove(path);
}

TEST(Csv, MissingFileIsParseError) {
  EXPECT_THROW(load_csv("/nonexistent/nowhere.csv", "y"), ParseError);
}

TEST(Filter, KeepsAllowedLevelsInOrder) {
  const auto t = parse_csv("major,y\nCS,1\nCS,0\nEE,1\nME,0\n", "y");
  const auto f = filter_rows(t, "major", {"CS"});
  ASSERT_EQ(f.n_rows(), 2u);
  for (std::size_t r = 0; r < 2; ++r) EXPECT_EQ(f.schema(0).categories[f.code(0, r)], "CS");
  EXPECT_EQ(f.label(0), 1);
  EXPECT_EQ(f.label(1), 0);
}

TEST(Filter, EmptyAllowedSetGivesEmptyTableWithSchema) {
  const auto t = majors_table();
  const auto f = filter_rows(t, "major", {});
  EXPECT_EQ(f.n_rows(), 0u);
  EXPECT_EQ(f.schema(), t.schema());
}

TEST(Filter, AllLevelsIsIdentity) {
  const auto t = majors_table();
  EXPECT_EQ(filter_rows(t, "major", {"CS", "EE", "ME"}), t);
}

TEST(Filter, NumericColumnRejected) {
  EXPECT_THROW(filter_rows(majors_table(), "gpa", {"3.1"}), SchemaError);
}

TEST(Split, SizesFollowFraction) {
  const auto t = generate_synthetic(100, 1);
  const auto s = split_train_test(t, 0.75, 9);
  EXPECT_EQ(s.train.n_rows(), 75u);
  EXPECT_EQ(s.test.n_rows(), 25u);
}

TEST(Split, PartitionsRows) {
  const auto t = generate_synthetic(101, 1);
  const auto s = split_train_test(t, 0.3, 5);
  std::vector<int> seen(t.n_rows(), 0);
  for (auto r : s.train_rows) ++seen[r];
  for (auto r : s.test_rows) ++seen[r];
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(Split, DeterministicForSeed) {
  const auto t = generate_synthetic(200, 4);
  const auto a = split_train_test(t, 0.75, 17);
  const auto b = split_train_test(t, 0.75, 17);
  EXPECT_EQ(a.train_rows, b.train_rows);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train_rows, split_train_test(t, 0.75, 18).train_rows);
}

TEST(Split, FractionBoundsRejected) {
  const auto t = generate_synthetic(20, 4);
  EXPECT_THROW(split_train_test(t, 1.0, 1), ValueError);
  EXPECT_THROW(split_train_test(t, 0.0, 1), ValueError);
}

TEST(Synthetic, EmptyTableHasSevenColumns) {
  const auto t = generate_synthetic(0, 1);
  EXPECT_EQ(t.n_rows(), 0u);
  EXPECT_EQ(t.n_cols(), 7u);
  EXPECT_EQ(t.schema(t.target_index()).name, "graduated");
}

TEST(Synthetic, PositiveRateMatchesCount) {
  const auto t = generate_synthetic(10000, 21, 0.6);
  std::size_t ones = 0;
  for (std::size_t r = 0; r < t.n_rows(); ++r) ones += static_cast<std::size_t>(t.label(r));
  const double rate = static_cast<double>(ones) / static_cast<double>(t.n_rows());
  EXPECT_NEAR(rate, 0.6, 0.03);
}

TEST(Synthetic, DeterministicAndSeedSensitive) {
  EXPECT_EQ(generate_synthetic(500, 8), generate_synthetic(500, 8));
  EXPECT_FALSE(generate_synthetic(500, 8) == generate_synthetic(500, 9));
}

TEST(Synthetic, HasSomeMissingFeatureCells) {
  const auto t = generate_synthetic(5000, 2);
  for (std::size_t c = 0; c < t.n_cols(); ++c) {
    if (c == t.target_index()) continue;
    EXPECT_GT(t.missing_fraction(c), 0.005);
    EXPECT_LT(t.missing_fraction(c), 0.04);
  }
}
