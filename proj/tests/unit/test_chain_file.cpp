#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "cli/chain_file.hpp"
#include "fixtures.hpp"

namespace chainglue::cli {
namespace {

TEST(ChainFile, DenseExample) {
  const auto m = read_chain_file(test::data_dir() + "/example1_b.json");
  EXPECT_EQ(m.labels, (std::vector<std::string>{"1", "2", "3", "4"}));
  EXPECT_EQ(m.rates.dense(), test::example1_b().rates.dense());
}

TEST(ChainFile, SparseObjectsAndArrays) {
  const auto objects = parse_chain(std::string(R"({"version": 1, "states": ["a", "b"],
      "rates": [{"from": "a", "to": "b", "rate": 2}, {"from": "b", "to": "a", "rate": 3}]})"));
  const auto arrays = parse_chain(std::string(
      R"({"version": 1, "states": ["a", "b"], "rates": [["a", "b", 2], ["b", "a", 3]]})"));
  Matrix expected(2, 2);
  expected << -2, 2, 3, -3;
  EXPECT_EQ(objects.rates.dense(), expected);
  EXPECT_EQ(arrays.rates.dense(), expected);
}

TEST(ChainFile, IntegerLabels) {
  const auto m = parse_chain(std::string(
      R"({"version": 1, "states": [-1, 0, 1], "rates": [[-1, 1, 1], [1, -1, 2]]})"));
  EXPECT_EQ(m.labels, (std::vector<std::string>{"-1", "0", "1"}));
  EXPECT_EQ(m.rates(0, 2), 1.0);
  EXPECT_EQ(m.rates(2, 0), 2.0);
  EXPECT_EQ(m.rates(0, 0), -1.0);
}

TEST(ChainFile, MatrixShapedListIsDense) {
  const auto m = parse_chain(std::string(
      R"({"version": 1, "states": [-1, 0, 1], "rates": [[-1, 0, 1], [0, 0, 0], [1, 0, -1]]})"));
  EXPECT_EQ(m.rates(0, 2), 1.0);
  EXPECT_EQ(m.rates(1, 1), 0.0);
}

TEST(ChainFile, DenseIsTakenVerbatim) {
  const auto m = parse_chain(std::string(
      R"({"version": 1, "states": ["a", "b"], "rates": [[-5, 2], [3, -3]]})"));
  EXPECT_EQ(m.rates(0, 0), -5.0);
  EXPECT_FALSE(validate(m).empty());
}

TEST(ChainFile, Malformed) {
  const char* bad[] = {
      "not json",
      "[]",
      R"({"states": ["a", "b"], "rates": []})",
      R"({"version": 2, "states": ["a", "b"], "rates": []})",
      R"({"version": 1, "rates": []})",
      R"({"version": 1, "states": ["a", "a"], "rates": []})",
      R"({"version": 1, "states": ["a", 1.5], "rates": []})",
      R"({"version": 1, "states": ["a", "b"], "rates": [[0, 1], [1]]})",
      R"({"version": 1, "states": ["a", "b"], "rates": [[0, "x"], [1, 0]]})",
      R"({"version": 1, "states": ["a", "b"], "rates": [["a", "c", 1]]})",
      R"({"version": 1, "states": ["a", "b"], "rates": [["a", "a", 1]]})",
      R"({"version": 1, "states": ["a", "b"], "rates": [["a", "b", 1], ["a", "b", 2]]})",
      R"({"version": 1, "states": ["a", "b"], "rates": [{"from": "a", "to": "b"}]})",
      R"({"version": 1, "states": ["a", "b"], "rates": [7]})",
  };
  for (const char* text : bad) EXPECT_THROW(parse_chain(std::string(text)), ParseError) << text;
  EXPECT_THROW(read_chain_file("/nonexistent/chain.json"), ParseError);
}

TEST(ChainFile, RoundTripIsCanonical) {
  std::mt19937_64 gen(5);
  const auto dir = std::filesystem::temp_directory_path();
  for (int trial = 0; trial < 50; ++trial) {
    ChainModel m = test::random_chain(gen, test::uniform_index(gen, 2, 9));
    for (std::size_t i = 0; i < m.labels.size(); ++i) m.labels[i] = "s" + std::to_string(i * 7 - 3);
    const auto once = parse_chain(chain_to_json(m));
    EXPECT_EQ(once.labels, m.labels);
    EXPECT_EQ(once.rates.dense(), m.rates.dense());
    EXPECT_EQ(chain_to_json(once), chain_to_json(m));

    const auto path = dir / ("chainglue_roundtrip_" + std::to_string(trial) + ".json");
    write_chain_file(path, m);
    EXPECT_EQ(read_chain_file(path).rates.dense(), m.rates.dense());
    std::filesystem::remove(path);
  }
}

TEST(ChainFile, EmitsOnlyOffDiagonalNonzeros) {
  const auto doc = chain_to_json(test::example2_b());
  ASSERT_EQ(doc["rates"].size(), 2u);
  EXPECT_EQ(doc["rates"][0]["from"], "1");
  EXPECT_EQ(doc["rates"][0]["to"], "2");
  EXPECT_EQ(doc["rates"][0]["rate"], 2.0);
}

}  // namespace
}  // namespace chainglue::cli
