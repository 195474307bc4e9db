#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "egonet/feature_table.hpp"
#include "egonet/features.hpp"
#include "support/oracle.hpp"

namespace egonet {
namespace {

using Slots = std::array<double, kFeatureCount>;

LocalIndices at(std::vector<EdgeRecord> edges, NodeId focal) {
  return compute_indices(extract_egonet(load_graph(edges), focal));
}

TEST(EncodeFeatures, SingleSaleSeller) {
  const auto fv = encode_features(at({{0, 1, 1}}, 0));
  EXPECT_EQ(fv.slots, (Slots{1, 1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1}));
}

TEST(EncodeFeatures, MinimalSeller) {
  std::vector<EdgeRecord> edges = {{0, 1, 1}};
  for (NodeId v = 2; v <= 10; ++v) edges.push_back({v, 0, 1});
  const auto x = encode_features(at(edges, 0)).slots;
  EXPECT_EQ(x[3], 0.0);
  EXPECT_EQ(x[4], 1.0);
  EXPECT_EQ(x[5], 0.1);
  EXPECT_EQ(x[6], 0.0);
  EXPECT_EQ(x[7], 1.0);
  EXPECT_EQ(x[8], 0.1);
}

TEST(EncodeFeatures, ExclusiveSellerWithoutTriangles) {
  const auto x = encode_features(at({{0, 1, 2}, {0, 2, 2}, {0, 3, 2}, {0, 4, 1}, {0, 5, 1}}, 0)).slots;
  EXPECT_EQ(x, (Slots{0, 0, 1.6, 1, 0, 1, 1, 0, 1, 0, -1, -1}));
}

TEST(EncodeFeatures, SellProbabilityOneOverKIsExact) {
  // k = 3 with one reciprocal neighbor: k_out = 1, k_in = 3, SP = 1/4, not 1/3.
  const auto x = encode_features(at({{1, 0, 1}, {0, 1, 1}, {2, 0, 1}, {3, 0, 1}}, 0)).slots;
  EXPECT_EQ(x[4], 0.0);
  EXPECT_EQ(x[5], 0.25);
  // k = 3, k_out = 1, k_in = 2: SP = 1/3.
  const auto y = encode_features(at({{0, 1, 1}, {2, 0, 1}, {3, 0, 1}}, 0)).slots;
  EXPECT_EQ(y[4], 1.0);
}

TEST(SelectFeatures, Subsets) {
  FeatureVector fv;
  for (std::size_t i = 0; i < kFeatureCount; ++i) fv.slots[i] = static_cast<double>(i);
  EXPECT_EQ(select_features(fv, FeatureSubset::all12), std::vector<double>(fv.slots.begin(), fv.slots.end()));
  EXPECT_EQ(select_features(fv, FeatureSubset::no_triangle9), (std::vector<double>{0, 1, 2, 3, 4, 5, 6, 7, 8}));
  EXPECT_EQ(select_features(fv, FeatureSubset::no_degree10), (std::vector<double>{2, 3, 4, 5, 6, 7, 8, 9, 10, 11}));
  EXPECT_EQ(select_features(fv, FeatureSubset::no_degree_no_triangle7), (std::vector<double>{2, 3, 4, 5, 6, 7, 8}));
}

TEST(SelectFeatures, NamesParse) {
  for (auto s : {FeatureSubset::all12, FeatureSubset::no_triangle9, FeatureSubset::no_degree10,
                 FeatureSubset::no_degree_no_triangle7}) {
    EXPECT_EQ(parse_feature_subset(to_string(s)), s);
  }
  EXPECT_FALSE(parse_feature_subset("all").has_value());
}

TEST(EncodeFeatures, SlotRangesOnRandomGraphs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dense = oracle::random_graph(rng, 11, 0.3, 0.3, 3);
    const auto recs = oracle::records(dense);
    if (recs.empty()) continue;
    const auto g = load_graph(recs);
    for (NodeId v : g.nodes()) {
      const auto x = encode_features(compute_indices(extract_egonet(g, v))).slots;
      EXPECT_GE(x[2], 1.0);
      for (std::size_t i : {5u, 8u}) {
        EXPECT_GE(x[i], 0.0);
        EXPECT_LE(x[i], 1.0);
      }
      for (std::size_t i : {9u, 10u, 11u}) EXPECT_TRUE(x[i] == -1.0 || (x[i] >= 0.0 && x[i] <= 1.0));
      for (std::size_t i : {0u, 1u, 3u, 4u, 6u, 7u}) EXPECT_TRUE(x[i] == 0.0 || x[i] == 1.0);
    }
  }
}

TEST(FeatureTable, WorkerCountDoesNotChangeRows) {
  std::mt19937_64 rng(17);
  const auto dense = oracle::random_graph(rng, 40, 0.15, 0.3, 3);
  const auto g = load_graph(oracle::records(dense));
  const auto one = encode_rows(compute_node_indices(g, {}, 1));
  const auto four = encode_rows(compute_node_indices(g, {}, 4));
  EXPECT_EQ(one, four);
  EXPECT_EQ(one.size(), g.node_count());
}

TEST(FeatureTable, LabelsSelectRowsAndMustExist) {
  const auto g = load_graph(std::vector<EdgeRecord>{{1, 2, 1}, {2, 3, 1}});
  const auto rows = encode_rows(compute_node_indices(g, {{2, UserType::fictive}}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].node, 2u);
  EXPECT_EQ(rows[0].type, UserType::fictive);
  try {
    compute_node_indices(g, {{42, UserType::normal}});
    FAIL() << "expected an error for an absent node";
  } catch (const GraphError& e) {
    EXPECT_NE(std::string(e.what()).find("42"), std::string::npos);
  }
}

TEST(FeatureTable, TextRoundTripIsExact) {
  std::mt19937_64 rng(23);
  const auto g = load_graph(oracle::records(oracle::random_graph(rng, 30, 0.2, 0.3, 3)));
  auto rows = encode_rows(compute_node_indices(g, {}));
  rows[0].type = UserType::weapon;
  std::stringstream buf;
  write_feature_table(buf, rows);
  EXPECT_EQ(buf.str().substr(0, buf.str().find('\n')), "node_id,user_type,f0,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11");
  EXPECT_EQ(read_feature_table(buf), rows);
}

}  // namespace
}  // namespace egonet
