#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "egonet/stats.hpp"
#include "support/oracle.hpp"

namespace egonet {
namespace {

LocalIndices at(std::vector<EdgeRecord> edges, NodeId focal) {
  return compute_indices(extract_egonet(load_graph(edges), focal));
}

TEST(Summarize, SingleDegreeOneUser) {
  const std::vector<LocalIndices> users = {at({{0, 1, 1}}, 0)};
  const auto st = summarize(UserType::normal, users);
  EXPECT_EQ(st.users, 1u);
  EXPECT_EQ(st.fraction("k=1").percent(), 100.0);
  EXPECT_EQ(st.fraction("s=1").count, 1u);
  EXPECT_TRUE(std::isnan(st.fraction("SP=1").percent()));
  EXPECT_EQ(st.summary("k|k>=2").n, 0u);
  EXPECT_THROW(st.fraction("nope"), StatsError);
}

TEST(Summarize, EmptyTypeIsError) {
  EXPECT_THROW(summarize(UserType::weapon, std::vector<LocalIndices>{}), StatsError);
  EXPECT_THROW(descriptive_stats(std::vector<IndexedNode>{}), StatsError);
}

TEST(Summarize, ConditionalBasesAndComplements) {
  std::mt19937_64 rng(4);
  const auto dense = oracle::random_graph(rng, 60, 0.08, 0.3, 3);
  const auto g = load_graph(oracle::records(dense));
  std::vector<LocalIndices> users;
  for (NodeId v : g.nodes()) users.push_back(compute_indices(extract_egonet(g, v)));
  const auto st = summarize(UserType::fictive, users);

  std::size_t k2 = 0, s2 = 0, tr2 = 0, tri = 0, c0 = 0, not_c0 = 0;
  for (const auto& u : users) {
    k2 += u.k >= 2;
    s2 += u.s >= 2;
    tr2 += u.tr >= 2;
    tri += u.ff + u.cy >= 1;
    if (u.k >= 2) (u.tr == 0 ? c0 : not_c0) += 1;
  }
  EXPECT_EQ(st.fraction("k=1").base, users.size());
  EXPECT_EQ(st.fraction("SP=1").base, k2);
  EXPECT_EQ(st.fraction("SP=1/k").base, k2);
  EXPECT_EQ(st.fraction("WSP=1").base, s2);
  EXPECT_EQ(st.fraction("s/k=1").base, s2);
  EXPECT_EQ(st.fraction("m=0").base, tr2);
  EXPECT_EQ(st.fraction("CYP=0").base, tri);
  EXPECT_EQ(st.fraction("C=0").count, c0);
  // C=0 and C|C>0 partition the k >= 2 users.
  EXPECT_EQ(st.fraction("C=0").count + st.summary("C|C>0").n, k2);
  EXPECT_EQ(st.summary("CYP|CYP>0").n + st.fraction("CYP=0").count, tri);
  EXPECT_EQ(st.summary("k|k>=2").n, k2);
}

TEST(Median, OddEvenEmpty) {
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(Survival, StrictlyGreaterFraction) {
  const auto pts = survival_points({1, 2, 2, 4});
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0], (std::pair<double, double>{1, 0.75}));
  EXPECT_EQ(pts[1], (std::pair<double, double>{2, 0.25}));
  EXPECT_EQ(pts[2], (std::pair<double, double>{4, 0.0}));
}

TEST(Report, WritesTablesAndPlotData) {
  std::mt19937_64 rng(6);
  const auto g = load_graph(oracle::records(oracle::random_graph(rng, 40, 0.1, 0.3, 3)));
  std::vector<IndexedNode> nodes;
  for (NodeId v : g.nodes()) {
    nodes.push_back({v, v % 2 ? UserType::normal : UserType::medicine, compute_indices(extract_egonet(g, v))});
  }
  const auto dir = std::filesystem::temp_directory_path() / "egonet_stats_test";
  std::filesystem::remove_all(dir);
  write_stats_report(dir, nodes);
  std::ifstream table(dir / "table.csv");
  std::string header;
  std::getline(table, header);
  EXPECT_EQ(header, "user_type,statistic,base,count,base_count,percent");
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "survival" / "normal_s_over_k.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "scatter" / "medicine_k_vs_sp.csv"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace egonet
