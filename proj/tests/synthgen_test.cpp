#include <gtest/gtest.h>

#include <sstream>

#include "egonet/feature_table.hpp"
#include "egonet/features.hpp"
#include "egonet/synthgen.hpp"

namespace egonet {
namespace {

const std::filesystem::path kDefaultConfig = std::filesystem::path(EGONET_DATA_DIR) / "default_config.yaml";

SynthConfig scaled(std::size_t users) {
  SynthConfig c = load_synth_config(kDefaultConfig);
  for (auto& [type, tc] : c.types) tc.targets.users = users;
  return c;
}

constexpr const char* kSellerOnlyYaml = R"(
types:
  normal:
    targets:
      users: 50
      k_eq_1: 1.0
      k: {mean: 10, median: 5}
      s_eq_1: 1.0
      s: {mean: 10, median: 5}
      spk_eq_1: 0.5
      spk: {mean: 2, median: 1.5}
      sp_eq_1: 1.0
      sp_eq_inv_k: 0.0
      wsp_eq_1: 1.0
      wsp_eq_inv_s: 0.0
      c_eq_0: 1.0
      c: {mean: 0.1, median: 0.05}
      m_eq_0: 0.5
      m_eq_1: 0.1
      cyp_eq_0: 1.0
      cyp: {mean: 0.1, median: 0.05}
    model:
      k1_role: seller
      mixed_sell: {alpha: 1, beta: 1}
      reciprocal_prob: 0.0
      triangle_locality: 0.5
)";

TEST(Config, DefaultsLoadAndValidate) {
  const SynthConfig c = load_synth_config(kDefaultConfig);
  EXPECT_EQ(c.types.size(), 5u);
  EXPECT_EQ(c.types.at(UserType::normal).targets.users, 999u);
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(config_hash(c), config_hash(load_synth_config(kDefaultConfig)));
  SynthConfig changed = c;
  changed.types.at(UserType::weapon).model.reciprocal_prob = 0.2;
  EXPECT_NE(config_hash(c), config_hash(changed));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  std::string yaml = kSellerOnlyYaml;
  EXPECT_NO_THROW(parse_synth_config(yaml));
  EXPECT_THROW(parse_synth_config(yaml + "  extra: 1\n"), ConfigError);
  std::string bad_role = yaml;
  bad_role.replace(bad_role.find("seller"), 6, "broker");
  EXPECT_THROW(parse_synth_config(bad_role), ConfigError);
  EXPECT_THROW(parse_synth_config("types: [1, 2"), ConfigError);
  SynthConfig c = parse_synth_config(yaml);
  c.types.at(UserType::normal).targets.k.mean = 1.0;  // mean below median
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, FraudTypeCannotBeAllDegreeOne) {
  SynthConfig c = scaled(10);
  c.types.at(UserType::fictive).targets.k_eq_1 = 1.0;
  try {
    validate(c);
    FAIL() << "expected infeasible targets";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
  }
}

TEST(Generate, DeterministicPerSeedAndWorkerCount) {
  const SynthConfig c = scaled(40);
  const auto a = generate(c, 7, 1);
  const auto b = generate(c, 7, 3);
  EXPECT_EQ(a.graph.edges(), b.graph.edges());
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.config_hash, config_hash(c));
  const auto other = generate(c, 8, 1);
  EXPECT_NE(a.graph.edges(), other.graph.edges());
}

TEST(Generate, FocalIdsAndFraudStrength) {
  const SynthConfig c = scaled(60);
  const auto data = generate(c, 1);
  ASSERT_EQ(data.labels.size(), 300u);
  NodeId expected = 0;
  for (const auto& [id, type] : data.labels) EXPECT_EQ(id, expected++);
  for (const auto& node : compute_node_indices(data.graph, data.labels)) {
    EXPECT_GE(node.indices.s, 1);
    if (node.type != UserType::normal) EXPECT_GE(node.indices.s, 2) << node.node;
  }
}

TEST(Generate, SellerOnlyDegreeOneConfig) {
  const SynthConfig c = parse_synth_config(kSellerOnlyYaml);
  const auto data = generate(c, 3);
  const FeatureVector want{{1, 1, 1, 1, 1, 1, 1, 1, 1, -1, -1, -1}};
  for (const auto& row : encode_rows(compute_node_indices(data.graph, data.labels))) EXPECT_EQ(row.features, want);
}

TEST(Generate, EgonetMatchesSample) {
  const SynthConfig c = scaled(20);
  const auto data = generate(c, 5);
  const auto& weapon = c.types.at(UserType::weapon);
  const UserSampler sampler(weapon, UserType::weapon);
  // Weapon users come last in type order: ids 80..99.
  for (std::size_t i = 0; i < 20; ++i) {
    const auto direct = compute_indices(sampler(5, i).to_egonet(0));
    const auto in_graph = compute_indices(extract_egonet(data.graph, 80 + i));
    EXPECT_EQ(direct, in_graph) << i;
  }
}

TEST(Calibrate, MatchesGenerateThenValidate) {
  const SynthConfig c = scaled(80);
  const auto streamed = calibrate(c, 11, 2);
  const auto built = validate(generate(c, 11, 2), c, 2);
  ASSERT_EQ(streamed.rows.size(), built.rows.size());
  for (std::size_t i = 0; i < built.rows.size(); ++i) {
    EXPECT_EQ(streamed.rows[i].statistic, built.rows[i].statistic);
    EXPECT_EQ(streamed.rows[i].observed, built.rows[i].observed) << built.rows[i].statistic;
  }
  EXPECT_TRUE(built.warnings.empty());
}

TEST(Calibrate, DefaultShapeAtModerateSize) {
  // Degree-one share of normal users tracks its target already at 3000 users.
  SynthConfig c = load_synth_config(kDefaultConfig);
  c.types = {{UserType::normal, c.types.at(UserType::normal)}};
  c.types.at(UserType::normal).targets.users = 3000;
  const auto report = calibrate(c, 0);
  for (const auto& row : report.rows) {
    if (row.statistic == "k=1") EXPECT_TRUE(row.within()) << row.observed;
  }
}

TEST(Validate, EmptyDatasetAndHashMismatch) {
  const SynthConfig c = scaled(10);
  EXPECT_THROW(validate(LabeledDataset{}, c), StatsError);
  auto data = generate(c, 2);
  data.config_hash ^= 1;
  const auto report = validate(data, c);
  ASSERT_FALSE(report.warnings.empty());
  EXPECT_NE(report.warnings.front().find("hash"), std::string::npos);
  std::ostringstream out;
  write_calibration(out, report);
  EXPECT_EQ(out.str().rfind("warning:", 0), 0u);
}

}  // namespace
}  // namespace egonet
