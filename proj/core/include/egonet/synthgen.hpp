#pragma once

// Synthetic labeled transaction graphs built one egocentric network at a
// time. Each focal user gets fresh anonymous neighbors, so the egonet seen
// by feature extraction is exactly the one the generator wired.
//
// Per user: degree (k = 1 with probability p_k1, otherwise log-normal), a
// selling role (exclusive seller, single sale, or mixed), transaction counts
// from a log-normal s/k excess, neighbor-neighbor edges from a log-normal
// clustering coefficient, and, for a share of users, cyclic orientations of
// some of those triangles.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/io.hpp"
#include "egonet/random.hpp"
#include "egonet/stats.hpp"

namespace egonet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean and median of a log-normal quantity.
struct MeanMedian {
  double mean = 1.0;
  double median = 1.0;
};

/// Observed per-type statistics the generator is calibrated to.
struct TypeTargets {
  std::size_t users = 0;
  double k_eq_1 = 0.0;       // share of all users
  MeanMedian k;              // k | k >= 2
  double s_eq_1 = 0.0;       // share of all users
  MeanMedian s;              // s | s >= 2 (reported only)
  double spk_eq_1 = 0.0;     // share of s >= 2
  MeanMedian spk;            // s/k | s/k > 1
  double sp_eq_1 = 0.0;      // share of k >= 2
  double sp_eq_inv_k = 0.0;  // share of k >= 2
  double wsp_eq_1 = 0.0;     // share of s >= 2
  double wsp_eq_inv_s = 0.0; // share of s >= 2
  double c_eq_0 = 0.0;       // share of k >= 2
  MeanMedian c;              // C | C > 0
  double m_eq_0 = 0.0;       // share of Tr >= 2 (reported only)
  double m_eq_1 = 0.0;       // share of Tr >= 2 (reported only)
  double cyp_eq_0 = 0.0;     // share of FF + CY >= 1
  MeanMedian cyp;            // CYP | CYP > 0
};

enum class K1Role { buyer, seller };

/// Generator knobs that have no direct target.
struct TypeModel {
  K1Role k1_role = K1Role::buyer;
  double mixed_sell_alpha = 1.0;  // Beta prior of the sell share of mixed users
  double mixed_sell_beta = 1.0;
  double reciprocal_prob = 0.05;  // per neighbor of a mixed user
  double triangle_locality = 0.5; // chance a new triangle reuses a wired neighbor
};

struct TypeConfig {
  TypeTargets targets;
  TypeModel model;
};

struct SynthConfig {
  std::map<UserType, TypeConfig> types;
};

/// Throws ConfigError on out-of-range values or infeasible targets.
void validate(const SynthConfig& config);
SynthConfig load_synth_config(const std::filesystem::path& path);
SynthConfig parse_synth_config(const std::string& yaml_text);
/// FNV-1a over a canonical rendering of every field.
std::uint64_t config_hash(const SynthConfig& config);

/// One generated user: local index 0 is the focal node, 1..k its neighbors.
struct EgoSample {
  std::vector<Weight> focal_out;  // size k + 1, entry 0 unused
  std::vector<Weight> focal_in;
  std::vector<EgoNetwork::NeighborEdge> neighbor_edges;

  std::size_t k() const { return focal_out.size() - 1; }
  EgoNetwork to_egonet(NodeId first_id) const;
};

/// Draws users of one type. Construction fixes the share of cycle-forming
/// users so that the CYP = 0 share meets its target.
class UserSampler {
 public:
  UserSampler(const TypeConfig& config, UserType type);

  /// User `index`; depends only on (config, type, seed, index).
  EgoSample operator()(std::uint64_t seed, std::size_t index) const;

  double cycler_rate() const { return cycler_rate_; }

 private:
  TypeConfig config_;
  UserType type_;
  double cycler_rate_ = 0.0;
};

struct LabeledDataset {
  TransactionGraph graph;
  LabelMap labels;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

/// Focal users get ids 0..N-1 in type order; neighbors follow.
LabeledDataset generate(const SynthConfig& config, std::uint64_t seed, int workers = 1);

/// Writes edges.csv and labels.csv under `dir`.
void write_dataset(const std::filesystem::path& dir, const LabeledDataset& data);

struct CalibrationRow {
  UserType type = UserType::normal;
  std::string statistic;
  double target = 0.0;
  double observed = 0.0;
  bool relative = false;  // medians compare relatively, shares absolutely
  double tolerance = 0.0; // percentage points for shares, fraction for medians
  bool tracked = true;    // untracked rows are informational

  double deviation() const;
  bool within() const;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  std::vector<TypeStats> stats;
  std::vector<std::string> warnings;

  bool all_tracked_within() const;
};

inline constexpr double kShareTolerancePp = 3.0;
inline constexpr double kMedianTolerance = 0.25;

CalibrationReport compare_to_targets(const SynthConfig& config, const std::vector<TypeStats>& stats);

/// Recomputes per-type statistics of a generated dataset and compares them
/// with the config targets. Throws StatsError on an empty dataset; a config
/// hash mismatch becomes a warning.
CalibrationReport validate(const LabeledDataset& data, const SynthConfig& config, int workers = 1);

/// Same statistics as generate() followed by validate(), computed one egonet
/// at a time without building the global graph.
CalibrationReport calibrate(const SynthConfig& config, std::uint64_t seed, int workers = 1);

void write_calibration(std::ostream& out, const CalibrationReport& report);

}  // namespace egonet
