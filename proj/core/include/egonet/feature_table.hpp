#pragma once

// Per-node feature extraction driver and the feature-table file format:
//
//   node_id,user_type,f0,...,f11
//
// Reals carry 17 significant digits; undefined C, m and CYP are written as -1.
// Unlabeled nodes use the user type "unlabeled".

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "egonet/features.hpp"
#include "egonet/graph.hpp"
#include "egonet/indices.hpp"
#include "egonet/io.hpp"

namespace egonet {

struct IndexedNode {
  NodeId node = 0;
  std::optional<UserType> type;
  LocalIndices indices;
};

struct FeatureRow {
  NodeId node = 0;
  std::optional<UserType> type;
  FeatureVector features;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

/// Computes indices for every labeled node, or for every node when `labels`
/// is empty. Output is ordered by node id and independent of `workers`.
/// Throws GraphError when a label names a node absent from the graph.
std::vector<IndexedNode> compute_node_indices(const TransactionGraph& g, const LabelMap& labels, int workers = 1);

std::vector<FeatureRow> encode_rows(std::span<const IndexedNode> nodes);

void write_feature_table(std::ostream& out, std::span<const FeatureRow> rows);
void write_feature_table_file(const std::filesystem::path& path, std::span<const FeatureRow> rows);
std::vector<FeatureRow> read_feature_table(std::istream& in);
std::vector<FeatureRow> read_feature_table_file(const std::filesystem::path& path);

}  // namespace egonet
