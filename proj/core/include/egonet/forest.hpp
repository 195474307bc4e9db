#pragma once

// Binary random-forest classifier.
//
// Each tree is grown on a bootstrap resample of the training set. At every
// internal node candidate features are drawn without replacement and the
// split minimizing weighted Gini impurity is taken, with thresholds at
// midpoints between consecutive distinct values. A tree's prediction is the
// fraction of positive training samples in the leaf reached; the forest
// averages those fractions.
//
// Randomness is derived from (seed, tree index, node path), so a tree grown
// to depth D and truncated at depth d is identical to a tree grown with
// max_depth = d. Grid search relies on this.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace egonet {

class ForestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ForestConfig {
  int n_trees = 300;
  int max_depth = 10;
  int max_features = 3;
  int min_samples_leaf = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const ForestConfig&, const ForestConfig&) = default;
};

/// Row-major feature matrix with binary labels.
class SampleSet {
 public:
  explicit SampleSet(std::size_t n_features = 0) : n_features_(n_features) {}

  void add(std::span<const double> x, bool positive);

  std::size_t size() const { return labels_.size(); }
  std::size_t n_features() const { return n_features_; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * n_features_, n_features_}; }
  double value(std::size_t i, std::size_t f) const { return values_[i * n_features_ + f]; }
  void set_value(std::size_t i, std::size_t f, double v) { values_[i * n_features_ + f] = v; }
  bool positive(std::size_t i) const { return labels_[i] != 0; }
  std::size_t positives() const;

  SampleSet subset(std::span<const std::size_t> rows) const;

 private:
  std::size_t n_features_;
  std::vector<double> values_;
  std::vector<std::uint8_t> labels_;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // samples with x[feature] <= threshold go left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double positive_fraction = 0.0;
  std::uint32_t samples = 0;  // bootstrap samples reaching this node

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  /// Leaf positive fraction for x. Nodes at depth `depth_limit` act as leaves.
  double predict(std::span<const double> x, int depth_limit = -1) const;

  std::span<const TreeNode> nodes() const { return nodes_; }
  int depth() const;
  /// Copy with every node below `depth` removed (preorder layout kept).
  DecisionTree pruned(int depth) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<DecisionTree> trees, ForestConfig config, std::size_t n_features,
              std::string feature_subset = "all12");

  double predict_proba(std::span<const double> x) const { return predict_proba(x, -1); }
  /// Probability with every tree truncated at `depth_limit` (-1: none).
  double predict_proba(std::span<const double> x, int depth_limit) const;
  /// Positive iff probability > 0.5.
  bool predict(std::span<const double> x) const { return predict_proba(x) > 0.5; }

  std::span<const DecisionTree> trees() const { return trees_; }
  const ForestConfig& config() const { return config_; }
  std::size_t n_features() const { return n_features_; }
  const std::string& feature_subset() const { return feature_subset_; }

  /// Copy equivalent to having trained with max_depth = depth.
  ForestModel pruned(int depth) const;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  std::vector<DecisionTree> trees_;
  ForestConfig config_;
  std::size_t n_features_ = 0;
  std::string feature_subset_;
};

/// Bootstrap resample (size n, with replacement) used for tree `tree_index`.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed, std::size_t tree_index);

/// Trains a forest. Output is independent of `workers`.
/// Throws ForestError on empty or single-class data and invalid config.
ForestModel fit(const SampleSet& samples, const ForestConfig& config, int workers = 1,
                std::string feature_subset = "all12");

void validate(const ForestConfig& config, std::size_t n_features);

/// Binary model container: magic, format version, config, trees.
std::vector<std::uint8_t> serialize(const ForestModel& model);
/// Throws ForestError on empty, truncated, corrupt or version-mismatched input.
ForestModel deserialize(std::span<const std::uint8_t> bytes);

void save_model(const std::string& path, const ForestModel& model);
ForestModel load_model(const std::string& path);

}  // namespace egonet
