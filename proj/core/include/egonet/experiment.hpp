#pragma once

// Training and evaluation protocol: class balancing, stratified splits, grid
// search with stratified k-fold cross-validation, repeated train/test rounds,
// and permutation importance. Every repeat draws its randomness from
// (master seed, repeat index), so results do not depend on worker count.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "egonet/feature_table.hpp"
#include "egonet/features.hpp"
#include "egonet/forest.hpp"
#include "egonet/io.hpp"
#include "egonet/metrics.hpp"

namespace egonet {

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact train fraction num/den.
struct Fraction {
  std::int64_t num = 3;
  std::int64_t den = 4;
};

struct GridSpec {
  std::vector<int> max_depth{3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<int> max_features{3, 4, 5, 6};
  std::vector<int> min_samples_leaf{1, 3, 5};
};

struct ExperimentSpec {
  UserType fraud_type = UserType::fictive;
  FeatureSubset subset = FeatureSubset::all12;
  bool exclude_k1 = false;
  int n_repeats = 100;
  Fraction train_fraction;
  GridSpec grid;
  int cv_folds = 10;
  std::uint64_t seed = 0;
  int n_trees = 300;
  /// When set, grid search is skipped and this configuration is used.
  std::optional<ForestConfig> fixed_config;
  bool compute_importance = false;
  int n_permutations = 10;
  int workers = 1;
};

void validate(const ExperimentSpec& spec);

struct TrainTest {
  SampleSet train;
  SampleSet test;
};

/// Subsamples negatives to the positive count when there are at least as
/// many negatives, then splits each class so floor(fraction * n) samples go
/// to training. With fewer negatives than positives no subsampling is done.
/// Throws ExperimentError when a class has fewer than 4 samples.
TrainTest balance_and_split(const SampleSet& negatives, const SampleSet& positives, Fraction train_fraction,
                            std::uint64_t seed);

/// All positives plus an equally sized random subset of the negatives (all
/// negatives when there are fewer than positives).
SampleSet balance(const SampleSet& negatives, const SampleSet& positives, std::uint64_t seed);

struct GridCell {
  int max_depth = 0;
  int max_features = 0;
  int min_samples_leaf = 0;
  double mean_auc = 0.0;
};

struct GridSearchResult {
  ForestConfig best;
  double best_auc = 0.0;
  std::vector<GridCell> cells;
};

/// Mean ROC AUC over stratified folds for every grid cell. Ties go to the
/// smaller max_depth, then max_features, then min_samples_leaf.
GridSearchResult grid_search(const SampleSet& train, const GridSpec& grid, int cv_folds, std::uint64_t seed,
                             int n_trees = 300, int workers = 1);

std::vector<ScoredSample> score(const ForestModel& model, const SampleSet& data);

/// Baseline ROC AUC minus the mean ROC AUC over `n_perms` random
/// permutations of one feature column of `test`.
double permutation_importance(const ForestModel& model, const SampleSet& test, std::size_t feature, int n_perms,
                              std::uint64_t seed);

struct RepeatResult {
  int repeat = 0;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  std::vector<double> importance;  // empty unless requested
  Curve roc;
  Curve pr;
};

struct EvalReport {
  ExperimentSpec spec;
  ForestConfig chosen;
  double grid_cv_auc = 0.0;  // NaN when grid search was skipped
  std::size_t n_negatives = 0;
  std::size_t n_positives = 0;
  std::vector<std::string> feature_names;
  std::vector<RepeatResult> repeats;
  double roc_mean = 0.0;
  double roc_std = 0.0;
  double pr_mean = 0.0;
  double pr_std = 0.0;
  std::vector<double> importance_mean;
  std::vector<double> importance_std;
};

/// Builds (negatives, positives) from a feature table: normal users versus
/// `fraud_type`, optionally without k = 1 users, reduced to `subset`.
std::pair<SampleSet, SampleSet> class_samples(std::span<const FeatureRow> rows, UserType fraud_type,
                                              FeatureSubset subset, bool exclude_k1);

EvalReport run_experiment(std::span<const FeatureRow> rows, const ExperimentSpec& spec);

/// Population mean and standard deviation.
std::pair<double, double> mean_std(std::span<const double> values);

}  // namespace egonet
