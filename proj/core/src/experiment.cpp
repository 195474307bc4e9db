#include "egonet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "egonet/parallel.hpp"
#include "egonet/random.hpp"

namespace egonet {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kSplitStream = 0x51;
constexpr std::uint64_t kGridStream = 0x52;
constexpr std::uint64_t kForestStream = 0x53;
constexpr std::uint64_t kImportanceStream = 0x54;
constexpr std::uint64_t kFoldStream = 0x55;

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  if (spec.n_repeats < 1) throw ExperimentError("n_repeats must be >= 1");
  if (spec.train_fraction.den <= 0 || spec.train_fraction.num <= 0 || spec.train_fraction.num >= spec.train_fraction.den) {
    throw ExperimentError("train fraction must lie strictly between 0 and 1");
  }
  if (!spec.fixed_config) {
    if (spec.grid.max_depth.empty() || spec.grid.max_features.empty() || spec.grid.min_samples_leaf.empty()) {
      throw ExperimentError("hyperparameter grid is empty");
    }
    if (spec.cv_folds < 2) throw ExperimentError("cv_folds must be >= 2");
  }
  if (spec.n_trees < 1) throw ExperimentError("n_trees must be >= 1");
  if (spec.compute_importance && spec.n_permutations < 1) throw ExperimentError("n_permutations must be >= 1");
}

TrainTest balance_and_split(const SampleSet& negatives, const SampleSet& positives, Fraction train_fraction,
                            std::uint64_t seed) {
  if (negatives.n_features() != positives.n_features()) throw ExperimentError("class feature counts differ");
  if (negatives.size() < 4 || positives.size() < 4) {
    throw ExperimentError("class too small to split: " + std::to_string(negatives.size()) + " negatives, " +
                          std::to_string(positives.size()) + " positives (need >= 4 each)");
  }
  Rng rng = make_rng(seed, {kSplitStream});
  std::vector<std::size_t> neg = shuffled_indices(negatives.size(), rng);
  if (negatives.size() >= positives.size()) neg.resize(positives.size());
  const std::vector<std::size_t> pos = shuffled_indices(positives.size(), rng);

  TrainTest out{SampleSet(negatives.n_features()), SampleSet(negatives.n_features())};
  auto place = [&](const SampleSet& src, const std::vector<std::size_t>& idx, bool label) {
    const auto n_train = static_cast<std::size_t>(static_cast<std::int64_t>(idx.size()) * train_fraction.num /
                                                  train_fraction.den);
    for (std::size_t i = 0; i < idx.size(); ++i) (i < n_train ? out.train : out.test).add(src.row(idx[i]), label);
  };
  place(negatives, neg, false);
  place(positives, pos, true);
  return out;
}

SampleSet balance(const SampleSet& negatives, const SampleSet& positives, std::uint64_t seed) {
  if (negatives.n_features() != positives.n_features()) throw ExperimentError("class feature counts differ");
  Rng rng = make_rng(seed, {kSplitStream});
  std::vector<std::size_t> neg = shuffled_indices(negatives.size(), rng);
  if (negatives.size() >= positives.size()) neg.resize(positives.size());
  std::sort(neg.begin(), neg.end());
  SampleSet out(negatives.n_features());
  for (std::size_t i : neg) out.add(negatives.row(i), false);
  for (std::size_t i = 0; i < positives.size(); ++i) out.add(positives.row(i), true);
  return out;
}

std::vector<ScoredSample> score(const ForestModel& model, const SampleSet& data) {
  std::vector<ScoredSample> s(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = {model.predict_proba(data.row(i)), data.positive(i)};
  return s;
}

GridSearchResult grid_search(const SampleSet& train, const GridSpec& grid, int cv_folds, std::uint64_t seed,
                             int n_trees, int workers) {
  if (grid.max_depth.empty() || grid.max_features.empty() || grid.min_samples_leaf.empty()) {
    throw ExperimentError("hyperparameter grid is empty");
  }
  if (cv_folds < 2) throw ExperimentError("cv_folds must be >= 2");
  const auto folds = static_cast<std::size_t>(cv_folds);
  if (train.size() < folds) throw ExperimentError("fewer training samples than folds");

  std::vector<int> depths = grid.max_depth, feats = grid.max_features, leaves = grid.min_samples_leaf;
  for (auto* v : {&depths, &feats, &leaves}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
  }

  // Stratified fold assignment.
  std::vector<std::size_t> pos_rows, neg_rows;
  for (std::size_t i = 0; i < train.size(); ++i) (train.positive(i) ? pos_rows : neg_rows).push_back(i);
  if (pos_rows.size() < folds || neg_rows.size() < folds) {
    throw ExperimentError("a cross-validation fold would hold a single class (" + std::to_string(pos_rows.size()) +
                          " positives, " + std::to_string(neg_rows.size()) + " negatives, " +
                          std::to_string(folds) + " folds)");
  }
  Rng rng = make_rng(seed, {kFoldStream});
  std::vector<std::size_t> fold_of(train.size());
  for (auto* rows : {&neg_rows, &pos_rows}) {
    std::shuffle(rows->begin(), rows->end(), rng);
    for (std::size_t i = 0; i < rows->size(); ++i) fold_of[(*rows)[i]] = i % folds;
  }
  std::vector<SampleSet> fit_sets, holdout_sets;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> in, out;
    for (std::size_t i = 0; i < train.size(); ++i) (fold_of[i] == f ? out : in).push_back(i);
    fit_sets.push_back(train.subset(in));
    holdout_sets.push_back(train.subset(out));
  }

  // One forest per (max_features, min_samples_leaf, fold), grown to the
  // deepest grid depth and evaluated truncated at every grid depth.
  const int deepest = depths.back();
  const std::size_t n_tasks = feats.size() * leaves.size() * folds;
  std::vector<std::vector<double>> task_auc(n_tasks);  // per depth
  parallel_for(n_tasks, workers, [&](std::size_t t) {
    const std::size_t fold = t % folds;
    const std::size_t leaf_i = (t / folds) % leaves.size();
    const std::size_t feat_i = t / (folds * leaves.size());
    ForestConfig cfg{n_trees, deepest, feats[feat_i], leaves[leaf_i], seed};
    const ForestModel model = fit(fit_sets[fold], cfg);
    const SampleSet& hold = holdout_sets[fold];
    std::vector<double> aucs;
    std::vector<ScoredSample> scores(hold.size());
    for (int depth : depths) {
      for (std::size_t i = 0; i < hold.size(); ++i) scores[i] = {model.predict_proba(hold.row(i), depth), hold.positive(i)};
      aucs.push_back(roc_auc(scores));
    }
    task_auc[t] = std::move(aucs);
  });

  GridSearchResult result;
  result.best_auc = -std::numeric_limits<double>::infinity();
  for (std::size_t di = 0; di < depths.size(); ++di) {
    for (std::size_t fi = 0; fi < feats.size(); ++fi) {
      for (std::size_t li = 0; li < leaves.size(); ++li) {
        double sum = 0.0;
        for (std::size_t f = 0; f < folds; ++f) sum += task_auc[(fi * leaves.size() + li) * folds + f][di];
        const double mean = sum / static_cast<double>(folds);
        result.cells.push_back({depths[di], feats[fi], leaves[li], mean});
        if (mean > result.best_auc) {
          result.best_auc = mean;
          result.best = ForestConfig{n_trees, depths[di], feats[fi], leaves[li], seed};
        }
      }
    }
  }
  return result;
}

double permutation_importance(const ForestModel& model, const SampleSet& test, std::size_t feature, int n_perms,
                              std::uint64_t seed) {
  if (test.size() < 2) throw ExperimentError("permutation importance needs at least 2 test samples");
  if (feature >= test.n_features()) throw ExperimentError("feature index out of range");
  if (n_perms < 1) throw ExperimentError("n_perms must be >= 1");
  const double baseline = roc_auc(score(model, test));

  std::vector<double> column(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) column[i] = test.value(i, feature);
  SampleSet permuted = test;
  double drop = 0.0;
  for (int p = 0; p < n_perms; ++p) {
    Rng rng = make_rng(seed, {feature, static_cast<std::uint64_t>(p)});
    std::vector<double> shuffled = column;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t i = 0; i < test.size(); ++i) permuted.set_value(i, feature, shuffled[i]);
    drop += baseline - roc_auc(score(model, permuted));
  }
  return drop / static_cast<double>(n_perms);
}

std::pair<SampleSet, SampleSet> class_samples(std::span<const FeatureRow> rows, UserType fraud_type,
                                              FeatureSubset subset, bool exclude_k1) {
  if (fraud_type == UserType::normal) throw ExperimentError("fraud type must not be 'normal'");
  const std::size_t width = subset_slots(subset).size();
  SampleSet neg(width), pos(width);
  for (const FeatureRow& r : rows) {
    if (!r.type) continue;
    if (exclude_k1 && r.features.slots[0] == 1.0) continue;
    const auto x = select_features(r.features, subset);
    if (*r.type == UserType::normal) {
      neg.add(x, false);
    } else if (*r.type == fraud_type) {
      pos.add(x, true);
    }
  }
  return {std::move(neg), std::move(pos)};
}

std::pair<double, double> mean_std(std::span<const double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

EvalReport run_experiment(std::span<const FeatureRow> rows, const ExperimentSpec& spec) {
  validate(spec);
  auto [negatives, positives] = class_samples(rows, spec.fraud_type, spec.subset, spec.exclude_k1);
  if (negatives.size() < 4 || positives.size() < 4) {
    throw ExperimentError("insufficient samples after filtering: " + std::to_string(negatives.size()) +
                          " normal, " + std::to_string(positives.size()) + " " +
                          std::string(to_string(spec.fraud_type)));
  }

  EvalReport report;
  report.spec = spec;
  report.n_negatives = negatives.size();
  report.n_positives = positives.size();
  for (std::size_t slot : subset_slots(spec.subset)) report.feature_names.emplace_back(kFeatureNames[slot]);

  auto split_for = [&](int repeat) {
    return balance_and_split(negatives, positives, spec.train_fraction,
                             derive_seed(spec.seed, {static_cast<std::uint64_t>(repeat), kSplitStream}));
  };

  if (spec.fixed_config) {
    report.chosen = *spec.fixed_config;
    report.grid_cv_auc = std::numeric_limits<double>::quiet_NaN();
  } else {
    const TrainTest first = split_for(0);
    const GridSearchResult gs =
        grid_search(first.train, spec.grid, spec.cv_folds, derive_seed(spec.seed, {kGridStream}), spec.n_trees,
                    spec.workers);
    report.chosen = gs.best;
    report.grid_cv_auc = gs.best_auc;
  }
  validate(report.chosen, negatives.n_features());

  report.repeats.resize(static_cast<std::size_t>(spec.n_repeats));
  parallel_for(report.repeats.size(), spec.workers, [&](std::size_t r) {
    const auto repeat = static_cast<std::uint64_t>(r);
    const TrainTest tt = split_for(static_cast<int>(r));
    ForestConfig cfg = report.chosen;
    cfg.seed = derive_seed(spec.seed, {repeat, kForestStream});
    const ForestModel model = fit(tt.train, cfg, 1, std::string(to_string(spec.subset)));
    const auto scores = score(model, tt.test);

    RepeatResult& out = report.repeats[r];
    out.repeat = static_cast<int>(r);
    out.roc = roc_curve(scores);
    out.pr = pr_curve(scores);
    out.roc_auc = roc_auc(scores);
    out.pr_auc = auc(out.pr);
    if (spec.compute_importance) {
      const std::uint64_t imp_seed = derive_seed(spec.seed, {repeat, kImportanceStream});
      for (std::size_t f = 0; f < tt.test.n_features(); ++f) {
        out.importance.push_back(permutation_importance(model, tt.test, f, spec.n_permutations, imp_seed));
      }
    }
  });

  std::vector<double> roc, pr;
  for (const RepeatResult& r : report.repeats) {
    roc.push_back(r.roc_auc);
    pr.push_back(r.pr_auc);
  }
  std::tie(report.roc_mean, report.roc_std) = mean_std(roc);
  std::tie(report.pr_mean, report.pr_std) = mean_std(pr);
  if (spec.compute_importance) {
    for (std::size_t f = 0; f < report.feature_names.size(); ++f) {
      std::vector<double> col;
      for (const RepeatResult& r : report.repeats) col.push_back(r.importance[f]);
      auto [m, s] = mean_std(col);
      report.importance_mean.push_back(m);
      report.importance_std.push_back(s);
    }
  }
  return report;
}

}  // namespace egonet
