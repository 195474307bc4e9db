// egonet: generate synthetic data, extract local features, and train and
// evaluate fraud classifiers from the command line.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "egonet/experiment.hpp"
#include "egonet/feature_table.hpp"
#include "egonet/forest.hpp"
#include "egonet/io.hpp"
#include "egonet/report.hpp"
#include "egonet/stats.hpp"
#include "egonet/synthgen.hpp"

namespace fs = std::filesystem;
using namespace egonet;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& msg) { std::cerr << "egonet: " << msg << '\n'; }

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

struct ExperimentFlags {
  std::string features;
  std::vector<std::string> fraud_types;
  std::vector<std::string> subsets{"all12"};
  bool exclude_k1 = false;
  int repeats = 100;
  std::uint64_t seed = 0;
  int workers = 1;
  int trees = 300;
  int folds = 10;
  std::optional<int> max_depth;
  std::optional<int> max_features;
  std::optional<int> min_samples_leaf;
  std::string out;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool many) {
  cmd->add_option("--features", f.features, "Feature table (node_id,user_type,f0..f11)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* ft = cmd->add_option("--fraud-type", f.fraud_types, "Positive class: fictive, underwear, medicine, weapon")
                 ->required();
  if (many) {
    ft->description("Positive class; repeatable or comma-separated, 'all' for every fraud type")->delimiter(',');
    cmd->add_option("--subset", f.subsets, "Feature subset(s), comma-separated")->delimiter(',');
  } else {
    ft->expected(1);
    cmd->add_option("--subset", f.subsets, "Feature subset")->expected(1);
  }
  cmd->add_flag("--exclude-k1", f.exclude_k1, "Drop users with k = 1");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--trees", f.trees, "Trees per forest")->check(CLI::PositiveNumber);
  cmd->add_option("--folds", f.folds, "Cross-validation folds for the grid search")->check(CLI::Range(2, 1000));
  cmd->add_option("--max-depth", f.max_depth, "Fix max_depth (skips grid search with the other two)");
  cmd->add_option("--max-features", f.max_features, "Fix max_features");
  cmd->add_option("--min-samples-leaf", f.min_samples_leaf, "Fix min_samples_leaf");
}

std::vector<ExperimentSpec> build_specs(const ExperimentFlags& f) {
  std::vector<UserType> types;
  for (const std::string& name : f.fraud_types) {
    if (name == "all") {
      types.insert(types.end(), std::begin(kFraudTypes), std::end(kFraudTypes));
      continue;
    }
    const auto t = parse_user_type(name);
    if (!t || *t == UserType::normal) throw UsageError("--fraud-type: not a fraud type: " + name);
    types.push_back(*t);
  }
  std::vector<FeatureSubset> subsets;
  for (const std::string& name : f.subsets) {
    const auto s = parse_feature_subset(name);
    if (!s) throw UsageError("--subset: unknown subset " + name);
    subsets.push_back(*s);
  }
  const int fixed = f.max_depth.has_value() + f.max_features.has_value() + f.min_samples_leaf.has_value();
  if (fixed != 0 && fixed != 3) {
    throw UsageError("--max-depth, --max-features and --min-samples-leaf must be given together");
  }
  std::vector<ExperimentSpec> specs;
  for (FeatureSubset subset : subsets) {
    for (UserType type : types) {
      ExperimentSpec s;
      s.fraud_type = type;
      s.subset = subset;
      s.exclude_k1 = f.exclude_k1;
      s.n_repeats = f.repeats;
      s.seed = f.seed;
      s.workers = f.workers;
      s.n_trees = f.trees;
      s.cv_folds = f.folds;
      if (fixed == 3) s.fixed_config = ForestConfig{f.trees, *f.max_depth, *f.max_features, *f.min_samples_leaf, f.seed};
      try {
        validate(s);
      } catch (const ExperimentError& e) {
        throw UsageError(e.what());
      }
      specs.push_back(s);
    }
  }
  return specs;
}

int run_generate(const std::string& config_path, const std::string& out_dir, std::uint64_t seed, int workers,
                 std::optional<std::size_t> users) {
  SynthConfig cfg;
  try {
    cfg = load_synth_config(config_path);
    if (users) {
      for (auto& [type, tc] : cfg.types) tc.targets.users = *users;
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    log(std::string("invalid config: ") + e.what());
    return kExitRuntime;
  }
  log("generating with seed " + std::to_string(seed));
  const LabeledDataset data = generate(cfg, seed, workers);
  write_dataset(out_dir, data);
  log("wrote " + std::to_string(data.graph.node_count()) + " nodes, " + std::to_string(data.graph.edge_count()) +
      " edges, " + std::to_string(data.labels.size()) + " labeled users to " + out_dir);
  const CalibrationReport report = validate(data, cfg, workers);
  write_calibration(std::cout, report);
  auto file = open_out(fs::path(out_dir) / "calibration.txt");
  write_calibration(file, report);
  return 0;
}

int run_features(const std::string& edges, const std::string& labels_path, const std::string& out, int workers) {
  const TransactionGraph g = read_graph_file(edges);
  const LabelMap labels = labels_path.empty() ? LabelMap{} : read_labels_file(labels_path);
  const auto nodes = compute_node_indices(g, labels, workers);
  const auto rows = encode_rows(nodes);
  write_feature_table_file(out, rows);
  std::map<std::string, std::size_t> counts;
  for (const FeatureRow& r : rows) counts[r.type ? std::string(to_string(*r.type)) : "unlabeled"] += 1;
  std::cout << "rows=" << rows.size();
  for (const auto& [type, n] : counts) std::cout << ' ' << type << '=' << n;
  std::cout << '\n';
  return 0;
}

int run_stats(const std::string& edges, const std::string& labels_path, const std::string& out, int workers) {
  const TransactionGraph g = read_graph_file(edges);
  const LabelMap labels = read_labels_file(labels_path);
  if (labels.empty()) throw std::runtime_error("label file lists no users");
  const auto nodes = compute_node_indices(g, labels, workers);
  write_stats_report(out, nodes);
  for (const TypeStats& st : descriptive_stats(nodes)) {
    std::cout << to_string(st.type) << ": users=" << st.users;
    for (const FractionStat& f : st.fractions) std::cout << ' ' << f.name << '=' << f.count << '/' << f.base;
    std::cout << '\n';
  }
  return 0;
}

int run_train(const ExperimentFlags& f) {
  const ExperimentSpec spec = build_specs(f).front();
  const auto rows = read_feature_table_file(f.features);
  auto [neg, pos] = class_samples(rows, spec.fraud_type, spec.subset, spec.exclude_k1);
  if (neg.size() < 2 || pos.size() < 2) {
    throw ExperimentError("too few samples: " + std::to_string(neg.size()) + " normal, " +
                          std::to_string(pos.size()) + " " + std::string(to_string(spec.fraud_type)));
  }
  const SampleSet train = balance(neg, pos, derive_seed(spec.seed, {0x7}));
  ForestConfig cfg;
  if (spec.fixed_config) {
    cfg = *spec.fixed_config;
  } else {
    log("grid search over " + std::to_string(train.size()) + " samples");
    cfg = grid_search(train, spec.grid, spec.cv_folds, spec.seed, spec.n_trees, spec.workers).best;
  }
  cfg.seed = spec.seed;
  const ForestModel model = fit(train, cfg, spec.workers, std::string(to_string(spec.subset)));
  save_model(f.out, model);
  std::cout << "trained " << cfg.n_trees << " trees: max_depth=" << cfg.max_depth
            << " max_features=" << cfg.max_features << " min_samples_leaf=" << cfg.min_samples_leaf
            << " samples=" << train.size() << '\n';
  return 0;
}

int run_evaluate(const ExperimentFlags& f) {
  const auto specs = build_specs(f);
  const auto rows = read_feature_table_file(f.features);
  std::vector<EvalReport> reports;
  for (const ExperimentSpec& spec : specs) {
    log("evaluating " + experiment_tag(spec) + " over " + std::to_string(spec.n_repeats) + " repeats");
    reports.push_back(run_experiment(rows, spec));
  }
  write_evaluation(f.out, reports);
  write_summary(std::cout, reports);
  return 0;
}

int run_importance(const ExperimentFlags& f) {
  ExperimentSpec spec = build_specs(f).front();
  spec.compute_importance = true;
  const auto rows = read_feature_table_file(f.features);
  log("permutation importance for " + experiment_tag(spec) + " over " + std::to_string(spec.n_repeats) + " repeats");
  const EvalReport report = run_experiment(rows, spec);
  auto out = open_out(f.out);
  write_importance(out, report);
  write_importance(std::cout, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local egocentric-network features and random-forest fraud classification"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string config_path, out, edges, labels;
  std::uint64_t seed = 0;
  int workers = 1;
  std::optional<std::size_t> users;

  auto* gen = app.add_subcommand("generate", "Generate a labeled synthetic transaction graph");
  gen->add_option("--config", config_path, "Generator config (YAML)")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out, "Output directory for edges.csv and labels.csv")->required();
  gen->add_option("--seed", seed, "Master seed");
  gen->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  gen->add_option("--users", users, "Override the user count of every type")->check(CLI::PositiveNumber);

  auto* feat = app.add_subcommand("features", "Compute the 12-slot feature table");
  feat->add_option("--edges", edges, "Edge list (seller_id,buyer_id,weight)")->required()->check(CLI::ExistingFile);
  feat->add_option("--labels", labels, "Label file; when omitted every node gets a row")->check(CLI::ExistingFile);
  feat->add_option("--out", out, "Output feature table")->required();
  feat->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* stats = app.add_subcommand("stats", "Per-type descriptive statistics and plot data");
  stats->add_option("--edges", edges, "Edge list")->required()->check(CLI::ExistingFile);
  stats->add_option("--labels", labels, "Label file")->required()->check(CLI::ExistingFile);
  stats->add_option("--out", out, "Output directory")->required();
  stats->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  ExperimentFlags train_flags, eval_flags, imp_flags;
  auto* train = app.add_subcommand("train", "Train one forest on a balanced sample and save it");
  add_experiment_flags(train, train_flags, false);
  train->add_option("--out", train_flags.out, "Output model file")->required();

  auto* eval = app.add_subcommand("evaluate", "Repeated train/test evaluation with ROC and PR curves");
  add_experiment_flags(eval, eval_flags, true);
  eval->add_option("--repeats", eval_flags.repeats, "Train/test repeats")->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_flags.out, "Output directory")->required();

  auto* imp = app.add_subcommand("importance", "Permutation importance of each feature");
  add_experiment_flags(imp, imp_flags, false);
  imp->add_option("--repeats", imp_flags.repeats, "Train/test repeats")->check(CLI::PositiveNumber);
  imp->add_option("--out", imp_flags.out, "Output CSV (feature,mean,std)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "egonet: " << e.what() << '\n';
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return kExitUsage;
  }

  try {
    if (*gen) return run_generate(config_path, out, seed, workers, users);
    if (*feat) return run_features(edges, labels, out, workers);
    if (*stats) return run_stats(edges, labels, out, workers);
    if (*train) return run_train(train_flags);
    if (*eval) return run_evaluate(eval_flags);
    if (*imp) return run_importance(imp_flags);
  } catch (const UsageError& e) {
    std::cerr << "egonet: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "egonet: error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
