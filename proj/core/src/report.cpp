#include "egonet/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>

#include "text.hpp"

namespace egonet {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string experiment_tag(const ExperimentSpec& spec) {
  std::string tag = std::string(to_string(spec.fraud_type)) + "_" + std::string(to_string(spec.subset));
  if (spec.exclude_k1) tag += "_exk1";
  return tag;
}

void write_results(std::ostream& out, std::span<const EvalReport> reports) {
  out << "fraud_type,subset,exclude_k1,repeat,roc_auc,pr_auc\n";
  for (const EvalReport& r : reports) {
    for (const RepeatResult& rep : r.repeats) {
      out << to_string(r.spec.fraud_type) << ',' << to_string(r.spec.subset) << ','
          << (r.spec.exclude_k1 ? "true" : "false") << ',' << rep.repeat << ',' << detail::format_real(rep.roc_auc)
          << ',' << detail::format_real(rep.pr_auc) << '\n';
    }
  }
}

void write_curve(std::ostream& out, const Curve& curve) {
  out << "x,y\n";
  for (const CurvePoint& p : curve.points) out << detail::format_real(p.x) << ',' << detail::format_real(p.y) << '\n';
}

void write_curves(const std::filesystem::path& dir, const EvalReport& report) {
  std::filesystem::create_directories(dir);
  const std::string tag = experiment_tag(report.spec);
  for (const RepeatResult& rep : report.repeats) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_r%03d.csv", rep.repeat);
    auto roc = open_out(dir / ("roc_" + tag + suffix));
    write_curve(roc, rep.roc);
    auto pr = open_out(dir / ("pr_" + tag + suffix));
    write_curve(pr, rep.pr);
  }
}

void write_summary(std::ostream& out, std::span<const EvalReport> reports) {
  out << "fraud_type  subset                  k=1 users  normal  fraud  repeats  ROC AUC          PR AUC\n";
  for (const EvalReport& r : reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-10s  %-22s  %-9s  %6zu  %5zu  %7zu  %.3f +/- %.3f  %.3f +/- %.3f\n",
                  std::string(to_string(r.spec.fraud_type)).c_str(), std::string(to_string(r.spec.subset)).c_str(),
                  r.spec.exclude_k1 ? "excluded" : "included", r.n_negatives, r.n_positives, r.repeats.size(),
                  r.roc_mean, r.roc_std, r.pr_mean, r.pr_std);
    out << line;
  }
  for (const EvalReport& r : reports) {
    out << experiment_tag(r.spec) << ": max_depth=" << r.chosen.max_depth << " max_features=" << r.chosen.max_features
        << " min_samples_leaf=" << r.chosen.min_samples_leaf;
    if (r.grid_cv_auc == r.grid_cv_auc) out << " cv_auc=" << fixed(r.grid_cv_auc, 4);
    out << '\n';
  }
}

void write_importance(std::ostream& out, const EvalReport& report) {
  if (report.importance_mean.size() != report.feature_names.size()) {
    throw ExperimentError("report carries no permutation importance");
  }
  std::vector<std::size_t> order(report.feature_names.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return report.importance_mean[a] > report.importance_mean[b];
  });
  out << "feature,mean,std\n";
  for (std::size_t i : order) {
    out << report.feature_names[i] << ',' << detail::format_real(report.importance_mean[i]) << ','
        << detail::format_real(report.importance_std[i]) << '\n';
  }
}

void write_evaluation(const std::filesystem::path& dir, std::span<const EvalReport> reports) {
  std::filesystem::create_directories(dir);
  auto results = open_out(dir / "results.csv");
  write_results(results, reports);
  for (const EvalReport& r : reports) write_curves(dir / "curves", r);
  auto summary = open_out(dir / "summary.txt");
  write_summary(summary, reports);
  if (!results || !summary) throw std::runtime_error("write failed under " + dir.string());
}

}  // namespace egonet
