#pragma once

// Output files of the evaluation pipeline.
//
//   results.csv      fraud_type,subset,exclude_k1,repeat,roc_auc,pr_auc
//   curves/          roc_<tag>_r<repeat>.csv, pr_<tag>_r<repeat>.csv  (x,y)
//   summary.txt      mean +/- std AUC per experiment, one row each
//   importance.csv   feature,mean,std sorted by descending mean

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "egonet/experiment.hpp"

namespace egonet {

/// "<fraud>_<subset>" with "_exk1" appended when k = 1 users are excluded.
std::string experiment_tag(const ExperimentSpec& spec);

void write_results(std::ostream& out, std::span<const EvalReport> reports);
void write_curve(std::ostream& out, const Curve& curve);
void write_curves(const std::filesystem::path& dir, const EvalReport& report);
void write_summary(std::ostream& out, std::span<const EvalReport> reports);
void write_importance(std::ostream& out, const EvalReport& report);

/// results.csv, curves/ and summary.txt under `dir`.
void write_evaluation(const std::filesystem::path& dir, std::span<const EvalReport> reports);

}  // namespace egonet
