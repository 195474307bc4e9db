#pragma once

// ROC and precision-recall curves with tie-aware traversal, and trapezoidal
// area under either curve.
//
// Samples are visited in descending score order; samples sharing a score
// form one block and advance the curve by a single segment.

#include <span>
#include <stdexcept>
#include <vector>

namespace egonet {

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoredSample {
  double score = 0.0;
  bool positive = false;
};

enum class CurveKind { roc, pr };

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct Curve {
  CurveKind kind = CurveKind::roc;
  std::vector<CurvePoint> points;
};

/// (FPR, TPR) after each score block, starting at (0, 0). Needs both classes.
Curve roc_curve(std::span<const ScoredSample> scores);

/// (recall, precision) after each score block. Needs at least one positive.
Curve pr_curve(std::span<const ScoredSample> scores);

/// Trapezoidal area over the piecewise-linear curve. A PR curve is anchored
/// at recall 0 with the precision of its first block, so a perfect ranking
/// scores 1 and an uninformative one scores the positive rate.
double auc(const Curve& curve);

/// ROC AUC computed from integer block counts; equals the Mann-Whitney
/// statistic up to one final rounding.
double roc_auc(std::span<const ScoredSample> scores);
double pr_auc(std::span<const ScoredSample> scores);

}  // namespace egonet
