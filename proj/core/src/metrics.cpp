#include "egonet/metrics.hpp"

#include <algorithm>
#include <cstdint>

namespace egonet {

namespace {

struct Block {
  std::int64_t tp = 0;  // cumulative
  std::int64_t fp = 0;
};

std::vector<Block> cumulative_blocks(std::span<const ScoredSample> scores) {
  std::vector<ScoredSample> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end(), [](const ScoredSample& a, const ScoredSample& b) { return a.score > b.score; });
  std::vector<Block> blocks;
  Block acc;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j].score == sorted[i].score) {
      (sorted[j].positive ? acc.tp : acc.fp) += 1;
      ++j;
    }
    blocks.push_back(acc);
    i = j;
  }
  return blocks;
}

}  // namespace

Curve roc_curve(std::span<const ScoredSample> scores) {
  const auto blocks = cumulative_blocks(scores);
  if (blocks.empty()) throw MetricsError("ROC curve needs samples");
  const std::int64_t p = blocks.back().tp;
  const std::int64_t n = blocks.back().fp;
  if (p == 0 || n == 0) throw MetricsError("ROC curve needs both positive and negative samples");
  Curve c{CurveKind::roc, {{0.0, 0.0}}};
  c.points.reserve(blocks.size() + 1);
  for (const Block& b : blocks) {
    c.points.push_back({static_cast<double>(b.fp) / static_cast<double>(n), static_cast<double>(b.tp) / static_cast<double>(p)});
  }
  return c;
}

Curve pr_curve(std::span<const ScoredSample> scores) {
  const auto blocks = cumulative_blocks(scores);
  if (blocks.empty() || blocks.back().tp == 0) throw MetricsError("PR curve needs at least one positive sample");
  const std::int64_t p = blocks.back().tp;
  Curve c{CurveKind::pr, {}};
  c.points.reserve(blocks.size());
  for (const Block& b : blocks) {
    c.points.push_back({static_cast<double>(b.tp) / static_cast<double>(p),
                        static_cast<double>(b.tp) / static_cast<double>(b.tp + b.fp)});
  }
  return c;
}

double auc(const Curve& curve) {
  std::vector<CurvePoint> pts = curve.points;
  if (curve.kind == CurveKind::pr && !pts.empty() && pts.front().x > 0.0) {
    pts.insert(pts.begin(), {0.0, pts.front().y});
  }
  if (pts.size() < 2) throw MetricsError("AUC needs at least two curve points");
  double area = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    area += (pts[i].x - pts[i - 1].x) * (pts[i].y + pts[i - 1].y) / 2.0;
  }
  return area;
}

double roc_auc(std::span<const ScoredSample> scores) {
  const auto blocks = cumulative_blocks(scores);
  if (blocks.empty()) throw MetricsError("ROC AUC needs samples");
  const std::int64_t p = blocks.back().tp;
  const std::int64_t n = blocks.back().fp;
  if (p == 0 || n == 0) throw MetricsError("ROC AUC needs both positive and negative samples");
  // Twice the trapezoid area in units of 1/(P*N).
  std::int64_t twice = 0;
  Block prev;
  for (const Block& b : blocks) {
    twice += (b.fp - prev.fp) * (b.tp + prev.tp);
    prev = b;
  }
  return static_cast<double>(twice) / (2.0 * static_cast<double>(p) * static_cast<double>(n));
}

double pr_auc(std::span<const ScoredSample> scores) { return auc(pr_curve(scores)); }

}  // namespace egonet
