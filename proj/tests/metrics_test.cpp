#include <gtest/gtest.h>

#include <random>

#include "egonet/metrics.hpp"
#include "support/mann_whitney.hpp"

namespace egonet {
namespace {

std::vector<ScoredSample> perfect_2_2() { return {{0.9, true}, {0.8, true}, {0.3, false}, {0.1, false}}; }

std::vector<CurvePoint> pts(std::initializer_list<CurvePoint> l) { return l; }

TEST(RocCurve, PerfectRanking) {
  EXPECT_EQ(roc_curve(perfect_2_2()).points, pts({{0, 0}, {0, 0.5}, {0, 1}, {0.5, 1}, {1, 1}}));
  EXPECT_EQ(roc_auc(perfect_2_2()), 1.0);
}

TEST(RocCurve, AllTiedIsOneDiagonalSegment) {
  const std::vector<ScoredSample> s = {{0.4, true}, {0.4, false}, {0.4, false}, {0.4, true}};
  EXPECT_EQ(roc_curve(s).points, pts({{0, 0}, {1, 1}}));
  EXPECT_EQ(auc(roc_curve(s)), 0.5);
}

TEST(RocCurve, ReversedRanking) {
  const std::vector<ScoredSample> s = {{0.9, false}, {0.1, true}};
  EXPECT_EQ(roc_curve(s).points, pts({{0, 0}, {1, 0}, {1, 1}}));
  EXPECT_EQ(roc_auc(s), 0.0);
}

TEST(RocCurve, NeedsBothClasses) {
  EXPECT_THROW(roc_curve(std::vector<ScoredSample>{{0.5, true}}), MetricsError);
  EXPECT_THROW(roc_auc(std::vector<ScoredSample>{{0.5, false}}), MetricsError);
  EXPECT_THROW(auc(Curve{CurveKind::roc, {{0, 0}}}), MetricsError);
}

TEST(PrCurve, PerfectRanking) {
  const auto c = pr_curve(perfect_2_2());
  ASSERT_EQ(c.points.size(), 4u);
  EXPECT_EQ(c.points[0], (CurvePoint{0.5, 1}));
  EXPECT_EQ(c.points[1], (CurvePoint{1, 1}));
  EXPECT_DOUBLE_EQ(c.points[2].y, 2.0 / 3.0);
  EXPECT_EQ(c.points[3], (CurvePoint{1, 0.5}));
  EXPECT_DOUBLE_EQ(pr_auc(perfect_2_2()), 1.0);
}

TEST(PrCurve, AllPositiveAndAllTied) {
  const std::vector<ScoredSample> pos = {{0.9, true}, {0.5, true}, {0.2, true}};
  for (const auto& p : pr_curve(pos).points) EXPECT_EQ(p.y, 1.0);
  const std::vector<ScoredSample> tied = {{0.3, true}, {0.3, false}, {0.3, false}, {0.3, false}};
  EXPECT_EQ(pr_curve(tied).points, pts({{1, 0.25}}));
  EXPECT_DOUBLE_EQ(pr_auc(tied), 0.25);
  EXPECT_THROW(pr_curve(std::vector<ScoredSample>{{0.3, false}}), MetricsError);
}

TEST(RocAuc, DiagonalIsHalf) { EXPECT_EQ(auc(Curve{CurveKind::roc, {{0, 0}, {1, 1}}}), 0.5); }

TEST(RocAuc, MatchesPairwiseOracleWithHeavyTies) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = oracle::random_scores(rng, 2 + trial % 60, trial % 3 == 0 ? 3 : 20);
    const double want = oracle::mann_whitney(s);
    EXPECT_NEAR(roc_auc(s), want, 1e-12);
    EXPECT_NEAR(auc(roc_curve(s)), want, 1e-12);
  }
}

TEST(Curves, CoordinatesInUnitSquare) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_scores(rng, 40, 7);
    double prev_x = 0.0;
    for (const auto& p : roc_curve(s).points) {
      EXPECT_GE(p.x, prev_x);
      prev_x = p.x;
      EXPECT_LE(p.y, 1.0);
    }
    for (const auto& p : pr_curve(s).points) {
      EXPECT_GE(p.x, 0.0);
      EXPECT_LE(p.x, 1.0);
      EXPECT_GE(p.y, 0.0);
      EXPECT_LE(p.y, 1.0);
    }
  }
}

}  // namespace
}  // namespace egonet
