#pragma once

// Pairwise ROC AUC reference: the share of (positive, negative) pairs ranked
// correctly, ties counting one half.

#include <random>
#include <vector>

#include "egonet/metrics.hpp"

namespace oracle {

inline double mann_whitney(const std::vector<egonet::ScoredSample>& s) {
  long double wins = 0;
  long double pairs = 0;
  for (const auto& p : s) {
    if (!p.positive) continue;
    for (const auto& n : s) {
      if (n.positive) continue;
      pairs += 1;
      if (p.score > n.score) wins += 1;
      if (p.score == n.score) wins += 0.5L;
    }
  }
  return static_cast<double>(wins / pairs);
}

/// At least one sample of each class. Scores are drawn from `levels` values
/// so small level counts give heavy ties.
inline std::vector<egonet::ScoredSample> random_scores(std::mt19937_64& rng, int n, int levels) {
  std::uniform_int_distribution<int> level(0, levels - 1);
  std::bernoulli_distribution label(0.4);
  std::vector<egonet::ScoredSample> s;
  for (int i = 0; i < n; ++i) s.push_back({level(rng) / static_cast<double>(levels), label(rng)});
  s.push_back({level(rng) / static_cast<double>(levels), true});
  s.push_back({level(rng) / static_cast<double>(levels), false});
  return s;
}

}  // namespace oracle
