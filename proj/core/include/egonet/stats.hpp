#pragma once

// Per-user-type descriptive statistics over local indices: conditional
// fractions and mean/median rows, survival curves and scatter point sets.

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "egonet/feature_table.hpp"
#include "egonet/indices.hpp"
#include "egonet/io.hpp"

namespace egonet {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `count` of `base` users satisfy `name`; `base_name` describes the base set.
struct FractionStat {
  std::string name;
  std::string base_name;
  std::size_t count = 0;
  std::size_t base = 0;

  /// Percentage of the base; NaN when the base is empty.
  double percent() const;
};

/// Mean and median of a quantity over the users where `name` applies.
struct SummaryStat {
  std::string name;
  std::size_t n = 0;
  double mean = 0.0;    // NaN when n = 0
  double median = 0.0;  // NaN when n = 0
};

struct TypeStats {
  UserType type = UserType::normal;
  std::size_t users = 0;
  std::vector<FractionStat> fractions;
  std::vector<SummaryStat> summaries;

  const FractionStat& fraction(std::string_view name) const;
  const SummaryStat& summary(std::string_view name) const;
};

/// Throws StatsError when `users` is empty.
TypeStats summarize(UserType type, std::span<const LocalIndices> users);

/// One entry per user type present among the labeled nodes, in type order.
/// Throws StatsError when no node is labeled.
std::vector<TypeStats> descriptive_stats(std::span<const IndexedNode> nodes);

double median(std::vector<double> values);

/// (x, fraction of values strictly greater than x) for every distinct x.
std::vector<std::pair<double, double>> survival_points(std::vector<double> values);

struct Series {
  std::string name;
  std::vector<double> values;
};

/// Survival-plot inputs: k, s, s/k, SP, WSP, C, m, CYP and their
/// conditional variants.
std::vector<Series> survival_series(std::span<const LocalIndices> users);

struct Scatter {
  std::string name;  // "<x>_vs_<y>"
  std::vector<std::pair<double, double>> points;
};

/// Paired quantities for users where both are defined.
std::vector<Scatter> scatter_sets(std::span<const LocalIndices> users);

/// Writes table.csv, summary.csv, survival/<type>_<series>.csv and
/// scatter/<type>_<name>.csv under `dir`.
void write_stats_report(const std::filesystem::path& dir, std::span<const IndexedNode> nodes);

}  // namespace egonet
