#pragma once

// Fixed 12-slot feature encoding of LocalIndices. Slot order is part of the
// feature-table file format and must not change.
//
//   0  k = 1            (binary)
//   1  s = 1            (binary)
//   2  s / k
//   3  SP = 1           (binary)
//   4  SP = 1/k         (binary)
//   5  SP
//   6  WSP = 1          (binary)
//   7  WSP = 1/s        (binary)
//   8  WSP
//   9  C     or -1 when undefined
//  10  m     or -1 when undefined
//  11  CYP   or -1 when undefined

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "egonet/indices.hpp"

namespace egonet {

inline constexpr std::size_t kFeatureCount = 12;
inline constexpr double kUndefinedFeature = -1.0;

struct FeatureVector {
  std::array<double, kFeatureCount> slots{};

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Short column names, in slot order.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "k_eq_1", "s_eq_1", "s_over_k", "sp_eq_1", "sp_eq_inv_k", "sp",
    "wsp_eq_1", "wsp_eq_inv_s", "wsp", "clustering", "congregation", "cycle_prob"};

enum class FeatureSubset { all12, no_triangle9, no_degree10, no_degree_no_triangle7 };

std::string_view to_string(FeatureSubset s);
std::optional<FeatureSubset> parse_feature_subset(std::string_view s);

/// Slot indices kept by a subset, ascending.
std::span<const std::size_t> subset_slots(FeatureSubset s);

/// Binary slots test exact rational equalities before any conversion to double.
FeatureVector encode_features(const LocalIndices& ix);

std::vector<double> select_features(const FeatureVector& fv, FeatureSubset subset);

}  // namespace egonet
