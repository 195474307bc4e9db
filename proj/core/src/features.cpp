#include "egonet/features.hpp"

namespace egonet {

namespace {

constexpr std::size_t kAll12[] = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
constexpr std::size_t kNoTriangle9[] = {0, 1, 2, 3, 4, 5, 6, 7, 8};
constexpr std::size_t kNoDegree10[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
constexpr std::size_t kNoDegreeNoTriangle7[] = {2, 3, 4, 5, 6, 7, 8};

double flag(bool b) { return b ? 1.0 : 0.0; }

double or_undefined(const std::optional<Rational>& r) { return r ? to_double(*r) : kUndefinedFeature; }

}  // namespace

std::string_view to_string(FeatureSubset s) {
  switch (s) {
    case FeatureSubset::all12: return "all12";
    case FeatureSubset::no_triangle9: return "no-triangle9";
    case FeatureSubset::no_degree10: return "no-degree10";
    case FeatureSubset::no_degree_no_triangle7: return "no-degree-no-triangle7";
  }
  return "?";
}

std::optional<FeatureSubset> parse_feature_subset(std::string_view s) {
  for (auto v : {FeatureSubset::all12, FeatureSubset::no_triangle9, FeatureSubset::no_degree10,
                 FeatureSubset::no_degree_no_triangle7}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::span<const std::size_t> subset_slots(FeatureSubset s) {
  switch (s) {
    case FeatureSubset::all12: return kAll12;
    case FeatureSubset::no_triangle9: return kNoTriangle9;
    case FeatureSubset::no_degree10: return kNoDegree10;
    case FeatureSubset::no_degree_no_triangle7: return kNoDegreeNoTriangle7;
  }
  return {};
}

FeatureVector encode_features(const LocalIndices& ix) {
  FeatureVector fv;
  auto& x = fv.slots;
  x[0] = flag(ix.k == 1);
  x[1] = flag(ix.s == 1);
  x[2] = to_double(ix.spk);
  // SP = 1/k  <=>  k_out * k = k_in + k_out ; WSP = 1/s  <=>  s_out = 1.
  x[3] = flag(ix.sp && is_one(*ix.sp));
  x[4] = flag(ix.sp && ix.k_out * ix.k == ix.k_in + ix.k_out);
  x[5] = ix.sp ? to_double(*ix.sp) : 0.0;
  x[6] = flag(ix.wsp && is_one(*ix.wsp));
  x[7] = flag(ix.wsp && ix.s_out == 1);
  x[8] = ix.wsp ? to_double(*ix.wsp) : 0.0;
  x[9] = or_undefined(ix.c);
  x[10] = or_undefined(ix.m);
  x[11] = or_undefined(ix.cyp);
  return fv;
}

std::vector<double> select_features(const FeatureVector& fv, FeatureSubset subset) {
  std::vector<double> out;
  const auto slots = subset_slots(subset);
  out.reserve(slots.size());
  for (std::size_t i : slots) out.push_back(fv.slots[i]);
  return out;
}

}  // namespace egonet
