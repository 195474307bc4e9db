#pragma once

// Local network indices of a focal node, computed exactly over its egonet.
//
// Every ratio is an exact rational. Ratios that can be undefined (zero
// denominator) are std::nullopt rather than a sentinel, so reports can
// condition on definedness; the -1 sentinel appears only in FeatureVector.

#include <cstdint>
#include <optional>

#include <boost/rational.hpp>

#include "egonet/graph.hpp"

namespace egonet {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

// Comparisons against integer literals go through these: under C++20
// rewritten comparisons, boost::rational's mixed rational/integer operator==
// calls itself.
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }
inline bool is_one(const Rational& r) { return r.numerator() == r.denominator(); }
inline bool is_positive(const Rational& r) { return r.numerator() > 0; }

struct LocalIndices {
  // Incident degrees and strengths.
  std::int64_t k = 0;
  std::int64_t k_in = 0;
  std::int64_t k_out = 0;
  std::int64_t s = 0;
  std::int64_t s_in = 0;
  std::int64_t s_out = 0;

  Rational spk;                  // s / k
  std::optional<Rational> sp;    // k_out / (k_in + k_out)
  std::optional<Rational> wsp;   // s_out / s
  std::optional<Rational> c;     // tr / (k(k-1)/2); undefined for k = 1
  std::optional<Rational> m;     // shared triangle pairs / (tr(tr-1)/2); undefined for tr <= 1
  std::optional<Rational> cyp;   // cy / (ff + cy); undefined for ff + cy = 0

  std::int64_t tr = 0;             // undirected triangles through the focal node
  std::int64_t shared_pairs = 0;   // triangle pairs sharing a second node
  std::int64_t ff = 0;             // feedforward edge subsets through the focal node
  std::int64_t cy = 0;             // cyclic edge subsets through the focal node

  friend bool operator==(const LocalIndices&, const LocalIndices&) = default;
};

std::optional<Rational> sell_probability(const EgoNetwork& e);
std::optional<Rational> weighted_sell_probability(const EgoNetwork& e);

struct Clustering {
  std::optional<Rational> c;
  std::int64_t tr = 0;
};
/// Triangles on the undirected, unweighted projection: a reciprocal pair
/// counts as one undirected edge.
Clustering local_clustering(const EgoNetwork& e);

struct Congregation {
  std::optional<Rational> m;
  std::int64_t shared_pairs = 0;
  std::int64_t tr = 0;
};
Congregation triangle_congregation(const EgoNetwork& e);

struct CycleCounts {
  std::optional<Rational> cyp;
  std::int64_t ff = 0;
  std::int64_t cy = 0;
};
/// Counts distinct directed-edge subsets {u->v, v->w, u->w} (feedforward)
/// and {u->v, v->w, w->u} (cyclic) over triples containing the focal node.
/// Weights are ignored.
CycleCounts cycle_probability(const EgoNetwork& e);

LocalIndices compute_indices(const EgoNetwork& e);

}  // namespace egonet
