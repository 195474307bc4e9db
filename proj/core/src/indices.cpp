#include "egonet/indices.hpp"

#include <vector>

namespace egonet {

namespace {

struct TriangleScan {
  std::int64_t tr = 0;
  std::int64_t shared_pairs = 0;
  std::int64_t ff = 0;
  std::int64_t cy = 0;
};

// One pass over neighbor-neighbor edges. Every neighbor is adjacent to the
// focal node, so each undirected neighbor pair {a, b} closes exactly one
// undirected triangle; the directed counts come from the six possible arcs
// on {f, a, b}.
TriangleScan scan_triangles(const EgoNetwork& e) {
  TriangleScan t;
  std::vector<std::int64_t> tri_degree(e.neighbor_count() + 1, 0);
  for (const auto& ne : e.neighbor_edges()) {
    const auto a = ne.from;
    const auto b = ne.to;
    if (a > b && e.has_edge(b, a)) continue;  // reciprocal pair seen from the a < b side
    ++t.tr;
    ++tri_degree[a];
    ++tri_degree[b];

    const bool fa = e.out_weight(a) > 0, af = e.in_weight(a) > 0;
    const bool fb = e.out_weight(b) > 0, bf = e.in_weight(b) > 0;
    const bool ab = e.has_edge(a, b), ba = e.has_edge(b, a);

    // Feedforward subsets are identified by their (source, middle, sink) order.
    t.ff += (fa && ab && fb) + (fb && ba && fa) + (af && fb && ab) + (ab && bf && af) + (bf && fa && ba) +
            (ba && af && bf);
    // The two cyclic orientations f->a->b->f and f->b->a->f.
    t.cy += (fa && ab && bf) + (fb && ba && af);
  }
  for (std::int64_t d : tri_degree) t.shared_pairs += d * (d - 1) / 2;
  return t;
}

}  // namespace

std::optional<Rational> sell_probability(const EgoNetwork& e) {
  const IncidentDegrees d = incident_degrees(e);
  if (d.k_in + d.k_out == 0) return std::nullopt;
  return Rational(d.k_out, d.k_in + d.k_out);
}

std::optional<Rational> weighted_sell_probability(const EgoNetwork& e) {
  const IncidentDegrees d = incident_degrees(e);
  if (d.s == 0) return std::nullopt;
  return Rational(d.s_out, d.s);
}

Clustering local_clustering(const EgoNetwork& e) {
  const auto k = static_cast<std::int64_t>(e.neighbor_count());
  Clustering out;
  out.tr = scan_triangles(e).tr;
  if (k >= 2) out.c = Rational(out.tr, k * (k - 1) / 2);
  return out;
}

Congregation triangle_congregation(const EgoNetwork& e) {
  const TriangleScan t = scan_triangles(e);
  Congregation out;
  out.tr = t.tr;
  out.shared_pairs = t.shared_pairs;
  if (t.tr >= 2) out.m = Rational(t.shared_pairs, t.tr * (t.tr - 1) / 2);
  return out;
}

CycleCounts cycle_probability(const EgoNetwork& e) {
  const TriangleScan t = scan_triangles(e);
  CycleCounts out;
  out.ff = t.ff;
  out.cy = t.cy;
  if (t.ff + t.cy > 0) out.cyp = Rational(t.cy, t.ff + t.cy);
  return out;
}

LocalIndices compute_indices(const EgoNetwork& e) {
  const IncidentDegrees d = incident_degrees(e);
  const TriangleScan t = scan_triangles(e);

  LocalIndices ix;
  ix.k = d.k;
  ix.k_in = d.k_in;
  ix.k_out = d.k_out;
  ix.s = d.s;
  ix.s_in = d.s_in;
  ix.s_out = d.s_out;
  ix.spk = Rational(d.s, d.k);
  if (d.k_in + d.k_out > 0) ix.sp = Rational(d.k_out, d.k_in + d.k_out);
  if (d.s > 0) ix.wsp = Rational(d.s_out, d.s);

  ix.tr = t.tr;
  ix.shared_pairs = t.shared_pairs;
  ix.ff = t.ff;
  ix.cy = t.cy;
  if (d.k >= 2) ix.c = Rational(t.tr, d.k * (d.k - 1) / 2);
  if (t.tr >= 2) ix.m = Rational(t.shared_pairs, t.tr * (t.tr - 1) / 2);
  if (t.ff + t.cy > 0) ix.cyp = Rational(t.cy, t.ff + t.cy);
  return ix;
}

}  // namespace egonet
