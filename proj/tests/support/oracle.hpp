#pragma once

// Brute-force reference for the local indices. Works on a dense weight
// matrix, enumerates every node triple and every directed-edge subset, and
// shares no code with the library beyond the NodeId/Weight typedefs.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "egonet/graph.hpp"
#include "egonet/indices.hpp"

namespace oracle {

/// Unreduced p/q, compared by cross-multiplication.
struct Frac {
  std::int64_t p = 0;
  std::int64_t q = 1;
};

inline bool same(const std::optional<Frac>& want, const std::optional<egonet::Rational>& got) {
  if (want.has_value() != got.has_value()) return false;
  if (!want) return true;
  return want->p * got->denominator() == got->numerator() * want->q;
}

inline bool same(const Frac& want, const egonet::Rational& got) {
  return want.p * got.denominator() == got.numerator() * want.q;
}

struct Dense {
  int n = 0;
  std::vector<std::vector<std::int64_t>> w;  // w[u][v]: weight of u -> v

  explicit Dense(int nodes) : n(nodes), w(nodes, std::vector<std::int64_t>(nodes, 0)) {}
  bool arc(int u, int v) const { return w[u][v] > 0; }
  bool adjacent(int u, int v) const { return arc(u, v) || arc(v, u); }
};

struct Expected {
  std::int64_t k = 0, k_in = 0, k_out = 0, s = 0, s_in = 0, s_out = 0;
  Frac spk;
  std::optional<Frac> sp, wsp, c, m, cyp;
  std::int64_t tr = 0, shared = 0, ff = 0, cy = 0;
};

/// Directed 3-edge subsets over {a, b, c}: one arc per pair, each present in
/// the graph. Transitive orientations are feedforward, the other two cyclic.
inline void count_motifs(const Dense& g, int a, int b, int c, std::int64_t& ff, std::int64_t& cy) {
  const int pairs[3][2] = {{a, b}, {b, c}, {a, c}};
  for (int mask = 0; mask < 8; ++mask) {
    int out[3] = {0, 0, 0};
    int node[3] = {a, b, c};
    bool present = true;
    for (int e = 0; e < 3; ++e) {
      int from = pairs[e][0], to = pairs[e][1];
      if (mask & (1 << e)) std::swap(from, to);
      if (!g.arc(from, to)) present = false;
      for (int i = 0; i < 3; ++i) {
        if (node[i] == from) out[i] += 1;
      }
    }
    if (!present) continue;
    // Cyclic iff every node has out-degree one inside the triple.
    if (out[0] == 1 && out[1] == 1 && out[2] == 1) {
      cy += 1;
    } else {
      ff += 1;
    }
  }
}

inline Expected indices(const Dense& g, int f) {
  Expected e;
  std::vector<int> nb;
  for (int u = 0; u < g.n; ++u) {
    if (u == f || !g.adjacent(f, u)) continue;
    nb.push_back(u);
    e.k += 1;
    e.k_out += g.arc(f, u);
    e.k_in += g.arc(u, f);
    e.s_out += g.w[f][u];
    e.s_in += g.w[u][f];
  }
  e.s = e.s_in + e.s_out;
  e.spk = {e.s, e.k};
  if (e.k_in + e.k_out > 0) e.sp = Frac{e.k_out, e.k_in + e.k_out};
  if (e.s > 0) e.wsp = Frac{e.s_out, e.s};

  std::vector<std::pair<int, int>> tris;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      if (g.adjacent(nb[i], nb[j])) tris.emplace_back(nb[i], nb[j]);
      count_motifs(g, f, nb[i], nb[j], e.ff, e.cy);
    }
  }
  e.tr = static_cast<std::int64_t>(tris.size());
  if (e.k >= 2) e.c = Frac{e.tr, e.k * (e.k - 1) / 2};
  for (std::size_t i = 0; i < tris.size(); ++i) {
    for (std::size_t j = i + 1; j < tris.size(); ++j) {
      const auto [a, b] = tris[i];
      const auto [c, d] = tris[j];
      if (a == c || a == d || b == c || b == d) e.shared += 1;
    }
  }
  if (e.tr >= 2) e.m = Frac{e.shared, e.tr * (e.tr - 1) / 2};
  if (e.ff + e.cy > 0) e.cyp = Frac{e.cy, e.ff + e.cy};
  return e;
}

/// Random graph: each unordered pair is linked with `p_edge`; a linked pair
/// is reciprocal with `p_recip`, otherwise one random direction. Weights are
/// uniform in 1..max_weight.
inline Dense random_graph(std::mt19937_64& rng, int nodes, double p_edge, double p_recip, int max_weight) {
  Dense g(nodes);
  std::bernoulli_distribution edge(p_edge), recip(p_recip), flip(0.5);
  std::uniform_int_distribution<int> weight(1, max_weight);
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) {
      if (!edge(rng)) continue;
      if (recip(rng)) {
        g.w[u][v] = weight(rng);
        g.w[v][u] = weight(rng);
      } else if (flip(rng)) {
        g.w[u][v] = weight(rng);
      } else {
        g.w[v][u] = weight(rng);
      }
    }
  }
  return g;
}

inline std::vector<egonet::EdgeRecord> records(const Dense& g) {
  std::vector<egonet::EdgeRecord> out;
  for (int u = 0; u < g.n; ++u) {
    for (int v = 0; v < g.n; ++v) {
      if (g.w[u][v] > 0) out.push_back({static_cast<egonet::NodeId>(u), static_cast<egonet::NodeId>(v), g.w[u][v]});
    }
  }
  return out;
}

/// Empty string when the library agrees with the oracle, else a description.
inline std::string compare(const Expected& e, const egonet::LocalIndices& ix) {
  std::string bad;
  auto check = [&](bool ok, const char* name) {
    if (!ok) bad += std::string(bad.empty() ? "" : ",") + name;
  };
  check(e.k == ix.k && e.k_in == ix.k_in && e.k_out == ix.k_out, "k");
  check(e.s == ix.s && e.s_in == ix.s_in && e.s_out == ix.s_out, "s");
  check(same(e.spk, ix.spk), "s/k");
  check(same(e.sp, ix.sp), "SP");
  check(same(e.wsp, ix.wsp), "WSP");
  check(same(e.c, ix.c) && e.tr == ix.tr, "C");
  check(same(e.m, ix.m) && e.shared == ix.shared_pairs, "m");
  check(same(e.cyp, ix.cyp) && e.ff == ix.ff && e.cy == ix.cy, "CYP");
  return bad;
}

}  // namespace oracle
