#include "egonet/graph.hpp"

#include <algorithm>
#include <limits>

namespace egonet {

std::optional<std::uint32_t> TransactionGraph::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Weight TransactionGraph::weight(NodeId seller, NodeId buyer) const {
  auto u = index_of(seller);
  auto v = index_of(buyer);
  if (!u || !v) return 0;
  return weight_at(*u, *v);
}

Weight TransactionGraph::weight_at(std::uint32_t seller, std::uint32_t buyer) const {
  auto it = edge_weight_.find(key(seller, buyer));
  return it == edge_weight_.end() ? 0 : it->second;
}

std::vector<EdgeRecord> TransactionGraph::edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(edge_count());
  // Dense indices follow ascending id order, so this walk is already sorted.
  for (std::uint32_t u = 0; u < ids_.size(); ++u) {
    for (const Arc& a : out_[u]) {
      out.push_back({ids_[u], ids_[a.target], static_cast<std::int64_t>(a.weight)});
    }
  }
  return out;
}

TransactionGraph load_graph(std::span<const EdgeRecord> records) {
  std::vector<EdgeRecord> sorted(records.begin(), records.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const EdgeRecord& r = sorted[i];
    if (r.seller == r.buyer) {
      throw GraphError("record " + std::to_string(i + 1) + ": self-loop on node " +
                       std::to_string(r.seller));
    }
    if (r.weight < 1) {
      throw GraphError("record " + std::to_string(i + 1) + ": weight must be >= 1, got " +
                       std::to_string(r.weight));
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return a.seller != b.seller ? a.seller < b.seller : a.buyer < b.buyer;
  });

  // Merge duplicates by summing weights.
  std::vector<EdgeRecord> merged;
  merged.reserve(sorted.size());
  for (const EdgeRecord& r : sorted) {
    if (!merged.empty() && merged.back().seller == r.seller && merged.back().buyer == r.buyer) {
      if (merged.back().weight > std::numeric_limits<std::int64_t>::max() - r.weight) {
        throw GraphError("weight overflow on edge " + std::to_string(r.seller) + "->" +
                         std::to_string(r.buyer));
      }
      merged.back().weight += r.weight;
    } else {
      merged.push_back(r);
    }
  }

  TransactionGraph g;
  g.ids_.reserve(merged.size() * 2);
  for (const EdgeRecord& r : merged) {
    g.ids_.push_back(r.seller);
    g.ids_.push_back(r.buyer);
  }
  std::sort(g.ids_.begin(), g.ids_.end());
  g.ids_.erase(std::unique(g.ids_.begin(), g.ids_.end()), g.ids_.end());
  if (g.ids_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw GraphError("too many nodes");
  }
  g.ids_.shrink_to_fit();

  g.index_.reserve(g.ids_.size());
  for (std::uint32_t i = 0; i < g.ids_.size(); ++i) g.index_.emplace(g.ids_[i], i);

  g.out_.assign(g.ids_.size(), {});
  g.in_.assign(g.ids_.size(), {});
  g.edge_weight_.reserve(merged.size());
  for (const EdgeRecord& r : merged) {
    const std::uint32_t u = g.index_.at(r.seller);
    const std::uint32_t v = g.index_.at(r.buyer);
    const auto w = static_cast<Weight>(r.weight);
    g.out_[u].push_back({v, w});
    g.in_[v].push_back({u, w});
    g.edge_weight_.emplace(TransactionGraph::key(u, v), w);
  }
  // out_ is sorted by construction; in_ is sorted because sellers are visited in order.
  return g;
}

NodeId NodeAliases::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const NodeId id = names_.size();
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<NodeId> NodeAliases::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& NodeAliases::name(NodeId id) const {
  if (id >= names_.size()) throw GraphError("unknown alias id " + std::to_string(id));
  return names_[id];
}

EgoNetwork EgoNetwork::assemble(std::vector<NodeId> members, std::vector<Weight> focal_out,
                                std::vector<Weight> focal_in,
                                std::vector<NeighborEdge> neighbor_edges) {
  if (members.size() < 2) throw GraphError("egonet needs a focal node and at least one neighbor");
  if (focal_out.size() != members.size() || focal_in.size() != members.size()) {
    throw GraphError("egonet weight arrays must match member count");
  }
  if (focal_out[0] != 0 || focal_in[0] != 0) throw GraphError("egonet focal self-loop");
  for (std::size_t i = 1; i < members.size(); ++i) {
    if (focal_out[i] == 0 && focal_in[i] == 0) {
      throw GraphError("neighbor " + std::to_string(members[i]) + " has no edge with the focal node");
    }
  }

  EgoNetwork e;
  const auto k = static_cast<Local>(members.size() - 1);
  std::sort(neighbor_edges.begin(), neighbor_edges.end(),
            [](const NeighborEdge& a, const NeighborEdge& b) {
              return a.from != b.from ? a.from < b.from : a.to < b.to;
            });
  e.neighbor_weight_.reserve(neighbor_edges.size());
  for (const NeighborEdge& ne : neighbor_edges) {
    if (ne.from == 0 || ne.to == 0 || ne.from > k || ne.to > k || ne.from == ne.to) {
      throw GraphError("invalid neighbor edge " + std::to_string(ne.from) + "->" + std::to_string(ne.to));
    }
    if (ne.weight == 0) throw GraphError("neighbor edge with zero weight");
    if (!e.neighbor_weight_.emplace(key(ne.from, ne.to), ne.weight).second) {
      throw GraphError("duplicate neighbor edge " + std::to_string(ne.from) + "->" + std::to_string(ne.to));
    }
  }
  e.members_ = std::move(members);
  e.focal_out_ = std::move(focal_out);
  e.focal_in_ = std::move(focal_in);
  e.neighbor_edges_ = std::move(neighbor_edges);
  return e;
}

Weight EgoNetwork::weight(Local u, Local v) const {
  if (u == v || u >= members_.size() || v >= members_.size()) return 0;
  if (u == 0) return focal_out_[v];
  if (v == 0) return focal_in_[u];
  auto it = neighbor_weight_.find(key(u, v));
  return it == neighbor_weight_.end() ? 0 : it->second;
}

std::size_t EgoNetwork::edge_count() const {
  std::size_t n = neighbor_edges_.size();
  for (std::size_t i = 1; i < members_.size(); ++i) {
    n += (focal_out_[i] > 0) + (focal_in_[i] > 0);
  }
  return n;
}

std::vector<EdgeRecord> EgoNetwork::edges() const {
  std::vector<EdgeRecord> out;
  out.reserve(edge_count());
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (focal_out_[i] > 0) out.push_back({members_[0], members_[i], static_cast<std::int64_t>(focal_out_[i])});
    if (focal_in_[i] > 0) out.push_back({members_[i], members_[0], static_cast<std::int64_t>(focal_in_[i])});
  }
  for (const NeighborEdge& ne : neighbor_edges_) {
    out.push_back({members_[ne.from], members_[ne.to], static_cast<std::int64_t>(ne.weight)});
  }
  std::sort(out.begin(), out.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return a.seller != b.seller ? a.seller < b.seller : a.buyer < b.buyer;
  });
  return out;
}

EgoNetwork extract_egonet(const TransactionGraph& g, NodeId focal) {
  const auto fi = g.index_of(focal);
  if (!fi) throw GraphError("unknown node " + std::to_string(focal));

  // Merge the sorted out/in arc lists into the neighbor list.
  const auto out = g.out_arcs(*fi);
  const auto in = g.in_arcs(*fi);
  if (out.empty() && in.empty()) throw GraphError("isolated node " + std::to_string(focal));

  std::vector<std::uint32_t> nbr;  // dense indices, ascending
  std::vector<Weight> w_out{0}, w_in{0};
  nbr.reserve(out.size() + in.size());
  std::size_t i = 0, j = 0;
  while (i < out.size() || j < in.size()) {
    if (j == in.size() || (i < out.size() && out[i].target < in[j].target)) {
      nbr.push_back(out[i].target);
      w_out.push_back(out[i].weight);
      w_in.push_back(0);
      ++i;
    } else if (i == out.size() || in[j].target < out[i].target) {
      nbr.push_back(in[j].target);
      w_out.push_back(0);
      w_in.push_back(in[j].weight);
      ++j;
    } else {
      nbr.push_back(out[i].target);
      w_out.push_back(out[i].weight);
      w_in.push_back(in[j].weight);
      ++i;
      ++j;
    }
  }

  const std::size_t k = nbr.size();
  std::unordered_map<std::uint32_t, EgoNetwork::Local> local;
  local.reserve(k);
  for (std::size_t n = 0; n < k; ++n) local.emplace(nbr[n], static_cast<EgoNetwork::Local>(n + 1));

  // Neighbor-neighbor edges: scan neighbor out-lists with membership tests, or
  // probe all ordered neighbor pairs, whichever touches fewer entries.
  std::size_t scan_cost = 0;
  for (std::uint32_t a : nbr) scan_cost += g.out_arcs(a).size();
  std::vector<EgoNetwork::NeighborEdge> nn;
  if (scan_cost <= k * (k - 1)) {
    for (std::size_t n = 0; n < k; ++n) {
      for (const auto& arc : g.out_arcs(nbr[n])) {
        auto it = local.find(arc.target);
        if (it != local.end()) {
          nn.push_back({static_cast<EgoNetwork::Local>(n + 1), it->second, arc.weight});
        }
      }
    }
  } else {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        if (a == b) continue;
        if (Weight w = g.weight_at(nbr[a], nbr[b]); w > 0) {
          nn.push_back({static_cast<EgoNetwork::Local>(a + 1), static_cast<EgoNetwork::Local>(b + 1), w});
        }
      }
    }
  }

  std::vector<NodeId> members;
  members.reserve(k + 1);
  members.push_back(focal);
  for (std::uint32_t n : nbr) members.push_back(g.id_at(n));
  return EgoNetwork::assemble(std::move(members), std::move(w_out), std::move(w_in), std::move(nn));
}

IncidentDegrees incident_degrees(const EgoNetwork& e) {
  IncidentDegrees d;
  d.k = static_cast<std::int64_t>(e.neighbor_count());
  for (EgoNetwork::Local n = 1; n <= e.neighbor_count(); ++n) {
    const Weight wo = e.out_weight(n);
    const Weight wi = e.in_weight(n);
    d.k_out += wo > 0;
    d.k_in += wi > 0;
    d.s_out += static_cast<std::int64_t>(wo);
    d.s_in += static_cast<std::int64_t>(wi);
  }
  d.s = d.s_in + d.s_out;
  return d;
}

IncidentDegrees incident_degrees(const TransactionGraph& g, NodeId node) {
  const auto idx = g.index_of(node);
  if (!idx) throw GraphError("unknown node " + std::to_string(node));
  IncidentDegrees d;
  std::vector<std::uint32_t> partners;
  for (const auto& a : g.out_arcs(*idx)) {
    ++d.k_out;
    d.s_out += static_cast<std::int64_t>(a.weight);
    partners.push_back(a.target);
  }
  for (const auto& a : g.in_arcs(*idx)) {
    ++d.k_in;
    d.s_in += static_cast<std::int64_t>(a.weight);
    partners.push_back(a.target);
  }
  std::sort(partners.begin(), partners.end());
  d.k = std::unique(partners.begin(), partners.end()) - partners.begin();
  d.s = d.s_in + d.s_out;
  return d;
}

}  // namespace egonet
