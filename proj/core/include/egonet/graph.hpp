#pragma once

// Directed, weighted transaction graph and egocentric subgraph extraction.
//
// An edge seller -> buyer carries the number of attempted transactions
// between the two users. Reciprocal pairs are distinct edges. The graph is
// immutable once built and may be shared read-only across threads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace egonet {

using NodeId = std::uint64_t;
using Weight = std::uint64_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One row of an edge list. Weight is signed so that invalid input can be
/// represented and rejected.
struct EdgeRecord {
  NodeId seller = 0;
  NodeId buyer = 0;
  std::int64_t weight = 1;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

class TransactionGraph {
 public:
  struct Arc {
    std::uint32_t target;  // dense index
    Weight weight;
  };

  TransactionGraph() = default;

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_weight_.size(); }

  /// Node ids in ascending order.
  std::span<const NodeId> nodes() const { return ids_; }

  bool contains(NodeId id) const { return index_.contains(id); }
  std::optional<std::uint32_t> index_of(NodeId id) const;
  NodeId id_at(std::uint32_t index) const { return ids_[index]; }

  /// Outgoing arcs (node sells to target), sorted by target index.
  std::span<const Arc> out_arcs(std::uint32_t index) const { return out_[index]; }
  /// Incoming arcs (target sells to node), sorted by target index.
  std::span<const Arc> in_arcs(std::uint32_t index) const { return in_[index]; }

  /// Weight of seller -> buyer, 0 if absent. Average O(1).
  Weight weight(NodeId seller, NodeId buyer) const;
  Weight weight_at(std::uint32_t seller, std::uint32_t buyer) const;
  bool has_edge(NodeId seller, NodeId buyer) const { return weight(seller, buyer) > 0; }

  /// All edges sorted by (seller, buyer).
  std::vector<EdgeRecord> edges() const;

 private:
  friend TransactionGraph load_graph(std::span<const EdgeRecord> records);

  static std::uint64_t key(std::uint32_t u, std::uint32_t v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
  }

  std::unordered_map<NodeId, std::uint32_t> index_;
  std::vector<NodeId> ids_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::unordered_map<std::uint64_t, Weight> edge_weight_;
};

/// Builds a graph from edge records. Duplicate (seller, buyer) records are
/// merged by summing weights. Throws GraphError on self-loops and weights < 1.
TransactionGraph load_graph(std::span<const EdgeRecord> records);

/// Maps external string user ids onto opaque integer NodeIds.
class NodeAliases {
 public:
  NodeId intern(std::string_view name);
  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> names_;
};

/// Focal node, its neighbors, and every edge among them.
///
/// Members are addressed by local index: 0 is the focal node, 1..k are the
/// neighbors. Edges incident to the focal node are held per neighbor; edges
/// between two neighbors are held as a directed list with O(1) lookup.
class EgoNetwork {
 public:
  using Local = std::uint32_t;

  struct NeighborEdge {
    Local from;
    Local to;
    Weight weight;
  };

  /// Assembles an egonet from local parts. `members[0]` is the focal node.
  /// Every neighbor must have at least one incident edge with the focal node;
  /// neighbor edges must join two distinct neighbors. Throws GraphError.
  static EgoNetwork assemble(std::vector<NodeId> members, std::vector<Weight> focal_out,
                             std::vector<Weight> focal_in, std::vector<NeighborEdge> neighbor_edges);

  NodeId focal() const { return members_.front(); }
  std::span<const NodeId> members() const { return members_; }
  std::size_t neighbor_count() const { return members_.size() - 1; }

  /// Weight focal -> neighbor (0 if absent). `neighbor` in 1..k.
  Weight out_weight(Local neighbor) const { return focal_out_[neighbor]; }
  /// Weight neighbor -> focal (0 if absent).
  Weight in_weight(Local neighbor) const { return focal_in_[neighbor]; }

  /// Directed neighbor-neighbor edges sorted by (from, to).
  std::span<const NeighborEdge> neighbor_edges() const { return neighbor_edges_; }

  /// Weight of u -> v for any two members (0 if absent).
  Weight weight(Local u, Local v) const;
  bool has_edge(Local u, Local v) const { return weight(u, v) > 0; }

  std::size_t edge_count() const;
  /// All edges with global ids, sorted by (seller, buyer).
  std::vector<EdgeRecord> edges() const;

 private:
  static std::uint64_t key(Local u, Local v) { return (static_cast<std::uint64_t>(u) << 32) | v; }

  std::vector<NodeId> members_;
  std::vector<Weight> focal_out_;
  std::vector<Weight> focal_in_;
  std::vector<NeighborEdge> neighbor_edges_;
  std::unordered_map<std::uint64_t, Weight> neighbor_weight_;
};

/// Extracts the egocentric network of `focal`. Neighbors are ordered by id.
/// Throws GraphError for unknown or isolated nodes.
EgoNetwork extract_egonet(const TransactionGraph& g, NodeId focal);

struct IncidentDegrees {
  std::int64_t k = 0;
  std::int64_t k_in = 0;
  std::int64_t k_out = 0;
  std::int64_t s = 0;
  std::int64_t s_in = 0;
  std::int64_t s_out = 0;

  friend bool operator==(const IncidentDegrees&, const IncidentDegrees&) = default;
};

IncidentDegrees incident_degrees(const EgoNetwork& e);
IncidentDegrees incident_degrees(const TransactionGraph& g, NodeId node);

}  // namespace egonet
