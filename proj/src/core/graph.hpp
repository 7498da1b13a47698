#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace irlscut {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using OriginalId = std::int64_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

// Edge as given in an input file, before validation and id remapping.
struct RawEdge {
  OriginalId u = 0;
  OriginalId v = 0;
  double capacity = 0.0;
};

// Canonical undirected edge: u < v, capacity > 0.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double capacity = 0.0;
};

// Compressed adjacency of an undirected weighted graph. Each undirected edge
// appears twice (once per endpoint); neighbours are sorted by id.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<NodeId> targets;
  std::vector<EdgeId> edge_ids;

  std::size_t degree(NodeId u) const { return offsets[u + 1] - offsets[u]; }
  std::span<const NodeId> neighbors(NodeId u) const {
    return {targets.data() + offsets[u], degree(u)};
  }
  std::span<const EdgeId> incident_edges(NodeId u) const {
    return {edge_ids.data() + offsets[u], degree(u)};
  }
};

Adjacency build_adjacency(std::size_t node_count, std::span<const Edge> edges);

// Validated undirected s-t graph with dense node ids 0..n-1. Immutable.
class WeightedGraph {
 public:
  // Validates, merges parallel edges by capacity summation and remaps ids to
  // a dense range (ascending original id). `extra_nodes` lists ids that must
  // exist even if no edge touches them (e.g. declared by a DIMACS header).
  static WeightedGraph ingest(std::span<const RawEdge> edges, OriginalId source, OriginalId sink,
                              std::span<const OriginalId> extra_nodes = {});

  std::size_t node_count() const { return original_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  NodeId source() const { return source_; }
  NodeId sink() const { return sink_; }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const Adjacency& adjacency() const { return adjacency_; }

  OriginalId original_id(NodeId u) const { return original_ids_[u]; }
  std::span<const OriginalId> original_ids() const { return original_ids_; }
  std::optional<NodeId> dense_id(OriginalId id) const;

  double total_capacity() const { return total_capacity_; }
  double max_capacity() const { return max_capacity_; }

  // Same topology and terminals, every capacity multiplied by factor > 0.
  WeightedGraph scaled(double factor) const;

  // Export as raw edges using the original ids.
  std::vector<RawEdge> export_edges() const;

 private:
  std::vector<Edge> edges_;
  std::vector<OriginalId> original_ids_;
  std::unordered_map<OriginalId, NodeId> dense_of_;
  Adjacency adjacency_;
  NodeId source_ = 0;
  NodeId sink_ = 0;
  double total_capacity_ = 0.0;
  double max_capacity_ = 0.0;
};

enum class Terminal : std::uint8_t { Source, Sink };

struct TerminalEdge {
  NodeId node = 0;  // graph id of the non-terminal endpoint
  Terminal terminal = Terminal::Source;
  double capacity = 0.0;
  EdgeId edge = 0;
};

// The graph induced on V \ {s,t}, in local indices 0..|V~|-1.
struct NonterminalGraph {
  std::size_t node_count = 0;
  std::vector<Edge> edges;           // local ids
  std::vector<EdgeId> source_edge;   // edges[i] corresponds to graph edge source_edge[i]
  Adjacency adjacency;
};

struct TerminalSplit {
  NonterminalGraph nonterminal;
  std::vector<NodeId> graph_node;    // local index -> graph id
  std::vector<NodeId> local_index;   // graph id -> local index, kNoNode for s and t
  std::vector<TerminalEdge> terminal_edges;
  double direct_st_capacity = 0.0;
  std::optional<EdgeId> direct_st_edge;
};

TerminalSplit split_terminals(const WeightedGraph& g);

// Side labeling: 1 = source side, 0 = sink side.
using Labeling = std::vector<std::uint8_t>;

double cut_value(const WeightedGraph& g, std::span<const std::uint8_t> source_side);

// Oriented edge-node incidence B (row i = +1 at edges[i].u, -1 at edges[i].v).
class IncidenceOperator {
 public:
  explicit IncidenceOperator(const WeightedGraph& g);

  std::size_t rows() const { return tails_.size(); }
  std::size_t cols() const { return node_count_; }

  // out = B x
  void apply(std::span<const double> x, std::span<double> out) const;
  // out = B^T z
  void apply_transpose(std::span<const double> z, std::span<double> out) const;

 private:
  std::size_t node_count_;
  std::vector<NodeId> tails_;
  std::vector<NodeId> heads_;
};

}  // namespace irlscut
