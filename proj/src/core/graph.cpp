#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "error.hpp"

namespace irlscut {

Adjacency build_adjacency(std::size_t node_count, std::span<const Edge> edges) {
  Adjacency adj;
  adj.offsets.assign(node_count + 1, 0);
  for (const auto& e : edges) {
    ++adj.offsets[e.u + 1];
    ++adj.offsets[e.v + 1];
  }
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.resize(adj.offsets.back());
  adj.edge_ids.resize(adj.offsets.back());
  std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  for (EdgeId i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    adj.targets[fill[e.u]] = e.v;
    adj.edge_ids[fill[e.u]++] = i;
    adj.targets[fill[e.v]] = e.u;
    adj.edge_ids[fill[e.v]++] = i;
  }
  // Sort each neighbour list by target id.
  std::vector<std::pair<NodeId, EdgeId>> scratch;
  for (std::size_t u = 0; u < node_count; ++u) {
    const auto b = adj.offsets[u], e = adj.offsets[u + 1];
    scratch.clear();
    for (auto k = b; k < e; ++k) scratch.emplace_back(adj.targets[k], adj.edge_ids[k]);
    std::sort(scratch.begin(), scratch.end());
    for (auto k = b; k < e; ++k) {
      adj.targets[k] = scratch[k - b].first;
      adj.edge_ids[k] = scratch[k - b].second;
    }
  }
  return adj;
}

WeightedGraph WeightedGraph::ingest(std::span<const RawEdge> edges, OriginalId source,
                                    OriginalId sink, std::span<const OriginalId> extra_nodes) {
  if (edges.empty()) fail(ErrorCode::EmptyGraph, "edge list is empty");
  if (source == sink) fail(ErrorCode::SourceEqualsSink, "source and sink are both " + std::to_string(source));

  std::map<std::pair<OriginalId, OriginalId>, double> merged;
  for (const auto& e : edges) {
    if (!(e.capacity > 0.0) || !std::isfinite(e.capacity)) {
      fail(ErrorCode::NonPositiveCapacity, "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                               ") has capacity " + std::to_string(e.capacity));
    }
    if (e.u == e.v) continue;  // self-loops never cross a cut
    merged[std::minmax(e.u, e.v)] += e.capacity;
  }

  std::vector<OriginalId> ids;
  ids.reserve(2 * merged.size() + extra_nodes.size() + 2);
  for (const auto& [key, cap] : merged) {
    ids.push_back(key.first);
    ids.push_back(key.second);
  }
  ids.insert(ids.end(), extra_nodes.begin(), extra_nodes.end());
  ids.push_back(source);
  ids.push_back(sink);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  WeightedGraph g;
  g.original_ids_ = std::move(ids);
  g.dense_of_.reserve(g.original_ids_.size());
  for (NodeId i = 0; i < g.original_ids_.size(); ++i) g.dense_of_.emplace(g.original_ids_[i], i);

  g.edges_.reserve(merged.size());
  for (const auto& [key, cap] : merged) {
    g.edges_.push_back({g.dense_of_.at(key.first), g.dense_of_.at(key.second), cap});
    g.total_capacity_ += cap;
    g.max_capacity_ = std::max(g.max_capacity_, cap);
  }
  if (g.edges_.empty()) fail(ErrorCode::EmptyGraph, "no edges besides self-loops");
  g.source_ = g.dense_of_.at(source);
  g.sink_ = g.dense_of_.at(sink);
  g.adjacency_ = build_adjacency(g.node_count(), g.edges_);

  // Connectivity by BFS from the source.
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  std::vector<NodeId> queue{g.source_};
  seen[g.source_] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (NodeId w : g.adjacency_.neighbors(queue[head])) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  if (queue.size() != g.node_count()) {
    fail(ErrorCode::DisconnectedGraph, std::to_string(g.node_count() - queue.size()) +
                                           " node(s) unreachable from the source");
  }
  return g;
}

std::optional<NodeId> WeightedGraph::dense_id(OriginalId id) const {
  auto it = dense_of_.find(id);
  if (it == dense_of_.end()) return std::nullopt;
  return it->second;
}

WeightedGraph WeightedGraph::scaled(double factor) const {
  if (!(factor > 0.0)) fail(ErrorCode::InvalidParams, "scale factor must be positive");
  WeightedGraph g = *this;
  g.total_capacity_ = 0.0;
  g.max_capacity_ = 0.0;
  for (auto& e : g.edges_) {
    e.capacity *= factor;
    g.total_capacity_ += e.capacity;
    g.max_capacity_ = std::max(g.max_capacity_, e.capacity);
  }
  return g;
}

std::vector<RawEdge> WeightedGraph::export_edges() const {
  std::vector<RawEdge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({original_ids_[e.u], original_ids_[e.v], e.capacity});
  return out;
}

TerminalSplit split_terminals(const WeightedGraph& g) {
  TerminalSplit split;
  const NodeId s = g.source(), t = g.sink();
  split.local_index.assign(g.node_count(), kNoNode);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (u == s || u == t) continue;
    split.local_index[u] = static_cast<NodeId>(split.graph_node.size());
    split.graph_node.push_back(u);
  }
  auto& nt = split.nonterminal;
  nt.node_count = split.graph_node.size();
  const auto edges = g.edges();
  for (EdgeId i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const bool u_term = e.u == s || e.u == t;
    const bool v_term = e.v == s || e.v == t;
    if (u_term && v_term) {
      split.direct_st_capacity += e.capacity;
      split.direct_st_edge = i;
    } else if (u_term || v_term) {
      const NodeId term = u_term ? e.u : e.v;
      const NodeId other = u_term ? e.v : e.u;
      split.terminal_edges.push_back(
          {other, term == s ? Terminal::Source : Terminal::Sink, e.capacity, i});
    } else {
      nt.edges.push_back({split.local_index[e.u], split.local_index[e.v], e.capacity});
      nt.source_edge.push_back(i);
    }
  }
  nt.adjacency = build_adjacency(nt.node_count, nt.edges);
  return split;
}

double cut_value(const WeightedGraph& g, std::span<const std::uint8_t> source_side) {
  if (source_side.size() != g.node_count()) {
    fail(ErrorCode::DimensionMismatch, "labeling has " + std::to_string(source_side.size()) +
                                           " entries, graph has " + std::to_string(g.node_count()));
  }
  if (source_side[g.source()] != 1 || source_side[g.sink()] != 0) {
    fail(ErrorCode::InvalidLabeling, "source must be labeled 1 and sink 0");
  }
  if (std::any_of(source_side.begin(), source_side.end(), [](std::uint8_t b) { return b > 1; })) {
    fail(ErrorCode::InvalidLabeling, "labels must be 0 or 1");
  }
  double value = 0.0;
  for (const auto& e : g.edges()) {
    if (source_side[e.u] != source_side[e.v]) value += e.capacity;
  }
  return value;
}

IncidenceOperator::IncidenceOperator(const WeightedGraph& g) : node_count_(g.node_count()) {
  tails_.reserve(g.edge_count());
  heads_.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    tails_.push_back(e.u);
    heads_.push_back(e.v);
  }
}

void IncidenceOperator::apply(std::span<const double> x, std::span<double> out) const {
  if (x.size() != node_count_ || out.size() != tails_.size()) {
    fail(ErrorCode::DimensionMismatch, "incidence apply");
  }
  for (std::size_t i = 0; i < tails_.size(); ++i) out[i] = x[tails_[i]] - x[heads_[i]];
}

void IncidenceOperator::apply_transpose(std::span<const double> z, std::span<double> out) const {
  if (z.size() != tails_.size() || out.size() != node_count_) {
    fail(ErrorCode::DimensionMismatch, "incidence apply_transpose");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < tails_.size(); ++i) {
    out[tails_[i]] += z[i];
    out[heads_[i]] -= z[i];
  }
}

}  // namespace irlscut
