#include "rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "error.hpp"
#include "maxflow.hpp"

namespace irlscut {

std::string_view rounding_method_name(RoundingMethod m) {
  return m == RoundingMethod::Sweep ? "sweep" : "two_level";
}

namespace {

void check_voltages(const WeightedGraph& g, std::span<const double> x) {
  if (x.size() != g.node_count()) {
    fail(ErrorCode::DimensionMismatch, "voltage vector has " + std::to_string(x.size()) + " entries, graph has " +
                                           std::to_string(g.node_count()));
  }
}

}  // namespace

CutResult sweep_cut(const WeightedGraph& g, std::span<const double> x) {
  check_voltages(g, x);
  const auto n = g.node_count();
  std::vector<NodeId> order;
  order.reserve(n);
  order.push_back(g.source());
  for (NodeId u = 0; u < n; ++u) {
    if (u != g.source() && u != g.sink()) order.push_back(u);
  }
  std::stable_sort(order.begin() + 1, order.end(), [&](NodeId a, NodeId b) { return x[a] > x[b]; });
  order.push_back(g.sink());

  const auto& adj = g.adjacency();
  std::vector<std::uint8_t> in_source(n, 0);
  double cut = 0.0;
  double best = 0.0;
  std::size_t best_len = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const NodeId u = order[k];
    const auto nbrs = adj.neighbors(u);
    const auto eids = adj.incident_edges(u);
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      const double c = g.edge(eids[j]).capacity;
      cut += in_source[nbrs[j]] ? -c : c;
    }
    in_source[u] = 1;
    if (best_len == 0 || cut < best) {
      best = cut;
      best_len = k + 1;
    }
  }
  CutResult result;
  result.method = RoundingMethod::Sweep;
  result.source_side.assign(n, 0);
  for (std::size_t k = 0; k < best_len; ++k) result.source_side[order[k]] = 1;
  result.value = cut_value(g, result.source_side);
  result.coarse_nodes = n;
  return result;
}

ThresholdPair cluster_voltages(std::span<const double> x) {
  if (x.empty()) fail(ErrorCode::DegenerateClustering, "no voltages to cluster");
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) fail(ErrorCode::DegenerateClustering, "all voltages are identical");

  ThresholdPair tp;
  double c0 = 0.1, c1 = 0.9;
  std::vector<std::uint8_t> assign(x.size(), 2);
  for (std::size_t round = 1; round <= 100; ++round) {
    bool changed = false;
    double sum0 = 0.0, sum1 = 0.0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const std::uint8_t a = std::abs(x[i] - c0) <= std::abs(x[i] - c1) ? 0 : 1;
      if (a != assign[i]) changed = true;
      assign[i] = a;
      if (a == 0) {
        sum0 += x[i];
        ++n0;
      } else {
        sum1 += x[i];
        ++n1;
      }
    }
    if (!changed) break;
    tp.rounds = round;
    if (n0 > 0) c0 = sum0 / static_cast<double>(n0);
    if (n1 > 0) c1 = sum1 / static_cast<double>(n1);
  }
  tp.center0 = c0;
  tp.center1 = c1;
  tp.gamma0 = c0 + kThresholdMargin;
  tp.gamma1 = c1 - kThresholdMargin;
  return tp;
}

Labeling CoarsenedProblem::lift(std::span<const std::uint8_t> coarse_side) const {
  if (coarse_side.size() != coarse.node_count()) fail(ErrorCode::DimensionMismatch, "coarse labeling size");
  Labeling fine(group.size());
  for (std::size_t u = 0; u < group.size(); ++u) {
    switch (group[u]) {
      case CoarseGroup::Source: fine[u] = 1; break;
      case CoarseGroup::Sink: fine[u] = 0; break;
      case CoarseGroup::Middle: fine[u] = coarse_side[coarse_node[u]]; break;
    }
  }
  return fine;
}

CoarsenedProblem coarsen(const WeightedGraph& g, std::span<const double> x, double gamma0, double gamma1) {
  check_voltages(g, x);
  CoarsenedProblem cp;
  const auto n = g.node_count();
  cp.group.resize(n);
  cp.coarse_node.resize(n);
  for (NodeId u = 0; u < n; ++u) {
    if (u == g.source() || (u != g.sink() && x[u] >= gamma1)) {
      cp.group[u] = CoarseGroup::Source;
      cp.coarse_node[u] = 0;
    } else if (u == g.sink() || x[u] <= gamma0) {
      cp.group[u] = CoarseGroup::Sink;
      cp.coarse_node[u] = 1;
    } else {
      cp.group[u] = CoarseGroup::Middle;
      cp.coarse_node[u] = static_cast<NodeId>(2 + cp.middle_count++);
    }
  }
  std::vector<RawEdge> edges;
  for (const auto& e : g.edges()) {
    const auto a = cp.coarse_node[e.u], b = cp.coarse_node[e.v];
    if (a == b) continue;  // contracted inside S_0 or S_1
    edges.push_back({a, b, e.capacity});
  }
  // ids 0..middle+1 are all present, so dense ids equal these ids.
  std::vector<OriginalId> ids(2 + cp.middle_count);
  std::iota(ids.begin(), ids.end(), OriginalId{0});
  cp.coarse = WeightedGraph::ingest(edges, 0, 1, ids);
  return cp;
}

CutResult two_level_round(const WeightedGraph& g, std::span<const double> x, const TwoLevelOptions& options) {
  check_voltages(g, x);
  auto tp = cluster_voltages(x);
  std::vector<std::string> warnings;
  if (tp.gamma0 >= tp.gamma1) {
    tp.gamma0 = tp.center0;
    tp.gamma1 = tp.center1;
    if (tp.gamma0 >= tp.gamma1) {
      auto r = sweep_cut(g, x);
      r.warnings.push_back("two-level: degenerate voltage clusters, used sweep cut");
      return r;
    }
    warnings.push_back("two-level: cluster centers closer than the margin, thresholds set to the centers");
  }
  auto cp = coarsen(g, x, tp.gamma0, tp.gamma1);
  if (options.max_coarse_nodes > 0 && cp.coarse.node_count() > options.max_coarse_nodes) {
    auto r = sweep_cut(g, x);
    std::ostringstream msg;
    msg << "two-level: coarse graph has " << cp.coarse.node_count() << " nodes (cap " << options.max_coarse_nodes
        << "), used sweep cut";
    r.warnings.push_back(msg.str());
    return r;
  }
  const auto flow = max_flow(cp.coarse);
  CutResult result;
  result.method = RoundingMethod::TwoLevel;
  result.source_side = cp.lift(flow.source_side);
  result.value = cut_value(g, result.source_side);
  result.coarse_nodes = cp.coarse.node_count();
  result.size_reduction = static_cast<double>(g.node_count()) / static_cast<double>(result.coarse_nodes);
  result.warnings = std::move(warnings);
  return result;
}

double relative_approx_ratio(double mu, double mu_star) {
  if (!(mu_star > 0.0)) fail(ErrorCode::ZeroOptimum, "optimal cut value must be positive");
  return (mu - mu_star) / mu_star;
}

}  // namespace irlscut
