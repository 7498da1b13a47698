#include "maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "error.hpp"

namespace irlscut {
namespace {

constexpr std::uint32_t kNoArc = static_cast<std::uint32_t>(-1);
// Parent markers besides real arcs.
constexpr std::uint32_t kTerminalArc = kNoArc - 1;
constexpr std::uint32_t kOrphanArc = kNoArc - 2;

enum class Tree : std::uint8_t { Free, Source, Sink };

class BkSolver {
 public:
  explicit BkSolver(const WeightedGraph& g)
      : g_(g), n_(g.node_count()), threshold_(1e-12 * g.max_capacity()) {
    first_.assign(n_, kNoArc);
    const auto m = g.edge_count();
    head_.resize(2 * m);
    next_.resize(2 * m);
    residual_.resize(2 * m);
    capacity_.resize(2 * m);
    for (std::uint32_t i = 0; i < m; ++i) {
      const auto& e = g.edge(i);
      add_arc(2 * i, e.u, e.v, e.capacity);
      add_arc(2 * i + 1, e.v, e.u, e.capacity);
    }
    tree_.assign(n_, Tree::Free);
    parent_.assign(n_, kNoArc);
    timestamp_.assign(n_, 0);
    dist_.assign(n_, 0);
    active_flag_.assign(n_, 0);
  }

  MaxFlowResult run() {
    const NodeId s = g_.source(), t = g_.sink();
    tree_[s] = Tree::Source;
    tree_[t] = Tree::Sink;
    parent_[s] = parent_[t] = kTerminalArc;
    timestamp_[s] = timestamp_[t] = 1;
    dist_[s] = dist_[t] = 1;
    activate(s);
    activate(t);

    MaxFlowResult result;
    for (;;) {
      const auto meet = grow();
      if (meet == kNoArc) break;
      ++time_;
      augment(meet);
      ++result.augmentations;
      adopt();
    }

    for (std::uint32_t a = first_[s]; a != kNoArc; a = next_[a]) result.flow += capacity_[a] - residual_[a];

    // Source side: residual reachability from s.
    result.source_side.assign(n_, 0);
    std::vector<NodeId> queue{s};
    result.source_side[s] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (std::uint32_t a = first_[queue[h]]; a != kNoArc; a = next_[a]) {
        const auto q = head_[a];
        if (!result.source_side[q] && residual_[a] > threshold_) {
          result.source_side[q] = 1;
          queue.push_back(q);
        }
      }
    }
    if (result.source_side[t]) fail(ErrorCode::InvariantViolation, "sink reachable after max-flow terminated");
    result.cut = cut_value(g_, result.source_side);
    const double scale = std::max({std::abs(result.cut), std::abs(result.flow), g_.max_capacity()});
    if (std::abs(result.cut - result.flow) > 1e-9 * scale) {
      fail(ErrorCode::InvariantViolation, "max-flow " + std::to_string(result.flow) + " differs from cut " +
                                              std::to_string(result.cut));
    }
    return result;
  }

 private:
  static std::uint32_t sister(std::uint32_t a) { return a ^ 1u; }

  void add_arc(std::uint32_t a, NodeId from, NodeId to, double cap) {
    head_[a] = to;
    residual_[a] = cap;
    capacity_[a] = cap;
    next_[a] = first_[from];
    first_[from] = a;
  }

  void activate(NodeId v) {
    if (!active_flag_[v]) {
      active_flag_[v] = 1;
      active_.push_back(v);
    }
  }

  // Residual capacity in the direction the tree of `p` pushes flow along arc a (p -> head).
  double tree_capacity(NodeId p, std::uint32_t a) const {
    return tree_[p] == Tree::Source ? residual_[a] : residual_[sister(a)];
  }

  // Returns the arc (source-tree node -> sink-tree node) joining the trees.
  std::uint32_t grow() {
    while (!active_.empty()) {
      const NodeId p = active_.front();
      if (tree_[p] == Tree::Free) {
        active_.pop_front();
        active_flag_[p] = 0;
        continue;
      }
      for (std::uint32_t a = first_[p]; a != kNoArc; a = next_[a]) {
        if (tree_capacity(p, a) <= threshold_) continue;
        const NodeId q = head_[a];
        if (tree_[q] == Tree::Free) {
          tree_[q] = tree_[p];
          parent_[q] = sister(a);
          timestamp_[q] = timestamp_[p];
          dist_[q] = dist_[p] + 1;
          activate(q);
        } else if (tree_[q] != tree_[p]) {
          return tree_[p] == Tree::Source ? a : sister(a);
        } else if (timestamp_[q] <= timestamp_[p] && dist_[q] > dist_[p]) {
          // Shorten q's path through p.
          parent_[q] = sister(a);
          timestamp_[q] = timestamp_[p];
          dist_[q] = dist_[p] + 1;
        }
      }
      active_.pop_front();
      active_flag_[p] = 0;
    }
    return kNoArc;
  }

  void augment(std::uint32_t meet) {
    const NodeId x = head_[sister(meet)];
    const NodeId y = head_[meet];
    double bottleneck = residual_[meet];
    for (NodeId v = x; parent_[v] != kTerminalArc; v = head_[parent_[v]]) {
      bottleneck = std::min(bottleneck, residual_[sister(parent_[v])]);
    }
    for (NodeId v = y; parent_[v] != kTerminalArc; v = head_[parent_[v]]) {
      bottleneck = std::min(bottleneck, residual_[parent_[v]]);
    }
    push(meet, bottleneck);
    for (NodeId v = x; parent_[v] != kTerminalArc;) {
      const auto a = sister(parent_[v]);  // parent -> v
      const NodeId up = head_[parent_[v]];
      push(a, bottleneck);
      if (residual_[a] <= threshold_) make_orphan(v);
      v = up;
    }
    for (NodeId v = y; parent_[v] != kTerminalArc;) {
      const auto a = parent_[v];  // v -> parent
      const NodeId up = head_[a];
      push(a, bottleneck);
      if (residual_[a] <= threshold_) make_orphan(v);
      v = up;
    }
  }

  void push(std::uint32_t a, double f) {
    residual_[a] -= f;
    residual_[sister(a)] += f;
    if (residual_[a] < 0.0) residual_[a] = 0.0;  // rounding debris
  }

  void make_orphan(NodeId v) {
    parent_[v] = kOrphanArc;
    orphans_.push_back(v);
  }

  // Distance to the tree root through valid parents, or max if the path hits an orphan.
  std::uint32_t root_distance(NodeId q) {
    std::uint32_t d = 0;
    NodeId v = q;
    for (;;) {
      if (timestamp_[v] == time_) {
        d += dist_[v];
        break;
      }
      const auto a = parent_[v];
      if (a == kTerminalArc) {
        timestamp_[v] = time_;
        dist_[v] = 1;
        ++d;
        break;
      }
      if (a == kOrphanArc || a == kNoArc) return std::numeric_limits<std::uint32_t>::max();
      ++d;
      v = head_[a];
    }
    // Cache distances along the path.
    for (NodeId w = q; timestamp_[w] != time_; w = head_[parent_[w]]) {
      timestamp_[w] = time_;
      dist_[w] = d--;
    }
    return dist_[q];
  }

  void adopt() {
    while (!orphans_.empty()) {
      const NodeId p = orphans_.back();
      orphans_.pop_back();
      const Tree side = tree_[p];
      std::uint32_t best_arc = kNoArc;
      std::uint32_t best_dist = std::numeric_limits<std::uint32_t>::max();
      for (std::uint32_t a = first_[p]; a != kNoArc; a = next_[a]) {
        const NodeId q = head_[a];
        if (tree_[q] != side) continue;
        // Source tree: flow q -> p, arc sister(a). Sink tree: flow p -> q, arc a.
        const double cap = side == Tree::Source ? residual_[sister(a)] : residual_[a];
        if (cap <= threshold_) continue;
        const auto d = root_distance(q);
        if (d < best_dist) {
          best_dist = d;
          best_arc = a;
        }
      }
      if (best_arc != kNoArc) {
        parent_[p] = best_arc;
        timestamp_[p] = time_;
        dist_[p] = best_dist + 1;
        continue;
      }
      // No valid parent: p leaves its tree.
      for (std::uint32_t a = first_[p]; a != kNoArc; a = next_[a]) {
        const NodeId q = head_[a];
        if (tree_[q] != side) continue;
        const double cap = side == Tree::Source ? residual_[sister(a)] : residual_[a];
        if (cap > threshold_) activate(q);
        if (parent_[q] != kTerminalArc && parent_[q] != kOrphanArc && parent_[q] != kNoArc && head_[parent_[q]] == p) {
          make_orphan(q);
        }
      }
      tree_[p] = Tree::Free;
      parent_[p] = kNoArc;
    }
  }

  const WeightedGraph& g_;
  std::size_t n_;
  double threshold_;
  std::vector<std::uint32_t> first_, head_, next_;
  std::vector<double> residual_, capacity_;
  std::vector<Tree> tree_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint64_t> timestamp_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::uint8_t> active_flag_;
  std::deque<NodeId> active_;
  std::vector<NodeId> orphans_;
  std::uint64_t time_ = 1;
};

}  // namespace

MaxFlowResult max_flow(const WeightedGraph& g) { return BkSolver(g).run(); }

MinCutResult brute_force_min_cut(const WeightedGraph& g) {
  const auto n = g.node_count();
  if (n > kMaxEnumerationNodes) {
    fail(ErrorCode::TooLargeForEnumeration, std::to_string(n) + " nodes exceeds the enumeration limit of " +
                                                std::to_string(kMaxEnumerationNodes));
  }
  std::vector<NodeId> free_nodes;
  for (NodeId u = 0; u < n; ++u) {
    if (u != g.source() && u != g.sink()) free_nodes.push_back(u);
  }
  const auto k = free_nodes.size();
  Labeling side(n, 0);
  side[g.source()] = 1;
  MinCutResult best;
  best.value = std::numeric_limits<double>::infinity();
  // The first free node is the most significant bit, so increasing masks
  // visit labelings in lexicographic order.
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (std::size_t j = 0; j < k; ++j) side[free_nodes[j]] = (mask >> (k - 1 - j)) & 1u;
    double value = 0.0;
    for (const auto& e : g.edges()) {
      if (side[e.u] != side[e.v]) value += e.capacity;
    }
    if (best.source_side.empty() || value < best.value - 1e-12 * std::max(1.0, value)) {
      best.value = value;
      best.source_side = side;
    }
  }
  return best;
}

}  // namespace irlscut
