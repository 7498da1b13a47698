#pragma once

#include <cstddef>
#include <vector>

#include "graph.hpp"

namespace irlscut {

struct MinCutResult {
  double value = 0.0;
  Labeling source_side;  // 1 = source side
};

struct MaxFlowResult {
  double flow = 0.0;
  double cut = 0.0;       // cut value of source_side, recomputed
  Labeling source_side;   // nodes reachable from s in the final residual graph
  std::size_t augmentations = 0;
};

// Exact s-t max-flow / min-cut on an undirected graph with floating-point
// capacities: Boykov-Kolmogorov augmenting paths with two search trees.
// Each undirected edge is modeled as two opposing arcs of capacity c.
// Residuals at or below 1e-12 * max capacity count as saturated.
MaxFlowResult max_flow(const WeightedGraph& g);

inline constexpr std::size_t kMaxEnumerationNodes = 22;

// Exhaustive minimum over all 2^(n-2) s-t labelings; ties go to the
// lexicographically smallest labeling (node order, 0 < 1).
MinCutResult brute_force_min_cut(const WeightedGraph& g);

}  // namespace irlscut
