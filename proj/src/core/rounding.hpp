#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graph.hpp"

namespace irlscut {

enum class RoundingMethod { Sweep, TwoLevel };
std::string_view rounding_method_name(RoundingMethod m);

struct CutResult {
  Labeling source_side;
  double value = 0.0;
  RoundingMethod method = RoundingMethod::Sweep;
  std::size_t coarse_nodes = 0;   // |V_c| for two-level, else |V|
  double size_reduction = 1.0;    // |V| / |V_c|
  std::vector<std::string> warnings;
};

// Best prefix cut of the order s, non-terminals by voltage (descending, ties
// by node id), t. All n-1 prefixes are evaluated incrementally.
CutResult sweep_cut(const WeightedGraph& g, std::span<const double> x);

struct ThresholdPair {
  double center0 = 0.0;
  double center1 = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  std::size_t rounds = 0;
};

inline constexpr double kThresholdMargin = 0.05;

// One-dimensional 2-means (Lloyd) started at 0.1 / 0.9, until the assignment
// is unchanged or 100 rounds; an empty cluster keeps its center.
// gamma0 = c0 + 0.05, gamma1 = c1 - 0.05.
ThresholdPair cluster_voltages(std::span<const double> x);

enum class CoarseGroup : std::uint8_t { Sink, Source, Middle };  // S_0, S_1, S_c

struct CoarsenedProblem {
  WeightedGraph coarse;                // node 0 = s_c, node 1 = t_c, 2 + i = i-th middle node
  std::vector<CoarseGroup> group;      // per fine node
  std::vector<NodeId> coarse_node;     // per fine node
  std::size_t middle_count = 0;

  // Fine labeling induced by a coarse labeling.
  Labeling lift(std::span<const std::uint8_t> coarse_side) const;
};

// S_0: x <= gamma0, S_1: x >= gamma1, S_c otherwise (s and t forced into
// S_1 and S_0). Coarse edge weights: middle-middle edges kept; s_c-u sums
// edges from u into S_1; t_c-u into S_0; s_c-t_c sums edges S_1 x S_0.
CoarsenedProblem coarsen(const WeightedGraph& g, std::span<const double> x, double gamma0, double gamma1);

struct TwoLevelOptions {
  // Fall back to sweep cut when |V_c| exceeds this; 0 means no cap.
  std::size_t max_coarse_nodes = 0;
};

CutResult two_level_round(const WeightedGraph& g, std::span<const double> x, const TwoLevelOptions& options = {});

// (mu - mu*) / mu*; fails with ZeroOptimum if mu* <= 0.
double relative_approx_ratio(double mu, double mu_star);

}  // namespace irlscut
