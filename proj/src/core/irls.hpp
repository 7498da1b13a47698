#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "block_jacobi.hpp"
#include "graph.hpp"
#include "partition.hpp"
#include "pcg.hpp"
#include "sparse_matrix.hpp"

namespace irlscut {

struct ReweightState {
  std::vector<double> weights;  // per graph edge, >= epsilon
  double epsilon = 0.0;
};

// w_i = sqrt((c_i (x_u - x_v))^2 + eps^2) for every edge of g.
ReweightState reweight(const WeightedGraph& g, std::span<const double> x, double epsilon,
                       const WorkerPool& pool = WorkerPool(1));

// c_i^2 / w_i
std::vector<double> reweighted_conductances(const WeightedGraph& g, const ReweightState& w);

// S_eps(x) = sum_i sqrt((CBx)_i^2 + eps^2)
double smoothed_objective(const WeightedGraph& g, std::span<const double> x, double epsilon);

// Joint objective of the smoothed problem,
// H(x, w) = 1/2 sum_i ((CBx)_i^2 + eps^2) / w_i + w_i, which equals S_eps(x)
// when w is the reweighting of x.
double joint_objective(const WeightedGraph& g, std::span<const double> x, const ReweightState& w);

// x^T L x for the Laplacian with the given per-edge conductances.
double flow_value(const WeightedGraph& g, std::span<const double> x, std::span<const double> conductances);

// z_i = conductance_i (x_u - x_v), oriented along edges[i] (u -> v).
std::vector<double> electrical_flow(const WeightedGraph& g, std::span<const double> x,
                                    std::span<const double> conductances);
// Largest |net flow| over non-terminal nodes.
double max_conservation_defect(const WeightedGraph& g, std::span<const double> z);
// Net flow leaving the source.
double source_outflow(const WeightedGraph& g, std::span<const double> z);

// Reduced Laplacian L~ v = b over the non-terminal nodes, stored in the
// block-contiguous order of a partition. The pattern is fixed at
// construction; assemble() rewrites values and the right-hand side in place.
class ReducedSystem {
 public:
  ReducedSystem(const WeightedGraph& g, const TerminalSplit& split, const Partition& partition);

  // boundary_source / boundary_sink are the pinned voltages of s and t; the
  // right-hand side is b_u = conductance(u,s) * x_s + conductance(u,t) * x_t.
  void assemble(std::span<const double> conductances, const ExecutionLayout& layout,
                double source_value = 1.0, double sink_value = 0.0);
  void assemble(std::span<const double> conductances) { assemble(conductances, ExecutionLayout(dimension())); }

  std::size_t dimension() const { return order_.size(); }
  const SparseSymmetricMatrix& matrix() const { return matrix_; }
  std::span<const double> rhs() const { return rhs_; }
  const Partition& partition() const { return *partition_; }

  // Full-graph voltages from a reduced solution (permuted order).
  std::vector<double> embed(std::span<const double> v, double source_value = 1.0, double sink_value = 0.0) const;
  // Reduced (permuted) vector from full-graph voltages.
  std::vector<double> restrict_to_system(std::span<const double> x) const;

 private:
  const WeightedGraph* graph_;
  const Partition* partition_;
  std::vector<NodeId> order_;                 // row -> graph node
  std::vector<std::uint32_t> row_of_;         // graph node -> row, kNoNode for terminals
  // For each row, one slot per incident graph edge: position in the value
  // array of the off-diagonal entry, or npos for a terminal edge.
  std::vector<std::size_t> slot_offsets_;
  std::vector<EdgeId> slot_edge_;
  std::vector<std::size_t> slot_pos_;
  std::vector<std::int8_t> slot_terminal_;    // 0 none, 1 source, 2 sink
  SparseSymmetricMatrix matrix_;
  std::vector<double> rhs_;
};

struct IrlsConfig {
  double epsilon = 1e-6;
  std::size_t iterations = 50;
  double pcg_tolerance = 1e-3;
  std::size_t pcg_max_iterations = 50;
  BlockStrategy block_strategy = BlockStrategy::ExactLu;
  bool warm_start = true;
  bool early_exit = true;
  double early_exit_tolerance = 1e-8;
  int workers = 1;
  bool record_voltages = false;
};

struct IrlsIterationRecord {
  std::size_t iteration = 0;
  double smoothed_objective = 0.0;
  double flow_value = 0.0;
  PcgReport pcg;
  double wall_ms = 0.0;
  double max_step = 0.0;      // ||x^(l) - x^(l-1)||_inf, 0 for l = 0
  double min_voltage = 0.0;
  double max_voltage = 0.0;
};

struct IrlsTrace {
  std::vector<IrlsIterationRecord> records;
  std::vector<std::vector<double>> voltages;  // per iteration, when recorded
  std::vector<IndexRange> block_ranges;       // as used by every iteration
  std::vector<std::string> warnings;
  std::size_t box_violations = 0;
  bool early_exit = false;
};

// State handed to an observer after each solve.
struct IrlsIterate {
  std::size_t iteration;
  std::span<const double> voltages;       // full graph
  std::span<const double> conductances;   // the ones x was solved with
  const ReducedSystem& system;
};
using IrlsObserver = std::function<void(const IrlsIterate&)>;

struct IrlsResult {
  std::vector<double> voltages;
  IrlsTrace trace;
};

IrlsResult irls_run(const WeightedGraph& g, const TerminalSplit& split, const Partition& partition,
                    const IrlsConfig& config, const IrlsObserver& observer = {});

}  // namespace irlscut
