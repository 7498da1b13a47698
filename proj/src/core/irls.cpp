#include "irls.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace irlscut {
namespace {

constexpr std::size_t kEdgeChunk = 8192;

std::vector<IndexRange> edge_chunks(std::size_t m) {
  const IndexRange all{0, m};
  return split_ranges(std::span(&all, 1), kEdgeChunk);
}

void check_voltage_length(const WeightedGraph& g, std::span<const double> x) {
  if (x.size() != g.node_count()) {
    fail(ErrorCode::DimensionMismatch, "voltage vector has " + std::to_string(x.size()) + " entries, graph has " +
                                           std::to_string(g.node_count()) + " nodes");
  }
}

}  // namespace

ReweightState reweight(const WeightedGraph& g, std::span<const double> x, double epsilon, const WorkerPool& pool) {
  check_voltage_length(g, x);
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidParams, "epsilon must be positive");
  ReweightState state;
  state.epsilon = epsilon;
  state.weights.resize(g.edge_count());
  const auto edges = g.edges();
  const auto chunks = edge_chunks(edges.size());
  pool.run(chunks.size(), [&](std::size_t c) {
    for (std::size_t i = chunks[c].begin; i < chunks[c].end; ++i) {
      const double grad = edges[i].capacity * (x[edges[i].u] - x[edges[i].v]);
      state.weights[i] = std::sqrt(grad * grad + epsilon * epsilon);
    }
  });
  return state;
}

std::vector<double> reweighted_conductances(const WeightedGraph& g, const ReweightState& w) {
  std::vector<double> cond(g.edge_count());
  for (std::size_t i = 0; i < cond.size(); ++i) {
    const double c = g.edge(static_cast<EdgeId>(i)).capacity;
    cond[i] = c * c / w.weights[i];
  }
  return cond;
}

double smoothed_objective(const WeightedGraph& g, std::span<const double> x, double epsilon) {
  const auto w = reweight(g, x, epsilon);
  return pairwise_sum(w.weights);
}

double joint_objective(const WeightedGraph& g, std::span<const double> x, const ReweightState& w) {
  check_voltage_length(g, x);
  std::vector<double> terms(g.edge_count());
  const double eps2 = w.epsilon * w.epsilon;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    const double grad = e.capacity * (x[e.u] - x[e.v]);
    terms[i] = 0.5 * ((grad * grad + eps2) / w.weights[i] + w.weights[i]);
  }
  return pairwise_sum(terms);
}

double flow_value(const WeightedGraph& g, std::span<const double> x, std::span<const double> conductances) {
  check_voltage_length(g, x);
  std::vector<double> terms(g.edge_count());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    const double d = x[e.u] - x[e.v];
    terms[i] = conductances[i] * d * d;
  }
  return pairwise_sum(terms);
}

std::vector<double> electrical_flow(const WeightedGraph& g, std::span<const double> x,
                                    std::span<const double> conductances) {
  check_voltage_length(g, x);
  std::vector<double> z(g.edge_count());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    z[i] = conductances[i] * (x[e.u] - x[e.v]);
  }
  return z;
}

double max_conservation_defect(const WeightedGraph& g, std::span<const double> z) {
  IncidenceOperator b(g);
  std::vector<double> net(g.node_count());
  b.apply_transpose(z, net);
  double worst = 0.0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (u == g.source() || u == g.sink()) continue;
    worst = std::max(worst, std::abs(net[u]));
  }
  return worst;
}

double source_outflow(const WeightedGraph& g, std::span<const double> z) {
  double out = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    if (e.u == g.source()) out += z[i];
    if (e.v == g.source()) out -= z[i];
  }
  return out;
}

ReducedSystem::ReducedSystem(const WeightedGraph& g, const TerminalSplit& split, const Partition& partition)
    : graph_(&g), partition_(&partition) {
  const auto n = split.nonterminal.node_count;
  if (partition.node_count() != n) {
    fail(ErrorCode::DimensionMismatch, "partition covers " + std::to_string(partition.node_count()) +
                                           " nodes, non-terminal graph has " + std::to_string(n));
  }
  order_.resize(n);
  row_of_.assign(g.node_count(), kNoNode);
  for (std::size_t row = 0; row < n; ++row) {
    order_[row] = split.graph_node[partition.order[row]];
    row_of_[order_[row]] = static_cast<std::uint32_t>(row);
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> coords;
  coords.reserve(2 * split.nonterminal.edges.size());
  for (const auto& e : split.nonterminal.edges) {
    const auto a = partition.position[e.u], b = partition.position[e.v];
    coords.emplace_back(a, b);
    coords.emplace_back(b, a);
  }
  matrix_ = SparseSymmetricMatrix(build_pattern(n, std::move(coords)));
  rhs_.assign(n, 0.0);

  const auto& adj = g.adjacency();
  const auto& pattern = matrix_.pattern();
  slot_offsets_.push_back(0);
  for (std::uint32_t row = 0; row < n; ++row) {
    const auto u = order_[row];
    const auto nbrs = adj.neighbors(u);
    const auto eids = adj.incident_edges(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const auto w = nbrs[k];
      slot_edge_.push_back(eids[k]);
      if (w == g.source() || w == g.sink()) {
        slot_pos_.push_back(SparsityPattern::npos);
        slot_terminal_.push_back(w == g.source() ? 1 : 2);
      } else {
        slot_pos_.push_back(pattern.find(row, row_of_[w]));
        slot_terminal_.push_back(0);
      }
    }
    slot_offsets_.push_back(slot_edge_.size());
  }
}

void ReducedSystem::assemble(std::span<const double> conductances, const ExecutionLayout& layout,
                             double source_value, double sink_value) {
  if (conductances.size() != graph_->edge_count()) {
    fail(ErrorCode::DimensionMismatch, "conductance vector length differs from edge count");
  }
  const auto& pattern = matrix_.pattern();
  auto values = matrix_.values();
  const auto chunks = layout.chunks();
  layout.pool().run(chunks.size(), [&](std::size_t c) {
    for (std::size_t row = chunks[c].begin; row < chunks[c].end; ++row) {
      double diag = 0.0, b = 0.0;
      for (auto k = slot_offsets_[row]; k < slot_offsets_[row + 1]; ++k) {
        const double g = conductances[slot_edge_[k]];
        diag += g;
        switch (slot_terminal_[k]) {
          case 0: values[slot_pos_[k]] = -g; break;
          case 1: b += g * source_value; break;
          default: b += g * sink_value; break;
        }
      }
      values[pattern.diag[row]] = diag;
      rhs_[row] = b;
    }
  });
}

std::vector<double> ReducedSystem::embed(std::span<const double> v, double source_value, double sink_value) const {
  if (v.size() != dimension()) fail(ErrorCode::DimensionMismatch, "reduced vector length differs from system");
  std::vector<double> x(graph_->node_count(), 0.0);
  x[graph_->source()] = source_value;
  x[graph_->sink()] = sink_value;
  for (std::size_t row = 0; row < order_.size(); ++row) x[order_[row]] = v[row];
  return x;
}

std::vector<double> ReducedSystem::restrict_to_system(std::span<const double> x) const {
  check_voltage_length(*graph_, x);
  std::vector<double> v(dimension());
  for (std::size_t row = 0; row < order_.size(); ++row) v[row] = x[order_[row]];
  return v;
}

IrlsResult irls_run(const WeightedGraph& g, const TerminalSplit& split, const Partition& partition,
                    const IrlsConfig& config, const IrlsObserver& observer) {
  if (!(config.epsilon > 0.0) || !(config.pcg_tolerance > 0.0) || config.pcg_max_iterations == 0 ||
      config.workers < 1) {
    fail(ErrorCode::InvalidParams, "IRLS configuration values must be positive");
  }
  using Clock = std::chrono::steady_clock;
  IrlsResult result;
  auto& trace = result.trace;
  trace.block_ranges = partition.block_ranges;

  ReducedSystem system(g, split, partition);
  const ExecutionLayout layout(system.dimension(), partition.block_ranges, config.workers);
  const auto& pool = layout.pool();
  const PcgOptions pcg_options{config.pcg_tolerance, config.pcg_max_iterations};
  const double box_tol = 10.0 * config.pcg_tolerance;

  // W^(0) = C gives conductances c.
  std::vector<double> conductances(g.edge_count());
  for (std::size_t i = 0; i < conductances.size(); ++i) conductances[i] = g.edge(static_cast<EdgeId>(i)).capacity;

  std::vector<double> v(system.dimension(), 0.0);
  std::unique_ptr<BlockJacobiPreconditioner> preconditioner;
  std::vector<double> x_prev;

  for (std::size_t l = 0; l <= config.iterations; ++l) {
    const auto start = Clock::now();
    if (l > 0) {
      const auto w = reweight(g, result.voltages, config.epsilon, pool);
      conductances = reweighted_conductances(g, w);
    }
    system.assemble(conductances, layout);
    if (system.dimension() > 0) {
      if (!preconditioner) {
        preconditioner = std::make_unique<BlockJacobiPreconditioner>(system.matrix(), partition.block_ranges,
                                                                     config.block_strategy, pool);
      } else {
        preconditioner->refresh(system.matrix(), pool);
      }
    }
    if (l == 0 || !config.warm_start) std::fill(v.begin(), v.end(), 0.0);

    IrlsIterationRecord rec;
    rec.iteration = l;
    if (system.dimension() > 0) {
      auto options = pcg_options;
      if (l > 0 && config.warm_start) options.min_iterations = 1;
      rec.pcg = pcg_solve(system.matrix(), system.rhs(), preconditioner.get(), v, options, layout);
    } else {
      rec.pcg.converged = true;
    }
    x_prev = std::move(result.voltages);
    result.voltages = system.embed(v);
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

    const auto& x = result.voltages;
    rec.smoothed_objective = smoothed_objective(g, x, config.epsilon);
    rec.flow_value = flow_value(g, x, conductances);
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    rec.min_voltage = *lo;
    rec.max_voltage = *hi;
    if (!x_prev.empty()) {
      for (std::size_t i = 0; i < x.size(); ++i) rec.max_step = std::max(rec.max_step, std::abs(x[i] - x_prev[i]));
    }
    const auto out_of_box = static_cast<std::size_t>(
        std::count_if(x.begin(), x.end(), [&](double xi) { return xi < -box_tol || xi > 1.0 + box_tol; }));
    if (out_of_box > 0) {
      trace.box_violations += out_of_box;
      std::ostringstream msg;
      msg << "iteration " << l << ": " << out_of_box << " voltage(s) outside [" << -box_tol << ", " << 1.0 + box_tol
          << "]; PCG accuracy is insufficient (relative residual " << rec.pcg.relative_residual << ")";
      trace.warnings.push_back(msg.str());
    }
    if (!rec.pcg.converged) {
      std::ostringstream msg;
      msg << "iteration " << l << ": PCG stopped after " << rec.pcg.iterations << " iterations at relative residual "
          << rec.pcg.relative_residual;
      trace.warnings.push_back(msg.str());
    }
    if (config.record_voltages) trace.voltages.push_back(x);
    if (observer) observer(IrlsIterate{l, x, conductances, system});
    trace.records.push_back(std::move(rec));

    if (l > 0 && config.early_exit && trace.records.back().max_step < config.early_exit_tolerance) {
      trace.early_exit = true;
      break;
    }
  }
  return result;
}

}  // namespace irlscut
