#include "spectral.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"
#include "irls.hpp"
#include "maxflow.hpp"
#include "partition.hpp"

namespace irlscut {

Lambda2Result lambda2(const WeightedGraph& g, const SpectralOptions& options) {
  const auto split = split_terminals(g);
  const auto n = split.nonterminal.node_count;
  const auto blocks = std::clamp<std::size_t>(options.blocks, 1, std::max<std::size_t>(n, 1));
  const Partition partition = n == 0 ? Partition::single_block(0)
                                     : partition_graph(split.nonterminal, PartitionOptions{blocks, 0.05, 1});
  ReducedSystem system(g, split, partition);
  const ExecutionLayout layout(system.dimension(), partition.block_ranges, options.workers);

  std::vector<double> conductances(g.edge_count());
  for (std::size_t i = 0; i < conductances.size(); ++i) conductances[i] = g.edge(static_cast<EdgeId>(i)).capacity;
  system.assemble(conductances, layout, 1.0, -1.0);

  Lambda2Result result;
  std::vector<double> v(system.dimension(), 0.0);
  if (system.dimension() > 0) {
    BlockJacobiPreconditioner m(system.matrix(), partition.block_ranges, options.block_strategy, layout.pool());
    const auto report = pcg_solve(system.matrix(), system.rhs(), &m, v,
                                  PcgOptions{options.pcg_tolerance, options.pcg_max_iterations}, layout);
    if (!report.converged) {
      fail(ErrorCode::InvariantViolation, "lambda2 solve did not converge (relative residual " +
                                              std::to_string(report.relative_residual) + ")");
    }
    result.pcg_iterations = report.iterations;
    result.pcg_residual = report.relative_residual;
  }
  const auto x = system.embed(v, 1.0, -1.0);
  result.volume = 2.0 * g.total_capacity();
  result.energy = flow_value(g, x, conductances);
  result.lambda2 = result.energy / (2.0 * result.volume);
  return result;
}

CheegerReport cheeger_check(const WeightedGraph& g, const SpectralOptions& options) {
  CheegerReport r;
  const auto l2 = lambda2(g, options);
  r.lambda2 = l2.lambda2;
  r.min_cut = max_flow(g).flow;
  r.phi = r.min_cut / l2.volume;
  r.lower = 0.5 * r.phi * r.phi;
  r.upper = 2.0 * r.phi;
  constexpr double slack = 1e-6;
  r.holds = r.lower <= r.lambda2 * (1.0 + slack) && r.lambda2 <= r.upper * (1.0 + slack);
  return r;
}

}  // namespace irlscut
