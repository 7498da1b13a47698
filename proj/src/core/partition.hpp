#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "graph.hpp"
#include "parallel.hpp"
#include "sparse_matrix.hpp"

namespace irlscut {

// k-way node partition with the induced block-contiguous ordering.
struct Partition {
  std::size_t block_count = 0;
  std::vector<std::uint32_t> assignment;   // node -> block
  std::vector<std::uint32_t> order;        // position -> node
  std::vector<std::uint32_t> position;     // node -> position
  std::vector<IndexRange> block_ranges;    // positions of each block

  std::size_t node_count() const { return assignment.size(); }

  // Builds the ordering (by block, then node id). Fails with InvalidParams on
  // an out-of-range block id.
  static Partition from_assignment(std::vector<std::uint32_t> assignment, std::size_t block_count);
  static Partition single_block(std::size_t node_count);
};

struct PartitionOptions {
  std::size_t blocks = 1;
  double balance_tolerance = 0.05;
  std::uint64_t seed = 1;
};

// Multilevel recursive bisection (heavy-edge matching, greedy growing,
// boundary refinement) minimizing the weighted edge cut under the node-count
// balance constraint max block size <= max(ceil(n/p), (1+tol) n/p).
Partition partition_graph(const NonterminalGraph& g, const PartitionOptions& options);

std::size_t balance_cap(std::size_t node_count, std::size_t blocks, double tolerance);

struct PartitionStats {
  double edge_cut = 0.0;
  std::size_t max_block_nodes = 0;
  std::size_t min_block_nodes = 0;
  std::size_t max_block_nnz = 0;  // nonzeros of the diagonal block (incl. diagonal)
  std::size_t min_block_nnz = 0;
};
PartitionStats partition_stats(const NonterminalGraph& g, const Partition& p);

// One block id per line, in node order.
void write_partition(std::ostream& out, const Partition& p);
Partition read_partition(std::istream& in, std::size_t node_count);

// P A P^T: node i moves to row position[i].
SparseSymmetricMatrix apply_permutation(const SparseSymmetricMatrix& a, const Partition& p);
std::vector<double> permute_vector(std::span<const double> v, const Partition& p);
std::vector<double> unpermute_vector(std::span<const double> v, const Partition& p);

}  // namespace irlscut
