#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "block_jacobi.hpp"
#include "parallel.hpp"
#include "sparse_matrix.hpp"

namespace irlscut {

struct PcgOptions {
  double tolerance = 1e-3;          // relative residual ||b - Ax|| / ||b||
  std::size_t max_iterations = 50;
  std::size_t min_iterations = 0;   // steps taken even if the start already meets the tolerance
};

struct PcgReport {
  std::size_t iterations = 0;
  double relative_residual = 0.0;   // true residual of the returned iterate
  bool converged = false;
  std::vector<double> residual_history;  // recurrence residuals, entry 0 = initial
};

// Fixed row chunking plus a worker pool. Chunk boundaries, not the worker
// count, determine every reduction order.
class ExecutionLayout {
 public:
  ExecutionLayout(std::size_t dimension, std::span<const IndexRange> blocks, int workers,
                  std::size_t max_chunk = 4096);
  explicit ExecutionLayout(std::size_t dimension, int workers = 1);

  const WorkerPool& pool() const { return pool_; }
  std::span<const IndexRange> chunks() const { return chunks_; }
  std::size_t dimension() const { return dimension_; }

  double dot(std::span<const double> a, std::span<const double> b) const;

 private:
  std::size_t dimension_;
  WorkerPool pool_;
  std::vector<IndexRange> chunks_;
  mutable std::vector<double> partials_;
};

// Preconditioned conjugate gradients. `x` holds the initial guess on entry and
// the solution on exit. `preconditioner` may be null (identity).
PcgReport pcg_solve(const SparseSymmetricMatrix& a, std::span<const double> b,
                    const BlockJacobiPreconditioner* preconditioner, std::span<double> x,
                    const PcgOptions& options, const ExecutionLayout& layout);

PcgReport pcg_solve(const SparseSymmetricMatrix& a, std::span<const double> b,
                    const BlockJacobiPreconditioner* preconditioner, std::span<double> x,
                    const PcgOptions& options);

}  // namespace irlscut
