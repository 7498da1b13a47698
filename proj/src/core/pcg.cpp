#include "pcg.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace irlscut {

ExecutionLayout::ExecutionLayout(std::size_t dimension, std::span<const IndexRange> blocks, int workers,
                                 std::size_t max_chunk)
    : dimension_(dimension), pool_(workers), chunks_(split_ranges(blocks, max_chunk)) {
  partials_.resize(chunks_.size());
}

ExecutionLayout::ExecutionLayout(std::size_t dimension, int workers) : dimension_(dimension), pool_(workers) {
  const IndexRange all{0, dimension};
  chunks_ = split_ranges(std::span(&all, 1), 4096);
  partials_.resize(chunks_.size());
}

double ExecutionLayout::dot(std::span<const double> a, std::span<const double> b) const {
  pool_.run(chunks_.size(), [&](std::size_t c) {
    double s = 0.0;
    for (std::size_t i = chunks_[c].begin; i < chunks_[c].end; ++i) s += a[i] * b[i];
    partials_[c] = s;
  });
  return pairwise_sum(partials_);
}

PcgReport pcg_solve(const SparseSymmetricMatrix& a, std::span<const double> b,
                    const BlockJacobiPreconditioner* preconditioner, std::span<double> x,
                    const PcgOptions& options) {
  return pcg_solve(a, b, preconditioner, x, options, ExecutionLayout(a.dimension()));
}

PcgReport pcg_solve(const SparseSymmetricMatrix& a, std::span<const double> b,
                    const BlockJacobiPreconditioner* preconditioner, std::span<double> x,
                    const PcgOptions& options, const ExecutionLayout& layout) {
  const auto n = a.dimension();
  if (b.size() != n || x.size() != n || layout.dimension() != n) {
    fail(ErrorCode::DimensionMismatch, "pcg_solve: system dimension " + std::to_string(n));
  }
  if (preconditioner && preconditioner->dimension() != n) {
    fail(ErrorCode::PreconditionerDimensionMismatch, "preconditioner dimension " +
                                                         std::to_string(preconditioner->dimension()) +
                                                         " vs system " + std::to_string(n));
  }
  if (!(options.tolerance > 0.0)) fail(ErrorCode::InvalidParams, "pcg tolerance must be positive");

  const auto& pool = layout.pool();
  const auto chunks = layout.chunks();
  auto for_chunks = [&](auto&& fn) {
    pool.run(chunks.size(), [&](std::size_t c) {
      for (std::size_t i = chunks[c].begin; i < chunks[c].end; ++i) fn(i);
    });
  };
  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    if (preconditioner) {
      preconditioner->apply(r, z, pool);
    } else {
      for_chunks([&](std::size_t i) { z[i] = r[i]; });
    }
  };

  PcgReport report;
  const double b_norm = std::sqrt(layout.dot(b, b));
  if (b_norm == 0.0) {
    for_chunks([&](std::size_t i) { x[i] = 0.0; });
    report.converged = true;
    report.residual_history.push_back(0.0);
    return report;
  }

  std::vector<double> r(n), z(n), p(n), q(n), best_x(x.begin(), x.end());
  auto true_residual = [&] {
    a.multiply(x, q, pool, chunks);
    for_chunks([&](std::size_t i) { r[i] = b[i] - q[i]; });
    return std::sqrt(layout.dot(r, r)) / b_norm;
  };

  double res = true_residual();
  report.residual_history.push_back(res);
  double best_res = res;
  if (res <= options.tolerance && (options.min_iterations == 0 || res == 0.0)) {
    report.relative_residual = res;
    report.converged = true;
    return report;
  }
  precondition(r, z);
  for_chunks([&](std::size_t i) { p[i] = z[i]; });
  double rz = layout.dot(r, z);

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    a.multiply(p, q, pool, chunks);
    const double pq = layout.dot(p, q);
    if (!(pq > 0.0)) {
      fail(ErrorCode::BreakdownNonSpd, "p^T A p = " + std::to_string(pq) + " at iteration " + std::to_string(it));
    }
    const double alpha = rz / pq;
    for_chunks([&](std::size_t i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    });
    res = std::sqrt(layout.dot(r, r)) / b_norm;
    report.iterations = it;
    report.residual_history.push_back(res);
    if (res <= options.tolerance && it >= options.min_iterations) {
      // Confirm against the true residual; restart from it if the recurrence drifted.
      res = true_residual();
      if (res <= options.tolerance) {
        report.relative_residual = res;
        report.converged = true;
        return report;
      }
      precondition(r, z);
      for_chunks([&](std::size_t i) { p[i] = z[i]; });
      rz = layout.dot(r, z);
      continue;
    }
    if (res < best_res) {
      best_res = res;
      for_chunks([&](std::size_t i) { best_x[i] = x[i]; });
    }
    precondition(r, z);
    const double rz_next = layout.dot(r, z);
    if (!(rz_next > 0.0)) {
      fail(ErrorCode::BreakdownNonSpd, "preconditioned residual r^T z = " + std::to_string(rz_next));
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for_chunks([&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
  }

  if (best_res < res) {
    for_chunks([&](std::size_t i) { x[i] = best_x[i]; });
  }
  report.relative_residual = true_residual();
  report.converged = report.relative_residual <= options.tolerance;
  return report;
}

}  // namespace irlscut
