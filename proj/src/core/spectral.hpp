#pragma once

#include <cstddef>

#include "block_jacobi.hpp"
#include "graph.hpp"

namespace irlscut {

struct SpectralOptions {
  double pcg_tolerance = 1e-12;
  std::size_t pcg_max_iterations = 10000;
  std::size_t blocks = 1;
  BlockStrategy block_strategy = BlockStrategy::ExactLu;
  int workers = 1;
};

struct Lambda2Result {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double volume = 0.0;     // C = 2 * total edge weight = d(s) = d(t)
  double energy = 0.0;     // g^T L g at the minimizer with g_s = 1, g_t = -1
  std::size_t pcg_iterations = 0;
  double pcg_residual = 0.0;
};

// Second finite generalized eigenvalue of the pencil (L, D), D = diag(d) with
// d(s) = d(t) = C and zero elsewhere, computed as the optimal value of
// min (1/2C) x^T L x subject to x_s = 1, x_t = -1 (one reduced Laplacian solve).
Lambda2Result lambda2(const WeightedGraph& g, const SpectralOptions& options = {});

struct CheegerReport {
  double lambda2 = 0.0;
  double phi = 0.0;        // min-cut / C
  double lower = 0.0;      // phi^2 / 2
  double upper = 0.0;      // 2 phi
  double min_cut = 0.0;
  bool holds = false;      // lower <= lambda2 <= upper with 1e-6 relative slack
};

CheegerReport cheeger_check(const WeightedGraph& g, const SpectralOptions& options = {});

}  // namespace irlscut
