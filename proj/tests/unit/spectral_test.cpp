#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "maxflow.hpp"
#include "spectral.hpp"
#include "test_support.hpp"

using namespace irlscut;

namespace {

// Finite eigenvalues of L x = lambda D x with D = diag(C at s, C at t), by
// eliminating the non-terminal block densely (Schur complement onto {s, t})
// and solving the 2x2 symmetric-definite problem.
std::pair<double, double> dense_pencil_eigenvalues(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    lap(e.u, e.u) += e.capacity;
    lap(e.v, e.v) += e.capacity;
    lap(e.u, e.v) -= e.capacity;
    lap(e.v, e.u) -= e.capacity;
  }
  std::vector<Eigen::Index> inner;
  for (Eigen::Index u = 0; u < n; ++u) {
    if (u != g.source() && u != g.sink()) inner.push_back(u);
  }
  const std::vector<Eigen::Index> boundary{g.source(), g.sink()};
  const auto m = static_cast<Eigen::Index>(inner.size());
  Eigen::MatrixXd a_bb(2, 2), a_bi(2, m), a_ii(m, m);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) a_bb(i, j) = lap(boundary[i], boundary[j]);
    for (Eigen::Index j = 0; j < m; ++j) a_bi(i, j) = lap(boundary[i], inner[j]);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) a_ii(i, j) = lap(inner[i], inner[j]);
  }
  Eigen::MatrixXd schur = a_bb;
  if (m > 0) schur -= a_bi * a_ii.ldlt().solve(a_bi.transpose());
  const double c = 2.0 * g.total_capacity();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(schur, c * Eigen::MatrixXd::Identity(2, 2));
  return {solver.eigenvalues()(0), solver.eigenvalues()(1)};
}

}  // namespace

TEST(Lambda2, SingleEdge) {
  const std::vector<RawEdge> e{{0, 1, 2.5}};
  const auto g = WeightedGraph::ingest(e, 0, 1);
  const auto r = lambda2(g);
  EXPECT_DOUBLE_EQ(r.volume, 5.0);
  EXPECT_NEAR(r.lambda2, 1.0, 1e-15);
  EXPECT_EQ(r.lambda1, 0.0);
  const auto c = cheeger_check(g);
  EXPECT_DOUBLE_EQ(c.phi, 0.5);
  EXPECT_DOUBLE_EQ(c.lower, 0.125);
  EXPECT_DOUBLE_EQ(c.upper, 1.0);
  EXPECT_TRUE(c.holds);
}

TEST(Lambda2, UnitPath) {
  const std::vector<RawEdge> e{{0, 2, 1.0}, {2, 1, 1.0}};
  const auto g = WeightedGraph::ingest(e, 0, 1);
  const auto r = lambda2(g);
  EXPECT_DOUBLE_EQ(r.volume, 4.0);
  EXPECT_NEAR(r.energy, 2.0, 1e-12);
  EXPECT_NEAR(r.lambda2, 0.25, 1e-12);
  const auto c = cheeger_check(g);
  EXPECT_DOUBLE_EQ(c.phi, 0.25);
  EXPECT_DOUBLE_EQ(c.lower, 0.03125);
  EXPECT_DOUBLE_EQ(c.upper, 0.5);
  EXPECT_TRUE(c.holds);
}

TEST(Lambda2, MatchesDensePencilAndSandwichHolds) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> size(2, 12);
  std::uniform_real_distribution<double> density(0.0, 0.7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = irlscut::testing::random_connected(size(rng), density(rng), rng);
    const auto [mu1, mu2] = dense_pencil_eigenvalues(g);
    EXPECT_NEAR(mu1, 0.0, 1e-10);
    const auto c = cheeger_check(g);
    EXPECT_NEAR(c.lambda2, mu2, 1e-8 * std::max(1.0, mu2)) << "trial " << trial;
    EXPECT_GE(c.lambda2, 0.0);
    EXPECT_NEAR(c.min_cut, brute_force_min_cut(g).value, 1e-9 * c.min_cut);
    EXPECT_TRUE(c.holds) << c.lower << " <= " << c.lambda2 << " <= " << c.upper;
  }
}

TEST(Lambda2, EveryStCutHasVolumeC) {
  std::mt19937_64 rng(78);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = irlscut::testing::random_connected(10, 0.3, rng);
    // d(s) = d(t) = C and zero elsewhere, so each side of an s-t cut has volume C.
    const double c = lambda2(g).volume;
    EXPECT_DOUBLE_EQ(c, 2.0 * g.total_capacity());
    Labeling side(g.node_count());
    for (auto& b : side) b = coin(rng);
    side[g.source()] = 1;
    side[g.sink()] = 0;
    double vol_s = 0, vol_rest = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
      const double d = (u == g.source() || u == g.sink()) ? c : 0.0;
      (side[u] ? vol_s : vol_rest) += d;
    }
    EXPECT_EQ(std::min(vol_s, vol_rest), c);
  }
}

TEST(Lambda2, BlockPreconditionedSolveAgrees) {
  std::mt19937_64 rng(79);
  const auto g = irlscut::testing::random_connected(200, 0.02, rng);
  SpectralOptions one;
  SpectralOptions many;
  many.blocks = 4;
  many.workers = 2;
  many.block_strategy = BlockStrategy::Ilu0;
  EXPECT_NEAR(lambda2(g, one).lambda2, lambda2(g, many).lambda2, 1e-9);
}
