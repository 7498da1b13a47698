#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dense.hpp"
#include "error.hpp"
#include "generate.hpp"
#include "irls.hpp"
#include "partition.hpp"
#include "test_support.hpp"

using namespace irlscut;

namespace {

NonterminalGraph nonterminal_of(const std::vector<Edge>& edges, std::size_t n) {
  NonterminalGraph g;
  g.node_count = n;
  g.edges = edges;
  for (std::size_t i = 0; i < edges.size(); ++i) g.source_edge.push_back(static_cast<EdgeId>(i));
  g.adjacency = build_adjacency(n, g.edges);
  return g;
}

void expect_valid(const Partition& p, std::size_t n, std::size_t blocks) {
  ASSERT_EQ(p.node_count(), n);
  EXPECT_EQ(p.block_count, blocks);
  ASSERT_EQ(p.block_ranges.size(), blocks);
  std::size_t pos = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    EXPECT_EQ(p.block_ranges[b].begin, pos);
    pos = p.block_ranges[b].end;
    for (std::size_t i = p.block_ranges[b].begin; i < p.block_ranges[b].end; ++i) {
      EXPECT_EQ(p.assignment[p.order[i]], b);
    }
  }
  EXPECT_EQ(pos, n);
  for (std::size_t u = 0; u < n; ++u) EXPECT_EQ(p.order[p.position[u]], u);
}

SparseSymmetricMatrix reduced_matrix(const WeightedGraph& g, const TerminalSplit& split) {
  const auto identity = Partition::single_block(split.nonterminal.node_count);
  ReducedSystem sys(g, split, identity);
  std::vector<double> c(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) c[e] = g.edge(e).capacity;
  sys.assemble(c);
  return sys.matrix();
}

}  // namespace

TEST(Partition, SingleBlockIsIdentity) {
  std::mt19937_64 rng(1);
  const auto g = irlscut::testing::random_connected(30, 0.1, rng);
  const auto split = split_terminals(g);
  const auto p = partition_graph(split.nonterminal, PartitionOptions{1, 0.05, 1});
  expect_valid(p, 28, 1);
  for (std::size_t i = 0; i < 28; ++i) EXPECT_EQ(p.order[i], i);
}

TEST(Partition, FourNodePathSplitsInTheMiddle) {
  const auto g = nonterminal_of({{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, 4);
  const auto p = partition_graph(g, PartitionOptions{2, 0.05, 1});
  expect_valid(p, 4, 2);
  EXPECT_EQ(p.assignment[0], p.assignment[1]);
  EXPECT_EQ(p.assignment[2], p.assignment[3]);
  EXPECT_NE(p.assignment[0], p.assignment[2]);
  EXPECT_DOUBLE_EQ(partition_stats(g, p).edge_cut, 1.0);
}

TEST(Partition, StarGraphIsBalanced) {
  std::vector<Edge> e;
  for (NodeId leaf = 1; leaf <= 6; ++leaf) e.push_back({0, leaf, 1.0});
  const auto g = nonterminal_of(e, 7);
  const auto p = partition_graph(g, PartitionOptions{2, 0.05, 1});
  expect_valid(p, 7, 2);
  EXPECT_LE(partition_stats(g, p).max_block_nodes, balance_cap(7, 2, 0.05));
}

TEST(Partition, BalanceHoldsOnGeneratedInstances) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto params = default_params(InstanceKind::Grid2d);
    params.rows = 23;
    params.cols = 17;
    const auto g = generate_instance(InstanceKind::Grid2d, params, seed);
    const auto split = split_terminals(g);
    const std::size_t n = split.nonterminal.node_count;
    for (std::size_t blocks : {2u, 3u, 4u, 7u, 8u, 16u}) {
      const auto p = partition_graph(split.nonterminal, PartitionOptions{blocks, 0.05, seed});
      expect_valid(p, n, blocks);
      const auto stats = partition_stats(split.nonterminal, p);
      EXPECT_LE(stats.max_block_nodes, balance_cap(n, blocks, 0.05)) << "p=" << blocks;
      EXPECT_GE(stats.min_block_nodes, 1u);
    }
  }
}

TEST(Partition, GridCutIsReasonable) {
  // A 32x32 grid bisected: a straight cut crosses 32 edges.
  std::vector<Edge> e;
  const NodeId side = 32;
  for (NodeId r = 0; r < side; ++r) {
    for (NodeId c = 0; c < side; ++c) {
      if (c + 1 < side) e.push_back({r * side + c, r * side + c + 1, 1.0});
      if (r + 1 < side) e.push_back({r * side + c, (r + 1) * side + c, 1.0});
    }
  }
  const auto g = nonterminal_of(e, side * side);
  const auto p = partition_graph(g, PartitionOptions{2, 0.05, 1});
  EXPECT_LE(partition_stats(g, p).edge_cut, 3.0 * side);
}

TEST(Partition, DeterministicForSeed) {
  std::mt19937_64 rng(6);
  const auto g = irlscut::testing::random_connected(300, 0.01, rng);
  const auto split = split_terminals(g);
  const auto a = partition_graph(split.nonterminal, PartitionOptions{4, 0.05, 9});
  const auto b = partition_graph(split.nonterminal, PartitionOptions{4, 0.05, 9});
  EXPECT_EQ(a.assignment, b.assignment);
}

TEST(Partition, Errors) {
  const auto g = nonterminal_of({{0, 1, 1.0}}, 2);
  EXPECT_THROW(partition_graph(g, PartitionOptions{3, 0.05, 1}), Error);
  try {
    partition_graph(g, PartitionOptions{3, 0.05, 1});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BlockCountExceedsNodes);
  }
  EXPECT_THROW(Partition::from_assignment({0, 2}, 2), Error);
}

TEST(Partition, FileRoundTrip) {
  const auto p = Partition::from_assignment({1, 0, 2, 1, 0, 2, 2}, 3);
  std::stringstream buf;
  write_partition(buf, p);
  const auto q = read_partition(buf, 7);
  EXPECT_EQ(q.assignment, p.assignment);
  EXPECT_EQ(q.order, p.order);
  EXPECT_EQ(q.block_count, 3u);
  std::istringstream short_file("0\n1\n");
  EXPECT_THROW(read_partition(short_file, 7), Error);
}

TEST(Permutation, IdentityLeavesSystemUnchanged) {
  const auto g = irlscut::testing::four_cycle();
  const auto split = split_terminals(g);
  const auto a = reduced_matrix(g, split);
  const auto same = apply_permutation(a, Partition::single_block(a.dimension()));
  EXPECT_EQ(same.to_dense(), a.to_dense());
}

TEST(Permutation, SolveCommutesWithPermutation) {
  std::mt19937_64 rng(10);
  const auto g = irlscut::testing::random_connected(12, 0.3, rng);
  const auto split = split_terminals(g);
  ASSERT_EQ(split.nonterminal.node_count, 10u);
  const auto a = reduced_matrix(g, split);
  std::vector<double> b(10);
  std::uniform_real_distribution<double> unit(-1, 1);
  for (auto& v : b) v = unit(rng);
  const auto x = dense_solve(a.to_dense(), b);
  const auto p = partition_graph(split.nonterminal, PartitionOptions{3, 0.05, 1});
  const auto pa = apply_permutation(a, p);
  const auto px = dense_solve(pa.to_dense(), permute_vector(b, p));
  const auto back = unpermute_vector(px, p);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
  EXPECT_EQ(pa.max_asymmetry(), 0.0);
}

TEST(Permutation, InverseRoundTripAndRayleighQuotients) {
  std::mt19937_64 rng(13);
  const auto g = irlscut::testing::random_connected(40, 0.1, rng);
  const auto split = split_terminals(g);
  const auto a = reduced_matrix(g, split);
  const auto p = partition_graph(split.nonterminal, PartitionOptions{4, 0.05, 2});
  const auto pa = apply_permutation(a, p);
  std::uniform_real_distribution<double> unit(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> v(a.dimension());
    for (auto& x : v) x = unit(rng);
    EXPECT_EQ(unpermute_vector(permute_vector(v, p), p), v);
    std::vector<double> av(v.size()), pav(v.size());
    a.multiply(v, av);
    const auto pv = permute_vector(v, p);
    pa.multiply(pv, pav);
    double q1 = 0, q2 = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      q1 += v[i] * av[i];
      q2 += pv[i] * pav[i];
    }
    EXPECT_NEAR(q1, q2, 1e-12 * std::abs(q1));
    EXPECT_GT(q1, 0.0);
  }
}
