#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "error.hpp"
#include "graph.hpp"
#include "graph_io.hpp"
#include "test_support.hpp"

using namespace irlscut;
using irlscut::testing::four_cycle;
using irlscut::testing::path_sat;
using irlscut::testing::triangle;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantViolation;
}

Labeling labels(std::initializer_list<int> v) { return Labeling(v.begin(), v.end()); }

}  // namespace

TEST(Ingest, PathHasThreeNodesTwoEdges) {
  const auto g = path_sat();
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.original_id(g.source()), 0);
  EXPECT_EQ(g.original_id(g.sink()), 1);
  EXPECT_DOUBLE_EQ(g.total_capacity(), 3.0);
  EXPECT_DOUBLE_EQ(g.max_capacity(), 2.0);
}

TEST(Ingest, DuplicateEdgesMerge) {
  const std::vector<RawEdge> e{{0, 2, 1.0}, {2, 0, 1.0}, {2, 1, 1.0}};
  const auto g = WeightedGraph::ingest(e, 0, 1);
  ASSERT_EQ(g.edge_count(), 2u);
  const auto a = *g.dense_id(2);
  for (const auto& edge : g.edges()) {
    if ((edge.u == g.source() && edge.v == a) || (edge.v == g.source() && edge.u == a)) {
      EXPECT_DOUBLE_EQ(edge.capacity, 2.0);
    }
  }
}

TEST(Ingest, SelfLoopsDropped) {
  const std::vector<RawEdge> e{{0, 2, 1.0}, {2, 2, 5.0}, {2, 1, 1.0}};
  EXPECT_EQ(WeightedGraph::ingest(e, 0, 1).edge_count(), 2u);
}

TEST(Ingest, DenseIdsFollowOriginalOrder) {
  const std::vector<RawEdge> e{{100, 7, 1.0}, {7, 42, 1.0}};
  const auto g = WeightedGraph::ingest(e, 100, 42);
  EXPECT_EQ(g.original_id(0), 7);
  EXPECT_EQ(g.original_id(1), 42);
  EXPECT_EQ(g.original_id(2), 100);
  EXPECT_EQ(g.source(), 2u);
  EXPECT_EQ(g.sink(), 1u);
  EXPECT_FALSE(g.dense_id(5).has_value());
}

TEST(Ingest, Errors) {
  const std::vector<RawEdge> none;
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(none, 0, 1); }), ErrorCode::EmptyGraph);
  const std::vector<RawEdge> loop{{0, 0, 1.0}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(loop, 0, 1); }), ErrorCode::EmptyGraph);
  const std::vector<RawEdge> ok{{0, 1, 1.0}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(ok, 3, 3); }), ErrorCode::SourceEqualsSink);
  const std::vector<RawEdge> zero{{0, 1, 0.0}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(zero, 0, 1); }), ErrorCode::NonPositiveCapacity);
  const std::vector<RawEdge> neg{{0, 1, -1.0}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(neg, 0, 1); }), ErrorCode::NonPositiveCapacity);
  const std::vector<RawEdge> nan{{0, 1, std::nan("")}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(nan, 0, 1); }), ErrorCode::NonPositiveCapacity);
  const std::vector<RawEdge> inf{{0, 1, std::numeric_limits<double>::infinity()}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(inf, 0, 1); }), ErrorCode::NonPositiveCapacity);
  const std::vector<RawEdge> split{{0, 2, 1.0}, {1, 3, 1.0}};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(split, 0, 1); }), ErrorCode::DisconnectedGraph);
  const std::vector<OriginalId> extra{9};
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(ok, 0, 1, extra); }), ErrorCode::DisconnectedGraph);
  EXPECT_EQ(code_of([&] { WeightedGraph::ingest(ok, 0, 5); }), ErrorCode::DisconnectedGraph);
}

TEST(SplitTerminals, Path) {
  const auto g = path_sat();
  const auto sp = split_terminals(g);
  EXPECT_EQ(sp.nonterminal.node_count, 1u);
  EXPECT_TRUE(sp.nonterminal.edges.empty());
  ASSERT_EQ(sp.terminal_edges.size(), 2u);
  double to_s = 0, to_t = 0;
  for (const auto& te : sp.terminal_edges) {
    EXPECT_EQ(te.node, *g.dense_id(2));
    (te.terminal == Terminal::Source ? to_s : to_t) += te.capacity;
  }
  EXPECT_DOUBLE_EQ(to_s, 2.0);
  EXPECT_DOUBLE_EQ(to_t, 1.0);
  EXPECT_FALSE(sp.direct_st_edge.has_value());
  EXPECT_EQ(sp.direct_st_capacity, 0.0);
}

TEST(SplitTerminals, TriangleFlagsDirectEdge) {
  const auto sp = split_terminals(triangle());
  EXPECT_EQ(sp.nonterminal.node_count, 1u);
  EXPECT_EQ(sp.terminal_edges.size(), 2u);
  for (const auto& te : sp.terminal_edges) EXPECT_DOUBLE_EQ(te.capacity, 1.0);
  EXPECT_TRUE(sp.direct_st_edge.has_value());
  EXPECT_DOUBLE_EQ(sp.direct_st_capacity, 0.5);
}

TEST(SplitTerminals, FourCycle) {
  const auto sp = split_terminals(four_cycle());
  EXPECT_EQ(sp.nonterminal.node_count, 2u);
  EXPECT_TRUE(sp.nonterminal.edges.empty());
  EXPECT_EQ(sp.terminal_edges.size(), 4u);
}

TEST(SplitTerminals, EdgeClassesPartitionTheEdgeSet) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = irlscut::testing::random_connected(3 + trial % 20, 0.2, rng);
    const auto sp = split_terminals(g);
    const std::size_t direct = sp.direct_st_edge ? 1 : 0;
    EXPECT_EQ(sp.nonterminal.edges.size() + sp.terminal_edges.size() + direct, g.edge_count());
    EXPECT_EQ(sp.nonterminal.node_count + 2, g.node_count());
    for (std::size_t i = 0; i < sp.nonterminal.edges.size(); ++i) {
      const auto& le = sp.nonterminal.edges[i];
      const auto& ge = g.edge(sp.nonterminal.source_edge[i]);
      EXPECT_EQ(le.capacity, ge.capacity);
      EXPECT_EQ(std::minmax(sp.graph_node[le.u], sp.graph_node[le.v]), std::minmax(ge.u, ge.v));
    }
  }
}

TEST(CutValue, Examples) {
  const auto p = path_sat();
  const auto a = *p.dense_id(2);
  Labeling side(3, 0);
  side[p.source()] = 1;
  side[a] = 1;
  EXPECT_DOUBLE_EQ(cut_value(p, side), 1.0);

  const auto t = triangle();
  Labeling only_s(3, 0);
  only_s[t.source()] = 1;
  EXPECT_DOUBLE_EQ(cut_value(t, only_s), 1.5);
  only_s[*t.dense_id(2)] = 1;
  EXPECT_DOUBLE_EQ(cut_value(t, only_s), 1.5);
}

TEST(CutValue, RejectsBadLabelings) {
  const auto p = path_sat();
  EXPECT_EQ(code_of([&] { cut_value(p, labels({1, 0})); }), ErrorCode::DimensionMismatch);
  // dense order: s=0, t=1, a=2
  EXPECT_EQ(code_of([&] { cut_value(p, labels({0, 0, 1})); }), ErrorCode::InvalidLabeling);
  EXPECT_EQ(code_of([&] { cut_value(p, labels({1, 1, 1})); }), ErrorCode::InvalidLabeling);
  EXPECT_EQ(code_of([&] { cut_value(p, labels({1, 0, 2})); }), ErrorCode::InvalidLabeling);
}

TEST(CutValue, MatchesEdgeScanAndScales) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = irlscut::testing::random_connected(4 + trial % 30, 0.15, rng);
    Labeling side(g.node_count());
    for (auto& b : side) b = coin(rng);
    side[g.source()] = 1;
    side[g.sink()] = 0;
    const double v = cut_value(g, side);
    EXPECT_NEAR(v, irlscut::testing::scan_cut(g, side), 1e-12 * (1 + v));
    const auto scaled = g.scaled(3.5);
    EXPECT_NEAR(cut_value(scaled, side), 3.5 * v, 1e-12 * (1 + v));
  }
}

TEST(Ingest, ExportRoundTripIsIdempotent) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = irlscut::testing::random_connected(5 + trial, 0.2, rng);
    const auto e1 = g.export_edges();
    const auto g2 = WeightedGraph::ingest(e1, g.original_id(g.source()), g.original_id(g.sink()));
    const auto e2 = g2.export_edges();
    ASSERT_EQ(e1.size(), e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
      EXPECT_EQ(e1[i].u, e2[i].u);
      EXPECT_EQ(e1[i].v, e2[i].v);
      EXPECT_EQ(e1[i].capacity, e2[i].capacity);
    }
  }
}

TEST(Incidence, ApplyAndTranspose) {
  const auto g = path_sat();
  const IncidenceOperator b(g);
  EXPECT_EQ(b.rows(), 2u);
  EXPECT_EQ(b.cols(), 3u);
  const std::vector<double> x{1.0, 0.0, 0.25};
  std::vector<double> bx(2);
  b.apply(x, bx);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& e = g.edge(static_cast<EdgeId>(i));
    EXPECT_DOUBLE_EQ(bx[i], x[e.u] - x[e.v]);
  }
  std::vector<double> z{1.0, 1.0}, out(3);
  b.apply_transpose(z, out);
  double sum = out[0] + out[1] + out[2];
  EXPECT_DOUBLE_EQ(sum, 0.0);
  std::vector<double> wrong(2);
  EXPECT_EQ(code_of([&] { b.apply(wrong, bx); }), ErrorCode::DimensionMismatch);
}

TEST(GraphIo, DimacsReadsUndirectedArcs) {
  std::istringstream in(
      "c tiny\n"
      "p max 3 3\n"
      "n 1 s\n"
      "n 3 t\n"
      "a 1 2 2.0\n"
      "a 2 3 0.5\n"
      "a 3 2 0.5\n");
  const auto g = read_dimacs(in);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_DOUBLE_EQ(g.total_capacity(), 3.0);
  EXPECT_EQ(g.original_id(g.source()), 1);
  EXPECT_EQ(g.original_id(g.sink()), 3);
}

TEST(GraphIo, DimacsErrors) {
  auto parse = [](const std::string& text) {
    return code_of([&] {
      std::istringstream in(text);
      read_dimacs(in);
    });
  };
  EXPECT_EQ(parse("n 1 s\nn 2 t\na 1 2 1\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse("p max 2 1\nn 1 s\na 1 2 1\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse("p max 2 1\nn 1 s\nn 2 t\na 1 3 1\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse("p max 2 1\nn 1 s\nn 2 t\na 1 2 x\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse("p max 2 1\nn 1 s\nn 2 t\nq\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse("p max 2 1\nn 1 s\nn 2 t\na 1 2 -1\n"), ErrorCode::NonPositiveCapacity);
  EXPECT_EQ(parse("p max 3 1\nn 1 s\nn 2 t\na 1 2 1\n"), ErrorCode::DisconnectedGraph);
}

TEST(GraphIo, TriplesAndSniffing) {
  std::istringstream in("# comment\nsource 10 sink 20\n10 11 1.5\n% comment\n11 20 2.5\n");
  const auto g = read_graph(in);
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.original_id(g.source()), 10);
  EXPECT_DOUBLE_EQ(g.total_capacity(), 4.0);
  std::istringstream bad("10 11 1.5\n");
  EXPECT_EQ(code_of([&] { read_triples(bad); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { read_graph_file("/nonexistent/graph.max"); }), ErrorCode::IoError);
}

TEST(GraphIo, RoundTripBothFormats) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = irlscut::testing::random_connected(6 + trial, 0.3, rng);
    for (int fmt = 0; fmt < 2; ++fmt) {
      std::stringstream buf;
      if (fmt == 0) write_dimacs(buf, g);
      else write_triples(buf, g);
      const auto h = read_graph(buf);
      ASSERT_EQ(h.node_count(), g.node_count());
      ASSERT_EQ(h.edge_count(), g.edge_count());
      EXPECT_EQ(h.source(), g.source());
      EXPECT_EQ(h.sink(), g.sink());
      for (EdgeId e = 0; e < g.edge_count(); ++e) {
        EXPECT_EQ(h.edge(e).u, g.edge(e).u);
        EXPECT_EQ(h.edge(e).v, g.edge(e).v);
        EXPECT_EQ(h.edge(e).capacity, g.edge(e).capacity);
      }
    }
  }
}
