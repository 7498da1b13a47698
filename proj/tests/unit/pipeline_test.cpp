#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "error.hpp"
#include "generate.hpp"
#include "graph_io.hpp"
#include "json.hpp"
#include "maxflow.hpp"
#include "pipeline.hpp"
#include "test_support.hpp"

using namespace irlscut;

namespace {

WeightedGraph fixture(const std::string& name) {
  return read_graph_file(std::string(IRLSCUT_FIXTURE_DIR) + "/" + name);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Config, DefaultsAndSetters) {
  SolverConfig c;
  EXPECT_EQ(c.irls.epsilon, 1e-6);
  EXPECT_EQ(c.irls.iterations, 50u);
  EXPECT_EQ(c.irls.pcg_max_iterations, 50u);
  EXPECT_TRUE(c.irls.warm_start);
  c.set("epsilon", "1e-4");
  c.set("T", "7");
  c.set("block_strategy", "ilu0");
  c.set("warm_start", "off");
  c.set("rounding", "sweep");
  c.set("p", "3");
  c.set("workers", "2");
  EXPECT_EQ(c.irls.epsilon, 1e-4);
  EXPECT_EQ(c.irls.iterations, 7u);
  EXPECT_EQ(c.irls.block_strategy, BlockStrategy::Ilu0);
  EXPECT_FALSE(c.irls.warm_start);
  EXPECT_EQ(c.rounding, RoundingChoice::Sweep);
  EXPECT_EQ(c.blocks, 3u);
  EXPECT_THROW(c.set("nope", "1"), Error);
  EXPECT_THROW(c.set("epsilon", "abc"), Error);
  EXPECT_THROW(c.set("warm_start", "maybe"), Error);
  EXPECT_NE(c.describe().find("blocks = 3"), std::string::npos);
}

TEST(Config, FileFormatAndValidation) {
  SolverConfig c;
  std::istringstream in("# comment\n epsilon = 1e-5  # trailing\n\npcg_tol=1e-6\n");
  c.load(in);
  EXPECT_EQ(c.irls.epsilon, 1e-5);
  EXPECT_EQ(c.irls.pcg_tolerance, 1e-6);
  std::istringstream bad("epsilon\n");
  EXPECT_THROW(c.load(bad), Error);
  std::istringstream zero("pcg_tol = 0\n");
  EXPECT_THROW(c.load(zero), Error);
  std::istringstream blocks("blocks = 0\n");
  EXPECT_THROW(SolverConfig().load(blocks), Error);
}

TEST(Generate, Grid2dFourByFour) {
  const auto params = [] {
    auto p = default_params(InstanceKind::Grid2d);
    p.rows = 4;
    p.cols = 4;
    return p;
  }();
  const auto g = generate_instance(InstanceKind::Grid2d, params, 7);
  EXPECT_EQ(g.node_count(), 18u);
  EXPECT_EQ(g.original_id(g.source()), 0);
  EXPECT_EQ(g.original_id(g.sink()), 1);
  for (const auto& e : g.edges()) {
    EXPECT_GT(e.capacity, params.base_weight);
    EXPECT_LE(e.capacity, params.base_weight + 1.0);
  }
  const auto again = generate_instance(InstanceKind::Grid2d, params, 7);
  EXPECT_EQ(again.export_edges().size(), g.export_edges().size());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    EXPECT_EQ(again.edge(static_cast<EdgeId>(i)).capacity, g.edge(static_cast<EdgeId>(i)).capacity);
  }
}

TEST(Generate, PathOfThreeIsTheCanonicalFixture) {
  auto p = default_params(InstanceKind::Path);
  EXPECT_EQ(p.nodes, 3u);
  const auto g = generate_instance(InstanceKind::Path, p, 1);
  const auto f = irlscut::testing::path_sat();
  ASSERT_EQ(g.edge_count(), f.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    EXPECT_EQ(g.edge(e).u, f.edge(e).u);
    EXPECT_EQ(g.edge(e).v, f.edge(e).v);
    EXPECT_EQ(g.edge(e).capacity, f.edge(e).capacity);
  }
}

TEST(Generate, RandomGeometricIsConnected) {
  auto p = default_params(InstanceKind::RandomGeometric);
  p.nodes = 200;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = generate_instance(InstanceKind::RandomGeometric, p, seed);
    EXPECT_EQ(g.node_count(), 202u);
  }
  p.max_retries = 0;
  p.radius = 1e-4;
  EXPECT_THROW(generate_instance(InstanceKind::RandomGeometric, p, 1), Error);
}

TEST(Generate, Grid3dNeighbourhoodAndTerminalModes) {
  auto p = default_params(InstanceKind::Grid3d26);
  p.rows = p.cols = p.depth = 3;
  p.terminals = TerminalMode::Corners;
  const auto g = generate_instance(InstanceKind::Grid3d26, p, 1);
  // 3x3x3 with 26-connectivity has 158 edges, plus one per terminal.
  EXPECT_EQ(g.edge_count(), 158u + 2u);
  p.terminals = TerminalMode::Sides;
  EXPECT_EQ(generate_instance(InstanceKind::Grid3d26, p, 1).edge_count(), 158u + 18u);
  EXPECT_THROW(p.set("terminals", "middle"), Error);
  EXPECT_THROW(p.set("rows", "x"), Error);
  EXPECT_THROW(parse_instance_kind("torus"), Error);
}

TEST(Pipeline, PathWithBothRoundings) {
  const auto g = fixture("path.txt");
  SolverConfig c;
  c.oracle = true;
  const auto r = run_pipeline(g, c);
  ASSERT_TRUE(r.sweep && r.two_level);
  const double exact = max_flow(g).cut;
  EXPECT_GE(r.sweep->value, r.two_level->value);
  EXPECT_DOUBLE_EQ(r.two_level->value, exact);
  EXPECT_EQ(*r.delta, 0.0);
  EXPECT_EQ(r.blocks, 1u);
  EXPECT_FALSE(r.warnings.empty());  // blocks clamped from 4 to 1
}

TEST(Pipeline, ZeroIterationsSweepsTheElectricalSolution) {
  const auto g = fixture("path.txt");
  SolverConfig c;
  c.irls.iterations = 0;
  c.rounding = RoundingChoice::Sweep;
  const auto r = run_pipeline(g, c);
  EXPECT_EQ(r.irls.trace.records.size(), 1u);
  EXPECT_FALSE(r.two_level.has_value());
  EXPECT_NEAR(r.irls.voltages[*g.dense_id(2)], 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.best.value, 1.0);
}

TEST(Pipeline, DeterministicAcrossWorkerCounts) {
  const auto g = fixture("grid2d_16x16.max");
  SolverConfig c;
  c.irls.early_exit = false;
  const auto a = run_pipeline(g, c);
  c.irls.workers = 8;
  const auto b = run_pipeline(g, c);
  EXPECT_EQ(a.best.source_side, b.best.source_side);
  EXPECT_EQ(a.best.value, b.best.value);
  std::ostringstream ta, tb;
  write_trace_csv(ta, a.irls.trace, false);
  write_trace_csv(tb, b.irls.trace, false);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Pipeline, PhaseTimesAddUp) {
  auto p = default_params(InstanceKind::Grid2d);
  p.rows = p.cols = 60;
  const auto g = generate_instance(InstanceKind::Grid2d, p, 2);
  SolverConfig c;
  c.oracle = true;
  const auto r = run_pipeline(g, c);
  EXPECT_NEAR(r.times.phase_sum(), r.times.total_ms, 0.05 * r.times.total_ms);
}

TEST(Pipeline, InvalidConfigAndTerminalOnlyGraph) {
  SolverConfig c;
  c.irls.pcg_tolerance = -1;
  EXPECT_THROW(run_pipeline(fixture("path.txt"), c), Error);
  const std::vector<RawEdge> e{{0, 1, 1.0}};
  const auto single = WeightedGraph::ingest(e, 0, 1);
  const auto r = run_pipeline(single, SolverConfig{});
  EXPECT_EQ(r.blocks, 0u);
  EXPECT_DOUBLE_EQ(r.best.value, 1.0);
}

TEST(Writers, CutJsonTraceVoltages) {
  const auto g = fixture("four_cycle.txt");
  SolverConfig c;
  c.irls.iterations = 10;
  c.irls.early_exit = false;
  c.irls.record_voltages = true;
  c.oracle = true;
  const auto r = run_pipeline(g, c);

  std::ostringstream cut;
  write_cut(cut, g, r.best.source_side);
  const auto cut_lines = lines_of(cut.str());
  ASSERT_EQ(cut_lines.size(), 4u);
  EXPECT_EQ(cut_lines[0], "0 1");
  EXPECT_EQ(cut_lines[1], "1 0");
  Labeling bad(4, 1);
  std::ostringstream sink;
  EXPECT_THROW(write_cut(sink, g, bad), Error);

  std::ostringstream js;
  write_summary_json(js, r, c);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j["cut_value"].get<double>(), 2.0);
  EXPECT_TRUE(j.contains("method"));
  EXPECT_TRUE(j.contains("size_reduction"));
  EXPECT_EQ(j["delta_if_oracle_available"].get<double>(), 0.0);

  std::ostringstream tr;
  write_trace_csv(tr, r.irls.trace);
  const auto trace_lines = lines_of(tr.str());
  EXPECT_EQ(trace_lines[0], "iteration,S_eps,flow_value,pcg_iters,pcg_residual,wall_ms");
  EXPECT_EQ(trace_lines.size(), 12u);

  std::ostringstream vm;
  write_voltage_matrix_csv(vm, r.irls.trace);
  EXPECT_EQ(lines_of(vm.str()).size(), 11u);
}

TEST(Bench, WarmVersusColdAndPolarizationExport) {
  const auto dir = std::filesystem::temp_directory_path() / "irlscut_bench_test";
  std::filesystem::create_directories(dir);
  std::vector<BenchInstance> instances{{"grid", fixture("grid2d_16x16.max")}, {"path", fixture("path.txt")}};
  SolverConfig base;
  base.irls.iterations = 10;
  base.irls.early_exit = false;
  const auto runs = expand_config_grid(base, "warm_start=on,off");
  ASSERT_EQ(runs.size(), 2u);
  std::ostringstream csv;
  const auto out = bench(instances, runs, csv, dir.string());
  EXPECT_EQ(out.rows, 4u);
  EXPECT_EQ(out.failures, 0u);
  const auto rows = lines_of(csv.str());
  ASSERT_EQ(rows.size(), 5u);
  // total_pcg_iters is the third column from the end.
  auto pcg_total = [](const std::string& row) {
    std::vector<std::string> cols;
    std::istringstream in(row);
    for (std::string c; std::getline(in, c, ',');) cols.push_back(c);
    return std::stoul(cols[cols.size() - 3]);
  };
  EXPECT_LE(pcg_total(rows[1]), pcg_total(rows[2]));

  std::ifstream volts(dir / "path__warm_start_on_voltages.csv");
  ASSERT_TRUE(volts.good());
  std::size_t count = 0;
  for (std::string line; std::getline(volts, line); ++count) {
    std::vector<double> v;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');) v.push_back(std::stod(c));
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  }
  EXPECT_EQ(count, 11u);
  std::filesystem::remove_all(dir);
}

TEST(Bench, FailuresAreRecordedPerRow) {
  std::vector<BenchInstance> instances{{"path", fixture("path.txt")}};
  SolverConfig base;
  auto runs = expand_config_grid(base, "");
  runs.push_back(runs.front());
  runs.back().label = "broken";
  runs.back().config.irls.epsilon = -1;
  std::ostringstream csv;
  const auto out = bench(instances, runs, csv);
  EXPECT_EQ(out.failures, 1u);
  EXPECT_NE(csv.str().find("error: "), std::string::npos);
  EXPECT_THROW(bench({}, runs, csv), Error);
  EXPECT_THROW(expand_config_grid(base, "workers"), Error);
  EXPECT_EQ(expand_config_grid(base, "workers=1,2;blocks=1,2,4").size(), 6u);
}
