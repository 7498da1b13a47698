#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "irlscut/irlscut.h"

namespace {

const std::string kFixtures = IRLSCUT_FIXTURE_DIR;

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("irlscut_capi_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(CApi, SolvePathFixture) {
  irc_graph* g = nullptr;
  ASSERT_EQ(irc_graph_load((kFixtures + "/path.txt").c_str(), &g), IRC_OK) << irc_last_error();
  EXPECT_EQ(irc_graph_node_count(g), 3u);
  EXPECT_EQ(irc_graph_edge_count(g), 2u);
  irc_config* c = nullptr;
  ASSERT_EQ(irc_config_create(&c), IRC_OK);
  ASSERT_EQ(irc_config_set(c, "oracle", "on"), IRC_OK);
  ASSERT_EQ(irc_config_set(c, "record_voltages", "on"), IRC_OK);
  irc_result* r = nullptr;
  ASSERT_EQ(irc_solve(g, c, &r), IRC_OK) << irc_last_error();
  EXPECT_DOUBLE_EQ(irc_result_cut_value(r), 1.0);
  double delta = -1;
  EXPECT_EQ(irc_result_get(r, "delta", &delta), IRC_OK);
  EXPECT_EQ(delta, 0.0);
  double v = 0;
  EXPECT_EQ(irc_result_get(r, "bogus", &v), IRC_ERR_INPUT);
  EXPECT_NE(std::string(irc_last_error()).find("bogus"), std::string::npos);
  std::vector<unsigned char> side(irc_result_node_count(r));
  ASSERT_EQ(irc_result_labeling(r, side.data()), IRC_OK);
  double check = 0;
  ASSERT_EQ(irc_graph_cut_value(g, side.data(), &check), IRC_OK);
  EXPECT_DOUBLE_EQ(check, 1.0);
  EXPECT_GE(irc_result_trace_length(r), 1u);
  irc_trace_row row{};
  ASSERT_EQ(irc_result_trace_row(r, 0, &row), IRC_OK);
  EXPECT_EQ(row.iteration, 0u);
  EXPECT_NEAR(row.smoothed_objective, 4.0 / 3.0, 1e-9);
  EXPECT_EQ(irc_result_trace_row(r, 1000, &row), IRC_ERR_INPUT);
  EXPECT_GE(irc_result_warning_count(r), 1u);
  EXPECT_NE(irc_result_warning(r, 0), nullptr);

  const auto cut = temp_path("cut.txt"), summary = temp_path("summary.json"), trace = temp_path("trace.csv"),
             volts = temp_path("volts.csv");
  EXPECT_EQ(irc_result_write_cut(r, cut.c_str()), IRC_OK);
  EXPECT_EQ(slurp(cut), "0 1\n1 0\n2 1\n");
  EXPECT_EQ(irc_result_write_summary(r, summary.c_str()), IRC_OK);
  EXPECT_NE(slurp(summary).find("\"cut_value\""), std::string::npos);
  EXPECT_EQ(irc_result_write_trace(r, trace.c_str(), 0), IRC_OK);
  EXPECT_EQ(slurp(trace).rfind("iteration,S_eps,flow_value,pcg_iters,pcg_residual\n", 0), 0u);
  EXPECT_EQ(irc_result_write_voltages(r, volts.c_str()), IRC_OK);
  EXPECT_EQ(irc_result_write_cut(r, "/nonexistent/dir/cut.txt"), IRC_ERR_INPUT);
  for (const auto& p : {cut, summary, trace, volts}) std::remove(p.c_str());

  irc_result_free(r);
  irc_config_free(c);
  irc_graph_free(g);
}

TEST(CApi, StatusCodes) {
  irc_graph* g = nullptr;
  EXPECT_EQ(irc_graph_load("/nonexistent.max", &g), IRC_ERR_INPUT);
  EXPECT_EQ(g, nullptr);
  EXPECT_EQ(irc_graph_load(nullptr, &g), IRC_ERR_INPUT);
  const int64_t u[] = {0, 2}, v[] = {2, 3};
  const double cap[] = {1.0, 1.0};
  EXPECT_EQ(irc_graph_from_edges(2, u, v, cap, 0, 1, &g), IRC_ERR_INPUT);
  EXPECT_NE(std::string(irc_last_error()).find("DisconnectedGraph"), std::string::npos);
  irc_config* c = nullptr;
  ASSERT_EQ(irc_config_create(&c), IRC_OK);
  EXPECT_EQ(irc_config_set(c, "epsilon", "-1"), IRC_ERR_INPUT);
  EXPECT_EQ(irc_config_set(c, "unknown", "1"), IRC_ERR_INPUT);
  EXPECT_EQ(irc_config_load_file(c, "/nonexistent.cfg"), IRC_ERR_INPUT);
  EXPECT_NE(std::string(irc_config_describe(c)).find("epsilon = 1e-06"), std::string::npos);
  irc_config_free(c);
  EXPECT_EQ(irc_generate("torus", nullptr, 1, &g), IRC_ERR_INPUT);
  EXPECT_EQ(irc_generate("grid2d", "rows", 1, &g), IRC_ERR_INPUT);
}

TEST(CApi, GenerateOracleSpectralBench) {
  irc_graph* g = nullptr;
  ASSERT_EQ(irc_generate("grid2d", "rows=6,cols=5;terminals=sides", 3, &g), IRC_OK) << irc_last_error();
  EXPECT_EQ(irc_graph_node_count(g), 32u);
  const auto file = temp_path("grid.txt");
  ASSERT_EQ(irc_graph_write(g, file.c_str(), "triples"), IRC_OK);
  irc_graph* h = nullptr;
  ASSERT_EQ(irc_graph_load(file.c_str(), &h), IRC_OK);
  double flow = 0, brute = 0;
  std::vector<unsigned char> side(irc_graph_node_count(h));
  ASSERT_EQ(irc_max_flow(h, &flow, side.data()), IRC_OK);
  irc_graph* small = nullptr;
  ASSERT_EQ(irc_generate("grid2d", "rows=3,cols=4", 1, &small), IRC_OK);
  double small_flow = 0;
  ASSERT_EQ(irc_max_flow(small, &small_flow, nullptr), IRC_OK);
  ASSERT_EQ(irc_brute_force(small, &brute, nullptr), IRC_OK);
  EXPECT_NEAR(small_flow, brute, 1e-9 * brute);
  EXPECT_EQ(irc_brute_force(h, &brute, nullptr), IRC_ERR_INPUT);
  irc_cheeger ch{};
  ASSERT_EQ(irc_spectral(h, nullptr, 0.0, &ch), IRC_OK);
  EXPECT_TRUE(ch.holds);
  EXPECT_NEAR(ch.min_cut, flow, 1e-9 * flow);

  const irc_graph* graphs[] = {g, small};
  const char* names[] = {"grid", "small"};
  const auto csv = temp_path("bench.csv");
  size_t failures = 99;
  ASSERT_EQ(irc_bench(graphs, names, 2, nullptr, "warm_start=on,off", csv.c_str(), nullptr, &failures, nullptr,
                      nullptr),
            IRC_OK)
      << irc_last_error();
  EXPECT_EQ(failures, 0u);
  std::ifstream in(csv);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 5u);
  std::remove(csv.c_str());
  std::remove(file.c_str());
  irc_graph_free(g);
  irc_graph_free(h);
  irc_graph_free(small);
}
