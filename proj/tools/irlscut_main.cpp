// Command-line front end; talks to the solver only through the C interface.
#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irlscut/irlscut.h"

namespace {

struct Failure {
  irc_status status;
};

void check(irc_status s) {
  if (s != IRC_OK) throw Failure{s};
}

struct GraphDeleter {
  void operator()(irc_graph* g) const { irc_graph_free(g); }
};
struct ConfigDeleter {
  void operator()(irc_config* c) const { irc_config_free(c); }
};
struct ResultDeleter {
  void operator()(irc_result* r) const { irc_result_free(r); }
};
using GraphPtr = std::unique_ptr<irc_graph, GraphDeleter>;
using ConfigPtr = std::unique_ptr<irc_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<irc_result, ResultDeleter>;

GraphPtr load_graph(const std::string& path) {
  irc_graph* g = nullptr;
  check(irc_graph_load(path.c_str(), &g));
  return GraphPtr(g);
}

// Option name, config key, help text.
struct ConfigFlag {
  const char* flag;
  const char* key;
  const char* help;
};

const ConfigFlag kConfigFlags[] = {
    {"--epsilon", "epsilon", "smoothing parameter"},
    {"--iterations,-T", "iterations", "IRLS iterations"},
    {"--pcg-tol", "pcg_tol", "PCG relative residual tolerance"},
    {"--pcg-max-iter", "pcg_max_iter", "PCG iteration cap per solve"},
    {"--blocks,-p", "blocks", "block-Jacobi blocks"},
    {"--block-strategy", "block_strategy", "exact_lu | ilu0"},
    {"--warm-start", "warm_start", "on | off"},
    {"--early-exit", "early_exit", "on | off"},
    {"--early-exit-tol", "early_exit_tol", "max voltage change for early exit"},
    {"--rounding", "rounding", "sweep | two_level | both"},
    {"--workers,-w", "workers", "worker threads"},
    {"--seed", "seed", "partitioner seed"},
    {"--balance-tolerance", "balance_tolerance", "partition balance tolerance"},
    {"--max-coarse-nodes", "max_coarse_nodes", "two-level size cap, 0 = none"},
    {"--oracle", "oracle", "on | off: run the exact solver and report delta"},
    {"--record-voltages", "record_voltages", "on | off"},
};

std::map<std::string, std::string> default_values() {
  irc_config* c = nullptr;
  check(irc_config_create(&c));
  ConfigPtr holder(c);
  std::map<std::string, std::string> values;
  std::istringstream in(irc_config_describe(c));
  for (std::string line; std::getline(in, line);) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(' ');
      const auto e = s.find_last_not_of(' ');
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

struct ConfigOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  // only: restrict to these config keys (empty = all).
  void add_to(CLI::App* app, const std::map<std::string, std::string>& defaults,
              const std::vector<std::string>& only = {}) {
    app->add_option("--config,-c", config_file, "flat key=value configuration file")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "extra key=value option (repeatable)");
    for (const auto& f : kConfigFlags) {
      if (!only.empty() && std::find(only.begin(), only.end(), f.key) == only.end()) continue;
      auto it = defaults.find(f.key);
      auto* opt = app->add_option(f.flag, values[f.key], f.help);
      if (it != defaults.end()) opt->default_str(it->second);
      options[f.key] = opt;
    }
  }

  // Defaults, then the file, then --set, then explicit flags.
  ConfigPtr build() const {
    irc_config* c = nullptr;
    check(irc_config_create(&c));
    ConfigPtr config(c);
    if (!config_file.empty()) check(irc_config_load_file(c, config_file.c_str()));
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << s << "'\n";
        throw Failure{IRC_ERR_INPUT};
      }
      check(irc_config_set(c, s.substr(0, eq).c_str(), s.substr(eq + 1).c_str()));
    }
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) check(irc_config_set(c, key.c_str(), values.at(key).c_str()));
    }
    return config;
  }
};

double field(const irc_result* r, const char* name) {
  double v = 0.0;
  return irc_result_get(r, name, &v) == IRC_OK ? v : -1.0;
}

void print_report(const irc_result* r) {
  double v = 0.0;
  std::cout << std::setprecision(12);
  std::cout << "cut_value " << irc_result_cut_value(r) << " (" << irc_result_method(r) << ")\n";
  if (irc_result_get(r, "sweep_cut", &v) == IRC_OK) std::cout << "sweep_cut " << v << '\n';
  if (irc_result_get(r, "two_level_cut", &v) == IRC_OK) std::cout << "two_level_cut " << v << '\n';
  std::cout << "size_reduction " << field(r, "size_reduction") << '\n';
  if (irc_result_get(r, "exact_cut", &v) == IRC_OK) std::cout << "exact_cut " << v << '\n';
  if (irc_result_get(r, "delta", &v) == IRC_OK) std::cout << "delta " << v << '\n';
  std::cout << std::setprecision(4) << "times_ms partition " << field(r, "partition_ms") << " irls "
            << field(r, "irls_ms") << " sweep " << field(r, "sweep_ms") << " two_level " << field(r, "two_level_ms")
            << " oracle " << field(r, "oracle_ms") << " total " << field(r, "total_ms") << '\n';
  std::cout << "irls_iterations " << field(r, "irls_iterations") << " total_pcg_iterations "
            << field(r, "total_pcg_iterations") << '\n';
  for (size_t i = 0; i < irc_result_warning_count(r); ++i) std::cerr << "warning: " << irc_result_warning(r, i) << '\n';
}

std::string format_of(const std::string& path, const std::string& requested) {
  if (!requested.empty()) return requested;
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && path.substr(dot) == ".txt") return "triples";
  return "dimacs";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel IRLS s-t minimum cut solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(irc_version()));

  std::map<std::string, std::string> defaults;
  try {
    defaults = default_values();
  } catch (const Failure& f) {
    std::cerr << "error: " << irc_last_error() << '\n';
    return f.status;
  }

  // solve
  auto* solve = app.add_subcommand("solve", "run the IRLS pipeline on a graph file");
  std::string solve_input, cut_path, json_path, trace_path, voltages_path;
  bool trace_no_wall = false;
  bool show_config = false;
  solve->add_option("input", solve_input, "DIMACS max-flow or triple-list graph")->required()->check(CLI::ExistingFile);
  solve->add_option("--cut", cut_path, "write 'node_id side' lines");
  solve->add_option("--json", json_path, "write the JSON summary");
  solve->add_option("--trace", trace_path, "write the per-iteration trace CSV");
  solve->add_flag("--trace-no-wall", trace_no_wall, "omit wall_ms from the trace");
  solve->add_option("--voltages", voltages_path, "write sorted voltages per iteration (CSV)");
  solve->add_flag("--show-config", show_config, "print the effective configuration");
  ConfigOptions solve_cfg;
  solve_cfg.add_to(solve, defaults);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "exact minimum cut by max-flow");
  std::string oracle_input, oracle_cut;
  bool brute = false;
  oracle->add_option("input", oracle_input, "graph file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--cut", oracle_cut, "write 'node_id side' lines");
  oracle->add_flag("--brute-force", brute, "enumerate all cuts instead (at most 22 nodes)");

  // spectral
  auto* spectral = app.add_subcommand("spectral", "lambda_2 and the Cheeger sandwich");
  std::string spectral_input;
  double spectral_tol = 1e-12;
  spectral->add_option("input", spectral_input, "graph file")->required()->check(CLI::ExistingFile);
  spectral->add_option("--pcg-tol", spectral_tol, "PCG tolerance of the lambda_2 solve")->capture_default_str();
  ConfigOptions spectral_cfg;
  spectral_cfg.add_to(spectral, defaults, {"blocks", "block_strategy", "workers"});

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string gen_kind, gen_out, gen_format;
  std::vector<std::string> gen_params;
  std::uint64_t gen_seed = 1;
  gen->add_option("kind", gen_kind, "grid2d | grid3d_26conn | random_geometric | path")->required();
  gen->add_option("--out,-o", gen_out, "output file")->required();
  gen->add_option("--format", gen_format, "dimacs | triples (default: from extension, .txt = triples)");
  gen->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen->add_option("--param", gen_params,
                  "key=value (repeatable): rows, cols, depth, nodes, base_weight, terminal_scale, "
                  "terminals=sides|corners|blob, noise, radius, side_fraction, max_retries");

  // bench
  auto* bench = app.add_subcommand("bench", "run a configuration grid over instances");
  std::vector<std::string> bench_inputs;
  std::string bench_grid, bench_csv, bench_voltage_dir;
  bench->add_option("inputs", bench_inputs, "graph files")->required()->check(CLI::ExistingFile);
  bench->add_option("--grid", bench_grid, "configuration grid, e.g. \"warm_start=on,off;workers=1,4\"");
  bench->add_option("--csv", bench_csv, "output CSV")->required();
  bench->add_option("--voltage-dir", bench_voltage_dir, "directory for sorted-voltage matrices")
      ->check(CLI::ExistingDirectory);
  ConfigOptions bench_cfg;
  bench_cfg.add_to(bench, defaults);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : IRC_ERR_INPUT;
  }

  try {
    if (*solve) {
      auto graph = load_graph(solve_input);
      auto config = solve_cfg.build();
      if (!voltages_path.empty()) check(irc_config_set(config.get(), "record_voltages", "on"));
      if (show_config) std::cout << irc_config_describe(config.get());
      irc_result* r = nullptr;
      check(irc_solve(graph.get(), config.get(), &r));
      ResultPtr result(r);
      print_report(r);
      if (!cut_path.empty()) check(irc_result_write_cut(r, cut_path.c_str()));
      if (!json_path.empty()) check(irc_result_write_summary(r, json_path.c_str()));
      if (!trace_path.empty()) check(irc_result_write_trace(r, trace_path.c_str(), trace_no_wall ? 0 : 1));
      if (!voltages_path.empty()) check(irc_result_write_voltages(r, voltages_path.c_str()));
    } else if (*oracle) {
      auto graph = load_graph(oracle_input);
      std::vector<unsigned char> side(irc_graph_node_count(graph.get()));
      double value = 0.0;
      check(brute ? irc_brute_force(graph.get(), &value, side.data())
                  : irc_max_flow(graph.get(), &value, side.data()));
      std::cout << std::setprecision(17) << "min_cut " << value << '\n';
      if (!oracle_cut.empty()) check(irc_graph_write_cut(graph.get(), side.data(), oracle_cut.c_str()));
    } else if (*spectral) {
      auto graph = load_graph(spectral_input);
      auto config = spectral_cfg.build();
      irc_cheeger c{};
      check(irc_spectral(graph.get(), config.get(), spectral_tol, &c));
      std::cout << std::setprecision(12) << "lambda2 " << c.lambda2 << "\nphi " << c.phi << "\nmin_cut " << c.min_cut
                << "\nvolume " << c.volume << "\nlower " << c.lower << "\nupper " << c.upper << "\nholds "
                << (c.holds ? "yes" : "no") << '\n';
    } else if (*gen) {
      std::string params;
      for (const auto& p : gen_params) params += p + ";";
      irc_graph* g = nullptr;
      check(irc_generate(gen_kind.c_str(), params.c_str(), gen_seed, &g));
      GraphPtr graph(g);
      check(irc_graph_write(g, gen_out.c_str(), format_of(gen_out, gen_format).c_str()));
      std::cout << "wrote " << gen_out << ": " << irc_graph_node_count(g) << " nodes, " << irc_graph_edge_count(g)
                << " edges\n";
    } else if (*bench) {
      std::vector<GraphPtr> graphs;
      std::vector<const irc_graph*> handles;
      std::vector<const char*> names;
      for (const auto& path : bench_inputs) {
        graphs.push_back(load_graph(path));
        handles.push_back(graphs.back().get());
        names.push_back(path.c_str());
      }
      auto config = bench_cfg.build();
      size_t failures = 0;
      check(irc_bench(handles.data(), names.data(), handles.size(), config.get(), bench_grid.c_str(),
                      bench_csv.c_str(), bench_voltage_dir.empty() ? nullptr : bench_voltage_dir.c_str(), &failures,
                      [](const char* msg, void*) { std::cerr << "warning: " << msg << '\n'; }, nullptr));
      std::cout << "wrote " << bench_csv << " (" << failures << " failed run(s))\n";
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << irc_last_error() << '\n';
    return f.status;
  }
  return 0;
}
