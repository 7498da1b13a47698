#include "pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "error.hpp"
#include "json.hpp"
#include "maxflow.hpp"

namespace irlscut {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

template <class Fn>
auto in_phase(const char* phase, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(phase) + ": " + e.what());
  }
}

}  // namespace

RunReport run_pipeline(const WeightedGraph& g, const SolverConfig& config) {
  config.validate();
  const auto run_start = Clock::now();
  RunReport report;
  report.nodes = g.node_count();
  report.edges = g.edge_count();

  auto t0 = Clock::now();
  const auto split = in_phase("partition", [&] { return split_terminals(g); });
  const std::size_t n_inner = split.nonterminal.node_count;
  std::size_t blocks = config.blocks;
  if (n_inner == 0) {
    blocks = 0;
  } else if (blocks > n_inner) {
    report.warnings.push_back("blocks=" + std::to_string(blocks) + " exceeds the " + std::to_string(n_inner) +
                              " non-terminal nodes; using " + std::to_string(n_inner));
    blocks = n_inner;
  }
  report.blocks = blocks;
  const auto partition = in_phase("partition", [&] {
    if (blocks <= 1) return Partition::single_block(n_inner);
    return partition_graph(split.nonterminal, PartitionOptions{blocks, config.balance_tolerance, config.seed});
  });
  report.partition = partition_stats(split.nonterminal, partition);
  report.times.partition_ms = elapsed_ms(t0);

  t0 = Clock::now();
  report.irls = in_phase("irls", [&] { return irls_run(g, split, partition, config.irls); });
  report.times.irls_ms = elapsed_ms(t0);
  for (const auto& rec : report.irls.trace.records) report.total_pcg_iterations += rec.pcg.iterations;
  for (const auto& w : report.irls.trace.warnings) report.warnings.push_back("irls: " + w);

  const auto& x = report.irls.voltages;
  if (config.rounding != RoundingChoice::TwoLevel) {
    t0 = Clock::now();
    report.sweep = in_phase("sweep", [&] { return sweep_cut(g, x); });
    report.times.sweep_ms = elapsed_ms(t0);
  }
  if (config.rounding != RoundingChoice::Sweep) {
    t0 = Clock::now();
    report.two_level = in_phase("two_level", [&] {
      return two_level_round(g, x, TwoLevelOptions{config.max_coarse_nodes});
    });
    report.times.two_level_ms = elapsed_ms(t0);
    for (const auto& w : report.two_level->warnings) report.warnings.push_back(w);
  }
  if (report.sweep && report.two_level) {
    report.best = report.two_level->value <= report.sweep->value ? *report.two_level : *report.sweep;
  } else {
    report.best = report.sweep ? *report.sweep : *report.two_level;
  }

  if (config.oracle) {
    t0 = Clock::now();
    in_phase("oracle", [&] {
      const auto exact = max_flow(g);
      report.exact_cut = exact.cut;
      report.delta = relative_approx_ratio(report.best.value, exact.cut);
      if (report.sweep) report.sweep_delta = relative_approx_ratio(report.sweep->value, exact.cut);
      if (report.two_level) report.two_level_delta = relative_approx_ratio(report.two_level->value, exact.cut);
      return 0;
    });
    report.times.oracle_ms = elapsed_ms(t0);
  }
  report.times.total_ms = elapsed_ms(run_start);
  return report;
}

void write_cut(std::ostream& out, const WeightedGraph& g, const Labeling& side) {
  (void)cut_value(g, side);
  for (std::size_t u = 0; u < g.node_count(); ++u) {
    out << g.original_id(static_cast<NodeId>(u)) << ' ' << static_cast<int>(side[u]) << '\n';
  }
}

void write_summary_json(std::ostream& out, const RunReport& report, const SolverConfig& config) {
  using nlohmann::json;
  json j;
  j["cut_value"] = report.best.value;
  j["method"] = std::string(rounding_method_name(report.best.method));
  j["size_reduction"] = report.best.size_reduction;
  j["delta_if_oracle_available"] = report.delta ? json(*report.delta) : json(nullptr);
  j["nodes"] = report.nodes;
  j["edges"] = report.edges;
  j["blocks"] = report.blocks;
  j["partition_edge_cut"] = report.partition.edge_cut;
  if (report.sweep) j["sweep_cut"] = report.sweep->value;
  if (report.two_level) {
    j["two_level_cut"] = report.two_level->value;
    j["two_level_coarse_nodes"] = report.two_level->coarse_nodes;
    j["two_level_size_reduction"] = report.two_level->size_reduction;
  }
  if (report.exact_cut) j["exact_cut"] = *report.exact_cut;
  if (report.sweep_delta) j["sweep_delta"] = *report.sweep_delta;
  if (report.two_level_delta) j["two_level_delta"] = *report.two_level_delta;
  j["irls_iterations"] = report.irls.trace.records.empty() ? 0 : report.irls.trace.records.back().iteration;
  j["early_exit"] = report.irls.trace.early_exit;
  j["total_pcg_iterations"] = report.total_pcg_iterations;
  j["box_violations"] = report.irls.trace.box_violations;
  j["times_ms"] = {{"partition", report.times.partition_ms}, {"irls", report.times.irls_ms},
                   {"sweep", report.times.sweep_ms},         {"two_level", report.times.two_level_ms},
                   {"oracle", report.times.oracle_ms},       {"total", report.times.total_ms}};
  j["config"] = {{"epsilon", config.irls.epsilon},
                 {"iterations", config.irls.iterations},
                 {"pcg_tol", config.irls.pcg_tolerance},
                 {"pcg_max_iter", config.irls.pcg_max_iterations},
                 {"blocks", config.blocks},
                 {"block_strategy", std::string(block_strategy_name(config.irls.block_strategy))},
                 {"warm_start", config.irls.warm_start},
                 {"early_exit", config.irls.early_exit},
                 {"rounding", std::string(rounding_choice_name(config.rounding))},
                 {"workers", config.irls.workers},
                 {"seed", config.seed}};
  j["warnings"] = report.warnings;
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const IrlsTrace& trace, bool include_wall_time) {
  out << "iteration,S_eps,flow_value,pcg_iters,pcg_residual";
  if (include_wall_time) out << ",wall_ms";
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : trace.records) {
    out << r.iteration << ',' << r.smoothed_objective << ',' << r.flow_value << ',' << r.pcg.iterations << ','
        << r.pcg.relative_residual;
    if (include_wall_time) out << ',' << r.wall_ms;
    out << '\n';
  }
}

void write_voltage_matrix_csv(std::ostream& out, const IrlsTrace& trace) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : trace.voltages) {
    auto sorted = row;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (i > 0) out << ',';
      out << sorted[i];
    }
    out << '\n';
  }
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string sanitize(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return s;
}

}  // namespace

BenchOutput bench(const std::vector<BenchInstance>& instances, const std::vector<BenchRun>& runs,
                  std::ostream& csv, const std::string& voltage_dir) {
  if (instances.empty()) fail(ErrorCode::InvalidParams, "bench needs at least one instance");
  if (runs.empty()) fail(ErrorCode::InvalidParams, "bench needs at least one configuration");
  BenchOutput result;
  csv << "instance,config,nodes,edges,epsilon,iterations,pcg_tol,pcg_max_iter,blocks,block_strategy,warm_start,"
         "rounding,workers,seed,partition_ms,irls_ms,sweep_ms,two_level_ms,oracle_ms,total_ms,sweep_cut,"
         "two_level_cut,best_cut,method,size_reduction,exact_cut,delta,sweep_delta,two_level_delta,"
         "total_pcg_iters,irls_iters,status\n";
  csv << std::setprecision(12);
  const auto opt = [](const std::optional<double>& v) {
    std::ostringstream s;
    s << std::setprecision(12);
    if (v) s << *v;
    return s.str();
  };

  for (const auto& inst : instances) {
    // (workers, irls_ms) per configuration differing only in worker count
    std::vector<std::pair<int, double>> scaling;
    for (const auto& run : runs) {
      const auto& c = run.config;
      csv << csv_escape(inst.name) << ',' << csv_escape(run.label) << ',' << inst.graph.node_count() << ','
          << inst.graph.edge_count() << ',' << c.irls.epsilon << ',' << c.irls.iterations << ','
          << c.irls.pcg_tolerance << ',' << c.irls.pcg_max_iterations << ',' << c.blocks << ','
          << block_strategy_name(c.irls.block_strategy) << ',' << (c.irls.warm_start ? 1 : 0) << ','
          << rounding_choice_name(c.rounding) << ',' << c.irls.workers << ',' << c.seed << ',';
      ++result.rows;
      try {
        auto cfg = c;
        cfg.irls.record_voltages = cfg.irls.record_voltages || !voltage_dir.empty();
        const auto r = run_pipeline(inst.graph, cfg);
        const auto& t = r.times;
        csv << t.partition_ms << ',' << t.irls_ms << ',' << t.sweep_ms << ',' << t.two_level_ms << ','
            << t.oracle_ms << ',' << t.total_ms << ','
            << opt(r.sweep ? std::optional<double>(r.sweep->value) : std::nullopt) << ','
            << opt(r.two_level ? std::optional<double>(r.two_level->value) : std::nullopt) << ',' << r.best.value
            << ',' << rounding_method_name(r.best.method) << ',' << r.best.size_reduction << ','
            << opt(r.exact_cut) << ',' << opt(r.delta) << ',' << opt(r.sweep_delta) << ','
            << opt(r.two_level_delta) << ',' << r.total_pcg_iterations << ','
            << (r.irls.trace.records.empty() ? 0 : r.irls.trace.records.back().iteration) << ",ok\n";
        scaling.emplace_back(c.irls.workers, t.irls_ms);
        if (!voltage_dir.empty()) {
          const auto path = std::filesystem::path(voltage_dir) /
                            (sanitize(inst.name) + "__" + sanitize(run.label) + "_voltages.csv");
          std::ofstream vout(path);
          if (!vout) fail(ErrorCode::IoError, "cannot write '" + path.string() + "'");
          write_voltage_matrix_csv(vout, r.irls.trace);
        }
      } catch (const std::exception& e) {
        ++result.failures;
        csv << ",,,,,,,,,,,,,,,,,error: " << csv_escape(e.what()) << '\n';
      }
    }
    if (inst.graph.edge_count() >= 100000 && scaling.size() > 1) {
      std::sort(scaling.begin(), scaling.end());
      for (std::size_t i = 1; i < scaling.size(); ++i) {
        if (scaling[i].first > scaling[i - 1].first && scaling[i].second > scaling[i - 1].second) {
          std::ostringstream msg;
          msg << inst.name << ": IRLS time grew from " << scaling[i - 1].second << " ms (" << scaling[i - 1].first
              << " workers) to " << scaling[i].second << " ms (" << scaling[i].first << " workers)";
          result.warnings.push_back(msg.str());
        }
      }
    }
  }
  return result;
}

std::vector<BenchRun> expand_config_grid(const SolverConfig& base, const std::string& grid) {
  std::vector<BenchRun> runs{BenchRun{"", base}};
  std::istringstream axes(grid);
  std::string axis;
  while (std::getline(axes, axis, ';')) {
    if (axis.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = axis.find('=');
    if (eq == std::string::npos) fail(ErrorCode::InvalidParams, "grid axis '" + axis + "' needs key=v1,v2");
    const auto key = axis.substr(0, eq);
    std::vector<std::string> values;
    std::istringstream vs(axis.substr(eq + 1));
    for (std::string v; std::getline(vs, v, ',');) values.push_back(v);
    if (values.empty()) fail(ErrorCode::InvalidParams, "grid axis '" + key + "' has no values");
    std::vector<BenchRun> next;
    for (const auto& run : runs) {
      for (const auto& v : values) {
        BenchRun r = run;
        r.config.set(key, v);
        r.label += (r.label.empty() ? "" : " ") + key + "=" + v;
        next.push_back(std::move(r));
      }
    }
    runs = std::move(next);
  }
  for (auto& r : runs) {
    r.config.validate();
    if (r.label.empty()) r.label = "default";
  }
  return runs;
}

}  // namespace irlscut
