#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "graph.hpp"
#include "irls.hpp"
#include "partition.hpp"
#include "rounding.hpp"

namespace irlscut {

struct PhaseTimes {
  double partition_ms = 0.0;
  double irls_ms = 0.0;
  double sweep_ms = 0.0;
  double two_level_ms = 0.0;
  double oracle_ms = 0.0;
  double total_ms = 0.0;

  double phase_sum() const { return partition_ms + irls_ms + sweep_ms + two_level_ms + oracle_ms; }
};

struct RunReport {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t blocks = 0;           // after clamping to the non-terminal count
  PartitionStats partition;
  IrlsResult irls;
  std::optional<CutResult> sweep;
  std::optional<CutResult> two_level;
  CutResult best;                   // the smaller of the computed cuts
  std::optional<double> exact_cut;
  std::optional<double> delta;      // (best - exact) / exact
  std::optional<double> sweep_delta;
  std::optional<double> two_level_delta;
  PhaseTimes times;
  std::size_t total_pcg_iterations = 0;
  std::vector<std::string> warnings;
};

// Partition, initialize, IRLS loop, round. Module errors are rethrown with
// the failing phase prepended to the message.
RunReport run_pipeline(const WeightedGraph& g, const SolverConfig& config);

// "node_id side" per node, original ids; the labeling is re-validated first.
void write_cut(std::ostream& out, const WeightedGraph& g, const Labeling& side);
void write_summary_json(std::ostream& out, const RunReport& report, const SolverConfig& config);
// iteration,S_eps,flow_value,pcg_iters,pcg_residual,wall_ms
void write_trace_csv(std::ostream& out, const IrlsTrace& trace, bool include_wall_time = true);
// One row per recorded iteration: the voltages sorted ascending.
void write_voltage_matrix_csv(std::ostream& out, const IrlsTrace& trace);

struct BenchInstance {
  std::string name;
  WeightedGraph graph;
};

struct BenchRun {
  std::string label;                // shown in the config column
  SolverConfig config;
};

struct BenchOutput {
  std::size_t rows = 0;
  std::size_t failures = 0;
  std::vector<std::string> warnings;
};

// One CSV row per (instance, config); a failing run becomes a row with its
// error message. When voltage_dir is non-empty the sorted-voltage matrix of
// every successful run is written there.
BenchOutput bench(const std::vector<BenchInstance>& instances, const std::vector<BenchRun>& runs,
                  std::ostream& csv, const std::string& voltage_dir = {});

// Expands "key=v1,v2;key2=w1" into the cartesian product over base.
std::vector<BenchRun> expand_config_grid(const SolverConfig& base, const std::string& grid);

}  // namespace irlscut
