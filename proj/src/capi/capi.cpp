#include "irlscut/irlscut.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "generate.hpp"
#include "graph_io.hpp"
#include "maxflow.hpp"
#include "pipeline.hpp"
#include "spectral.hpp"

struct irc_graph {
  irlscut::WeightedGraph graph;
};

struct irc_config {
  irlscut::SolverConfig config;
  std::string description;
};

struct irc_result {
  irlscut::RunReport report;
  irlscut::SolverConfig config;
  std::vector<irlscut::OriginalId> original_ids;
  std::string method;
};

namespace {

thread_local std::string g_last_error;

irc_status status_of(irlscut::ErrorCategory c) {
  switch (c) {
    case irlscut::ErrorCategory::Input: return IRC_ERR_INPUT;
    case irlscut::ErrorCategory::Solver: return IRC_ERR_SOLVER;
    case irlscut::ErrorCategory::Internal: return IRC_ERR_INTERNAL;
  }
  return IRC_ERR_INTERNAL;
}

template <class Fn>
irc_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return IRC_OK;
  } catch (const irlscut::Error& e) {
    g_last_error = e.what();
    return status_of(e.category());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return IRC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return IRC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return IRC_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) irlscut::fail(irlscut::ErrorCode::InvalidParams, std::string(what) + " is NULL");
}

std::ofstream open_output(const char* path) {
  require(path, "path");
  std::ofstream out(path);
  if (!out) irlscut::fail(irlscut::ErrorCode::IoError, std::string("cannot write '") + path + "'");
  return out;
}

void finish_output(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) irlscut::fail(irlscut::ErrorCode::IoError, std::string("write to '") + path + "' failed");
}

irlscut::Labeling copy_side(const irc_graph* graph, const unsigned char* side) {
  require(side, "side");
  return irlscut::Labeling(side, side + graph->graph.node_count());
}

}  // namespace

extern "C" {

const char* irc_last_error(void) { return g_last_error.c_str(); }
const char* irc_version(void) { return "1.0.0"; }

irc_status irc_config_create(irc_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new irc_config();
  });
}

void irc_config_free(irc_config* config) { delete config; }

irc_status irc_config_set(irc_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    auto next = config->config;
    next.set(key, value);
    next.validate();
    config->config = next;
  });
}

irc_status irc_config_load_file(irc_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    auto next = config->config;
    next.load_file(path);
    config->config = next;
  });
}

const char* irc_config_describe(irc_config* config) {
  if (config == nullptr) return "";
  config->description = config->config.describe();
  return config->description.c_str();
}

irc_status irc_graph_load(const char* path, irc_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new irc_graph{irlscut::read_graph_file(path)};
  });
}

irc_status irc_graph_from_edges(size_t edge_count, const int64_t* u, const int64_t* v, const double* capacity,
                                int64_t source, int64_t sink, irc_graph** out) {
  return guarded([&] {
    require(out, "out");
    if (edge_count > 0) {
      require(u, "u");
      require(v, "v");
      require(capacity, "capacity");
    }
    std::vector<irlscut::RawEdge> edges(edge_count);
    for (size_t i = 0; i < edge_count; ++i) edges[i] = irlscut::RawEdge{u[i], v[i], capacity[i]};
    *out = new irc_graph{irlscut::WeightedGraph::ingest(edges, source, sink)};
  });
}

irc_status irc_generate(const char* kind, const char* params, uint64_t seed, irc_graph** out) {
  return guarded([&] {
    require(kind, "kind");
    require(out, "out");
    const auto k = irlscut::parse_instance_kind(kind);
    auto p = irlscut::default_params(k);
    if (params != nullptr) {
      std::string text(params);
      for (auto& c : text) {
        if (c == ';') c = ',';
      }
      std::istringstream in(text);
      for (std::string item; std::getline(in, item, ',');) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
          irlscut::fail(irlscut::ErrorCode::InvalidParams, "generator parameter '" + item + "' needs key=value");
        }
        p.set(item.substr(0, eq), item.substr(eq + 1));
      }
    }
    *out = new irc_graph{irlscut::generate_instance(k, p, seed)};
  });
}

irc_status irc_graph_write(const irc_graph* graph, const char* path, const char* format) {
  return guarded([&] {
    require(graph, "graph");
    require(path, "path");
    const std::string f = format ? format : "dimacs";
    irlscut::GraphFormat gf;
    if (f == "dimacs") gf = irlscut::GraphFormat::Dimacs;
    else if (f == "triples") gf = irlscut::GraphFormat::Triples;
    else irlscut::fail(irlscut::ErrorCode::InvalidParams, "format must be dimacs or triples");
    irlscut::write_graph_file(path, graph->graph, gf);
  });
}

size_t irc_graph_node_count(const irc_graph* graph) { return graph ? graph->graph.node_count() : 0; }
size_t irc_graph_edge_count(const irc_graph* graph) { return graph ? graph->graph.edge_count() : 0; }

int64_t irc_graph_node_id(const irc_graph* graph, size_t i) {
  if (graph == nullptr || i >= graph->graph.node_count()) return -1;
  return graph->graph.original_id(static_cast<irlscut::NodeId>(i));
}

irc_status irc_graph_cut_value(const irc_graph* graph, const unsigned char* side, double* value) {
  return guarded([&] {
    require(graph, "graph");
    require(value, "value");
    *value = irlscut::cut_value(graph->graph, copy_side(graph, side));
  });
}

irc_status irc_graph_write_cut(const irc_graph* graph, const unsigned char* side, const char* path) {
  return guarded([&] {
    require(graph, "graph");
    const auto labels = copy_side(graph, side);
    auto out = open_output(path);
    irlscut::write_cut(out, graph->graph, labels);
    finish_output(out, path);
  });
}

void irc_graph_free(irc_graph* graph) { delete graph; }

irc_status irc_solve(const irc_graph* graph, const irc_config* config, irc_result** out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    const irlscut::SolverConfig cfg = config ? config->config : irlscut::SolverConfig{};
    auto result = std::make_unique<irc_result>();
    result->report = irlscut::run_pipeline(graph->graph, cfg);
    result->config = cfg;
    const auto ids = graph->graph.original_ids();
    result->original_ids.assign(ids.begin(), ids.end());
    result->method = std::string(irlscut::rounding_method_name(result->report.best.method));
    *out = result.release();
  });
}

void irc_result_free(irc_result* result) { delete result; }

double irc_result_cut_value(const irc_result* result) { return result ? result->report.best.value : 0.0; }
const char* irc_result_method(const irc_result* result) { return result ? result->method.c_str() : ""; }

irc_status irc_result_get(const irc_result* result, const char* field, double* value) {
  return guarded([&] {
    require(result, "result");
    require(field, "field");
    require(value, "value");
    const auto& r = result->report;
    const std::string f(field);
    std::optional<double> v;
    if (f == "cut_value") v = r.best.value;
    else if (f == "sweep_cut") { if (r.sweep) v = r.sweep->value; }
    else if (f == "two_level_cut") { if (r.two_level) v = r.two_level->value; }
    else if (f == "size_reduction") v = r.best.size_reduction;
    else if (f == "coarse_nodes") v = static_cast<double>(r.best.coarse_nodes);
    else if (f == "exact_cut") v = r.exact_cut;
    else if (f == "delta") v = r.delta;
    else if (f == "sweep_delta") v = r.sweep_delta;
    else if (f == "two_level_delta") v = r.two_level_delta;
    else if (f == "partition_ms") v = r.times.partition_ms;
    else if (f == "irls_ms") v = r.times.irls_ms;
    else if (f == "sweep_ms") v = r.times.sweep_ms;
    else if (f == "two_level_ms") v = r.times.two_level_ms;
    else if (f == "oracle_ms") v = r.times.oracle_ms;
    else if (f == "total_ms") v = r.times.total_ms;
    else if (f == "total_pcg_iterations") v = static_cast<double>(r.total_pcg_iterations);
    else if (f == "irls_iterations") {
      v = r.irls.trace.records.empty() ? 0.0 : static_cast<double>(r.irls.trace.records.back().iteration);
    } else if (f == "blocks") v = static_cast<double>(r.blocks);
    else if (f == "box_violations") v = static_cast<double>(r.irls.trace.box_violations);
    else if (f == "early_exit") v = r.irls.trace.early_exit ? 1.0 : 0.0;
    else irlscut::fail(irlscut::ErrorCode::InvalidParams, "unknown result field '" + f + "'");
    if (!v) irlscut::fail(irlscut::ErrorCode::InvalidParams, "field '" + f + "' was not computed in this run");
    *value = *v;
  });
}

size_t irc_result_node_count(const irc_result* result) { return result ? result->original_ids.size() : 0; }

irc_status irc_result_labeling(const irc_result* result, unsigned char* side) {
  return guarded([&] {
    require(result, "result");
    require(side, "side");
    const auto& l = result->report.best.source_side;
    std::memcpy(side, l.data(), l.size());
  });
}

size_t irc_result_warning_count(const irc_result* result) { return result ? result->report.warnings.size() : 0; }

const char* irc_result_warning(const irc_result* result, size_t i) {
  if (result == nullptr || i >= result->report.warnings.size()) return nullptr;
  return result->report.warnings[i].c_str();
}

size_t irc_result_trace_length(const irc_result* result) {
  return result ? result->report.irls.trace.records.size() : 0;
}

irc_status irc_result_trace_row(const irc_result* result, size_t i, irc_trace_row* row) {
  return guarded([&] {
    require(result, "result");
    require(row, "row");
    const auto& recs = result->report.irls.trace.records;
    if (i >= recs.size()) irlscut::fail(irlscut::ErrorCode::InvalidParams, "trace row out of range");
    const auto& r = recs[i];
    *row = irc_trace_row{r.iteration, r.smoothed_objective, r.flow_value, r.pcg.iterations,
                         r.pcg.relative_residual, r.wall_ms};
  });
}

irc_status irc_result_write_cut(const irc_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    const auto& side = result->report.best.source_side;
    if (side.size() != result->original_ids.size()) {
      irlscut::fail(irlscut::ErrorCode::InvariantViolation, "labeling length does not match the graph");
    }
    auto out = open_output(path);
    for (size_t u = 0; u < side.size(); ++u) out << result->original_ids[u] << ' ' << int(side[u]) << '\n';
    finish_output(out, path);
  });
}

irc_status irc_result_write_summary(const irc_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    auto out = open_output(path);
    irlscut::write_summary_json(out, result->report, result->config);
    finish_output(out, path);
  });
}

irc_status irc_result_write_trace(const irc_result* result, const char* path, int with_wall_time) {
  return guarded([&] {
    require(result, "result");
    auto out = open_output(path);
    irlscut::write_trace_csv(out, result->report.irls.trace, with_wall_time != 0);
    finish_output(out, path);
  });
}

irc_status irc_result_write_voltages(const irc_result* result, const char* path) {
  return guarded([&] {
    require(result, "result");
    if (result->report.irls.trace.voltages.empty()) {
      irlscut::fail(irlscut::ErrorCode::InvalidParams, "voltages were not recorded (set record_voltages=on)");
    }
    auto out = open_output(path);
    irlscut::write_voltage_matrix_csv(out, result->report.irls.trace);
    finish_output(out, path);
  });
}

irc_status irc_max_flow(const irc_graph* graph, double* cut_value, unsigned char* side) {
  return guarded([&] {
    require(graph, "graph");
    require(cut_value, "cut_value");
    const auto r = irlscut::max_flow(graph->graph);
    *cut_value = r.cut;
    if (side) std::memcpy(side, r.source_side.data(), r.source_side.size());
  });
}

irc_status irc_brute_force(const irc_graph* graph, double* cut_value, unsigned char* side) {
  return guarded([&] {
    require(graph, "graph");
    require(cut_value, "cut_value");
    const auto r = irlscut::brute_force_min_cut(graph->graph);
    *cut_value = r.value;
    if (side) std::memcpy(side, r.source_side.data(), r.source_side.size());
  });
}

irc_status irc_spectral(const irc_graph* graph, const irc_config* config, double pcg_tolerance, irc_cheeger* out) {
  return guarded([&] {
    require(graph, "graph");
    require(out, "out");
    irlscut::SpectralOptions opts;
    if (pcg_tolerance > 0.0) opts.pcg_tolerance = pcg_tolerance;
    if (config) {
      opts.blocks = config->config.blocks;
      opts.block_strategy = config->config.irls.block_strategy;
      opts.workers = config->config.irls.workers;
    }
    const auto r = irlscut::cheeger_check(graph->graph, opts);
    *out = irc_cheeger{r.lambda2, r.phi, r.lower, r.upper, r.min_cut, 2.0 * graph->graph.total_capacity(),
                       r.holds ? 1 : 0};
  });
}

irc_status irc_bench(const irc_graph* const* graphs, const char* const* names, size_t count, const irc_config* base,
                     const char* grid, const char* csv_path, const char* voltage_dir, size_t* failures,
                     irc_message_fn on_warning, void* user) {
  return guarded([&] {
    if (count > 0) require(graphs, "graphs");
    std::vector<irlscut::BenchInstance> instances;
    instances.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      require(graphs[i], "graph");
      std::string name = names && names[i] ? names[i] : "instance" + std::to_string(i);
      instances.push_back(irlscut::BenchInstance{std::move(name), graphs[i]->graph});
    }
    const irlscut::SolverConfig cfg = base ? base->config : irlscut::SolverConfig{};
    const auto runs = irlscut::expand_config_grid(cfg, grid ? grid : "");
    auto out = open_output(csv_path);
    const auto r = irlscut::bench(instances, runs, out, voltage_dir ? voltage_dir : "");
    finish_output(out, csv_path);
    if (failures) *failures = r.failures;
    if (on_warning) {
      for (const auto& w : r.warnings) on_warning(w.c_str(), user);
    }
  });
}

}  // extern "C"
