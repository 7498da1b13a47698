/* C interface to the irlscut s-t minimum cut solver. */
#ifndef IRLSCUT_IRLSCUT_H
#define IRLSCUT_IRLSCUT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define IRC_API __declspec(dllexport)
#else
#define IRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irc_status {
  IRC_OK = 0,
  IRC_ERR_INPUT = 2,    /* bad file, parameters or graph */
  IRC_ERR_SOLVER = 3,   /* numerical failure */
  IRC_ERR_INTERNAL = 4  /* invariant violation or unexpected exception */
} irc_status;

typedef struct irc_graph irc_graph;
typedef struct irc_config irc_config;
typedef struct irc_result irc_result;

/* Message of the last failed call on this thread ("" if none). */
IRC_API const char* irc_last_error(void);
IRC_API const char* irc_version(void);

/* Configuration: key=value options, see irc_config_describe. */
IRC_API irc_status irc_config_create(irc_config** out);
IRC_API void irc_config_free(irc_config* config);
IRC_API irc_status irc_config_set(irc_config* config, const char* key, const char* value);
IRC_API irc_status irc_config_load_file(irc_config* config, const char* path);
/* Owned by config, valid until the next call on it. */
IRC_API const char* irc_config_describe(irc_config* config);

/* Graphs. DIMACS max-flow or "source <id> sink <id>" edge lists. */
IRC_API irc_status irc_graph_load(const char* path, irc_graph** out);
IRC_API irc_status irc_graph_from_edges(size_t edge_count, const int64_t* u, const int64_t* v,
                                        const double* capacity, int64_t source, int64_t sink, irc_graph** out);
/* kind: grid2d | grid3d_26conn | random_geometric | path.
   params: "key=value" pairs separated by ',' or ';', may be NULL. */
IRC_API irc_status irc_generate(const char* kind, const char* params, uint64_t seed, irc_graph** out);
/* format: "dimacs" or "triples". */
IRC_API irc_status irc_graph_write(const irc_graph* graph, const char* path, const char* format);
IRC_API size_t irc_graph_node_count(const irc_graph* graph);
IRC_API size_t irc_graph_edge_count(const irc_graph* graph);
/* Original id of dense node index i. */
IRC_API int64_t irc_graph_node_id(const irc_graph* graph, size_t i);
/* side has irc_graph_node_count entries, 1 = source side. */
IRC_API irc_status irc_graph_cut_value(const irc_graph* graph, const unsigned char* side, double* value);
IRC_API irc_status irc_graph_write_cut(const irc_graph* graph, const unsigned char* side, const char* path);
IRC_API void irc_graph_free(irc_graph* graph);

/* Full pipeline: partition, IRLS, rounding, optional exact oracle. */
IRC_API irc_status irc_solve(const irc_graph* graph, const irc_config* config, irc_result** out);
IRC_API void irc_result_free(irc_result* result);
IRC_API double irc_result_cut_value(const irc_result* result);
IRC_API const char* irc_result_method(const irc_result* result);
/* Numeric fields: cut_value, sweep_cut, two_level_cut, size_reduction, coarse_nodes,
   exact_cut, delta, sweep_delta, two_level_delta, partition_ms, irls_ms, sweep_ms,
   two_level_ms, oracle_ms, total_ms, total_pcg_iterations, irls_iterations, blocks,
   box_violations, early_exit. IRC_ERR_INPUT if unknown or not computed in this run. */
IRC_API irc_status irc_result_get(const irc_result* result, const char* field, double* value);
IRC_API size_t irc_result_node_count(const irc_result* result);
/* Copies the best labeling (dense node order); side needs node_count entries. */
IRC_API irc_status irc_result_labeling(const irc_result* result, unsigned char* side);
IRC_API size_t irc_result_warning_count(const irc_result* result);
IRC_API const char* irc_result_warning(const irc_result* result, size_t i);

typedef struct irc_trace_row {
  size_t iteration;
  double smoothed_objective;
  double flow_value;
  size_t pcg_iterations;
  double pcg_residual;
  double wall_ms;
} irc_trace_row;

IRC_API size_t irc_result_trace_length(const irc_result* result);
IRC_API irc_status irc_result_trace_row(const irc_result* result, size_t i, irc_trace_row* row);

/* Artifacts. with_wall_time = 0 drops the wall_ms column of the trace. */
IRC_API irc_status irc_result_write_cut(const irc_result* result, const char* path);
IRC_API irc_status irc_result_write_summary(const irc_result* result, const char* path);
IRC_API irc_status irc_result_write_trace(const irc_result* result, const char* path, int with_wall_time);
/* Needs record_voltages=on. */
IRC_API irc_status irc_result_write_voltages(const irc_result* result, const char* path);

/* Exact minimum cut. side may be NULL; otherwise it receives the labeling. */
IRC_API irc_status irc_max_flow(const irc_graph* graph, double* cut_value, unsigned char* side);
/* Exhaustive enumeration, at most 22 nodes. */
IRC_API irc_status irc_brute_force(const irc_graph* graph, double* cut_value, unsigned char* side);

typedef struct irc_cheeger {
  double lambda2;
  double phi;
  double lower;
  double upper;
  double min_cut;
  double volume;
  int holds;
} irc_cheeger;

/* config may be NULL; blocks, block_strategy and workers are taken from it. */
IRC_API irc_status irc_spectral(const irc_graph* graph, const irc_config* config, double pcg_tolerance,
                                irc_cheeger* out);

typedef void (*irc_message_fn)(const char* message, void* user);

/* One CSV row per (instance, configuration). grid: "key=v1,v2;key2=w1" over
   the base configuration, may be NULL. voltage_dir may be NULL. */
IRC_API irc_status irc_bench(const irc_graph* const* graphs, const char* const* names, size_t count,
                             const irc_config* base, const char* grid, const char* csv_path,
                             const char* voltage_dir, size_t* failures, irc_message_fn on_warning,
                             void* user);

#ifdef __cplusplus
}
#endif

#endif
