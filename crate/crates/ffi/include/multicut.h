#ifndef MULTICUT_H
#define MULTICUT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_ARGUMENT = 2,
  MC_STATUS_PARSE_ERROR = 3,
  MC_STATUS_INVALID_GRAPH = 4,
  MC_STATUS_CONFIG_ERROR = 5,
  MC_STATUS_BUFFER_TOO_SMALL = 6,
  MC_STATUS_PANIC = 7,
} McStatus;

typedef enum McMode {
  MC_MODE_PRIMAL = 0,
  MC_MODE_PRIMAL_DUAL = 1,
  MC_MODE_PRIMAL_DUAL_PLUS = 2,
  MC_MODE_DUAL = 3,
  MC_MODE_GAEC = 4,
} McMode;

/**
 * Opaque instance handle.
 */
typedef struct McGraph McGraph;

/**
 * Opaque result handle.
 */
typedef struct McSolution McSolution;

/**
 * Solver settings; obtain defaults from [`mc_config_default`].
 */
typedef struct McConfig {
  enum McMode mode;
  size_t mp_iterations;
  size_t max_cycle_length;
  double matching_switch_fraction;
  size_t matching_rounds;
  size_t max_rounds;
  size_t separation_rounds;
  bool matching_jitter;
  uint64_t seed;
  /**
   * 0 uses the machine's parallelism.
   */
  size_t threads;
} McConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *mc_last_error_message(void);

/**
 * Builds a graph from `num_edges` parallel arrays of endpoints and costs.
 * Parallel edges are summed.
 *
 * # Safety
 * `us`, `vs` and `costs` must each point to `num_edges` readable elements
 * (they may be NULL when `num_edges` is 0); `out` must be writable.
 */
enum McStatus mc_graph_new(size_t num_nodes,
                           const size_t *us,
                           const size_t *vs,
                           const double *costs,
                           size_t num_edges,
                           struct McGraph **out);

/**
 * Parses an instance in the `MULTICUT` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum McStatus mc_graph_parse(const char *text, struct McGraph **out);

/**
 * # Safety
 * `g` must be a live handle from this library.
 */
size_t mc_graph_num_nodes(const struct McGraph *g);

/**
 * # Safety
 * `g` must be a live handle from this library.
 */
size_t mc_graph_num_edges(const struct McGraph *g);

/**
 * # Safety
 * `g` must be NULL or a handle from this library that was not freed yet.
 */
void mc_graph_free(struct McGraph *g);

/**
 * Default settings for `mode`.
 */
struct McConfig mc_config_default(enum McMode mode);

/**
 * Solves `g`. A NULL `config` means the defaults of mode PD.
 *
 * # Safety
 * `g` must be a live handle, `config` NULL or valid, `out` writable.
 */
enum McStatus mc_solve(const struct McGraph *g,
                       const struct McConfig *config,
                       struct McSolution **out);

/**
 * Objective of the returned clustering, or NaN for a NULL handle.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
double mc_solution_primal_cost(const struct McSolution *s);

/**
 * Lower bound; negative infinity when the mode computes none.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
double mc_solution_lower_bound(const struct McSolution *s);

/**
 * # Safety
 * `s` must be NULL or a live handle.
 */
size_t mc_solution_num_nodes(const struct McSolution *s);

/**
 * # Safety
 * `s` must be NULL or a live handle.
 */
size_t mc_solution_num_clusters(const struct McSolution *s);

/**
 * Copies the cluster id of every node into `labels`, which must hold at
 * least `mc_solution_num_nodes(s)` entries.
 *
 * # Safety
 * `s` must be a live handle; `labels` must point to `len` writable elements.
 */
enum McStatus mc_solution_labels(const struct McSolution *s, size_t *labels, size_t len);

/**
 * # Safety
 * `s` must be NULL or a handle from this library that was not freed yet.
 */
void mc_solution_free(struct McSolution *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTICUT_H */
