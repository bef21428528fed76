#ifndef SPREADRANK_H
#define SPREADRANK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_POINTER = 1,
  SR_STATUS_INVALID_ARGUMENT = 2,
  SR_STATUS_PARSE_ERROR = 3,
  SR_STATUS_IO_ERROR = 4,
  SR_STATUS_BUFFER_TOO_SMALL = 5,
  SR_STATUS_COMPUTATION_ERROR = 6,
  SR_STATUS_PANIC = 7,
} SrStatus;

typedef enum SrDirection {
  /**
   * Edges point from author to resharer.
   */
  SR_DIRECTION_INFO_FLOW = 0,
  /**
   * Edges point from resharer to author.
   */
  SR_DIRECTION_ENDORSEMENT = 1,
} SrDirection;

typedef enum SrDegreeMode {
  SR_DEGREE_MODE_IN = 0,
  SR_DEGREE_MODE_OUT = 1,
  SR_DEGREE_MODE_TOTAL = 2,
} SrDegreeMode;

typedef enum SrMetric {
  SR_METRIC_DEGREE_IN = 0,
  SR_METRIC_DEGREE_OUT = 1,
  SR_METRIC_DEGREE_TOTAL = 2,
  SR_METRIC_CLOSENESS = 3,
  SR_METRIC_BETWEENNESS = 4,
  SR_METRIC_EIGENVECTOR = 5,
  SR_METRIC_PC = 6,
  SR_METRIC_MVC = 7,
  SR_METRIC_DIC = 8,
} SrMetric;

/**
 * Opaque graph handle.
 */
typedef struct SrGraph SrGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph over nodes `0..n_nodes` (labelled `"0"`, `"1"`, ...) from
 * parallel `src`/`dst` arrays. `weights` may be null for unit weights.
 * Parallel edges are summed and self-loops dropped.
 *
 * # Safety
 * `src` and `dst` must point to `n_edges` readable values, `weights` to
 * `n_edges` values or be null, and `out` must be writable.
 */
enum SrStatus sr_graph_from_edges(size_t n_nodes,
                                  const uint32_t *src,
                                  const uint32_t *dst,
                                  const double *weights,
                                  size_t n_edges,
                                  enum SrDirection stored_as,
                                  struct SrGraph **out);

/**
 * Reads a `src,dst,weight` CSV. Node ids follow label order (numeric
 * labels numerically), as reported by [`sr_graph_label`].
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum SrStatus sr_graph_from_edge_list_csv(const char *path,
                                          enum SrDirection stored_as,
                                          struct SrGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must come from an `sr_graph_from_*` call and not be freed twice.
 */
void sr_graph_free(struct SrGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum SrStatus sr_graph_node_count(const struct SrGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum SrStatus sr_graph_edge_count(const struct SrGraph *g, size_t *out);

/**
 * Copies the label of `node` into `buf` with a trailing NUL. `needed`
 * (optional) receives the required size including the NUL; a short buffer
 * yields `BufferTooSmall`.
 *
 * # Safety
 * `g` must be a live handle, `buf` writable for `buf_len` bytes (or null
 * when `buf_len` is 0), `needed` writable or null.
 */
enum SrStatus sr_graph_label(const struct SrGraph *g,
                             size_t node,
                             char *buf,
                             size_t buf_len,
                             size_t *needed);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum SrStatus sr_degree(const struct SrGraph *g, size_t node, enum SrDegreeMode mode, size_t *out);

/**
 * Computes `metric` with default parameters into `out`, indexed by node
 * id. `seed` drives the stochastic parts (MVC initial vulnerability,
 * sampled betweenness on large graphs). `out_len` must be at least the
 * node count.
 *
 * # Safety
 * `g` must be a live handle and `out` writable for `out_len` doubles.
 */
enum SrStatus sr_compute_metric(const struct SrGraph *g,
                                enum SrMetric metric,
                                uint64_t seed,
                                double *out,
                                size_t out_len);

/**
 * Expected cascade size from `seeds`, following info-flow edges. With
 * `trials == 0` the deterministic reachability count is returned;
 * otherwise an independent cascade with edge probability `p` is averaged
 * over `trials` runs.
 *
 * # Safety
 * `g` must be a live handle, `seeds` readable for `n_seeds` values and
 * `out` writable.
 */
enum SrStatus sr_spread_volume(const struct SrGraph *g,
                               const size_t *seeds,
                               size_t n_seeds,
                               double p,
                               size_t trials,
                               uint64_t seed,
                               double *out);

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sr_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sr_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPREADRANK_H */
