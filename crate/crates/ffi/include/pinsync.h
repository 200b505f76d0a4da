#ifndef PINSYNC_H
#define PINSYNC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PinsyncChenVariant {
  PINSYNC_CHEN_VARIANT_STANDARD = 0,
  PINSYNC_CHEN_VARIANT_AUGMENTED = 1,
} PinsyncChenVariant;

typedef enum PinsyncModel {
  PINSYNC_MODEL_BA = 0,
  PINSYNC_MODEL_ER = 1,
  PINSYNC_MODEL_WS = 2,
} PinsyncModel;

typedef enum PinsyncStatus {
  PINSYNC_STATUS_OK = 0,
  PINSYNC_STATUS_NULL_POINTER = 1,
  PINSYNC_STATUS_INVALID_ARGUMENT = 2,
  PINSYNC_STATUS_PARSE_ERROR = 3,
  PINSYNC_STATUS_IO_ERROR = 4,
  PINSYNC_STATUS_NO_CONVERGENCE = 5,
  PINSYNC_STATUS_INVALID_BUDGET = 6,
  PINSYNC_STATUS_DIVERGENCE = 7,
  PINSYNC_STATUS_BUFFER_TOO_SMALL = 8,
  PINSYNC_STATUS_PANIC = 9,
} PinsyncStatus;

typedef enum PinsyncStrategy {
  PINSYNC_STRATEGY_DEGREE = 0,
  PINSYNC_STRATEGY_BETWEENNESS = 1,
  PINSYNC_STRATEGY_BFG = 2,
  PINSYNC_STRATEGY_PBO = 3,
} PinsyncStrategy;

/**
 * Opaque graph handle.
 */
typedef struct PinsyncGraph PinsyncGraph;

/**
 * Parameters for [`pinsync_graph_generate`]. Fields for other models are ignored.
 */
typedef struct PinsyncGenParams {
  enum PinsyncModel model;
  size_t n;
  size_t ba_m;
  double er_p;
  size_t ws_k;
  double ws_p;
  uint64_t seed;
  /**
   * Nonzero: redraw ER/WS until connected.
   */
  int32_t require_connected;
} PinsyncGenParams;

/**
 * Pinned Chen network settings; fill with [`pinsync_dynamics_default`].
 */
typedef struct PinsyncDynamics {
  double c;
  double gain;
  double p1;
  double p2;
  double p3;
  enum PinsyncChenVariant variant;
  double dt;
  double t_max;
  double eps;
  double init_box;
  uint64_t seed;
} PinsyncDynamics;

typedef struct PinsyncSimResult {
  /**
   * 1 if the error settled below `eps` before `t_max`.
   */
  int32_t synced;
  /**
   * Valid when `synced` is 1.
   */
  double sync_time;
  double final_error;
} PinsyncSimResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a whitespace-separated edge list (`#` starts a comment).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PinsyncStatus pinsync_graph_from_edge_list(const char *text, struct PinsyncGraph **out);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum PinsyncStatus pinsync_graph_load(const char *path, struct PinsyncGraph **out);

/**
 * Builds a graph on `n` nodes from `m` edges `(src[i], dst[i])`.
 * Self-loops and duplicates are dropped.
 *
 * # Safety
 * `src` and `dst` must hold `m` entries; `out` must be writable.
 */
enum PinsyncStatus pinsync_graph_from_edges(size_t n,
                                            const size_t *src,
                                            const size_t *dst,
                                            size_t m,
                                            struct PinsyncGraph **out);

/**
 * Draws a BA, ER or WS network.
 *
 * # Safety
 * `params` must point to a valid struct; `out` must be writable.
 */
enum PinsyncStatus pinsync_graph_generate(const struct PinsyncGenParams *params,
                                          struct PinsyncGraph **out);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t pinsync_graph_node_count(const struct PinsyncGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t pinsync_graph_edge_count(const struct PinsyncGraph *g);

/**
 * Releases a handle. Null is a no-op.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void pinsync_graph_free(struct PinsyncGraph *g);

/**
 * Selects `k` pins. Writes them in selection order to `nodes_out` and, if
 * `lambda_out` is not null, `lambda1` after each pick.
 *
 * # Safety
 * `g` must be a live handle; both buffers must hold `capacity` entries.
 */
enum PinsyncStatus pinsync_select(const struct PinsyncGraph *g,
                                  enum PinsyncStrategy strategy,
                                  size_t k,
                                  size_t *nodes_out,
                                  double *lambda_out,
                                  size_t capacity);

/**
 * `lambda1` of the grounded Laplacian for the given pins.
 *
 * # Safety
 * `g` must be a live handle; `pins` must hold `n_pins` entries; `out` must be writable.
 */
enum PinsyncStatus pinsync_lambda1(const struct PinsyncGraph *g,
                                   const size_t *pins,
                                   size_t n_pins,
                                   double *out);

/**
 * `lambda1` with the pins flagged in `failed` removed. `failed` holds one
 * byte per pin (nonzero means failed); null means no failures.
 *
 * # Safety
 * As for [`pinsync_lambda1`]; `failed` must be null or hold `n_pins` bytes.
 */
enum PinsyncStatus pinsync_effective_lambda1(const struct PinsyncGraph *g,
                                             const size_t *pins,
                                             size_t n_pins,
                                             const uint8_t *failed,
                                             double *out);

/**
 * Fills `out` with the library defaults.
 *
 * # Safety
 * `out` must be writable.
 */
enum PinsyncStatus pinsync_dynamics_default(struct PinsyncDynamics *out);

/**
 * Integrates the pinned Chen network and reports the sync time.
 *
 * # Safety
 * As for [`pinsync_effective_lambda1`]; `dynamics` must be valid and `out` writable.
 */
enum PinsyncStatus pinsync_simulate(const struct PinsyncGraph *g,
                                    const size_t *pins,
                                    size_t n_pins,
                                    const uint8_t *failed,
                                    const struct PinsyncDynamics *dynamics,
                                    struct PinsyncSimResult *out);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next pinsync call on the same thread.
 */
const char *pinsync_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *pinsync_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PINSYNC_H */
