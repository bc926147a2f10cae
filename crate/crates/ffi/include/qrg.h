#ifndef QRG_H
#define QRG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QrgStatus {
  QRG_STATUS_OK = 0,
  QRG_STATUS_NULL_POINTER = 1,
  QRG_STATUS_INVALID_ARGUMENT = 2,
  QRG_STATUS_QUADRATURE = 3,
  QRG_STATUS_SOLVER = 4,
  QRG_STATUS_OUT_OF_RANGE = 5,
  QRG_STATUS_PANIC = 6,
  QRG_STATUS_INTERNAL = 7,
} QrgStatus;

/**
 * Opaque graph handle.
 */
typedef struct QrgGraph QrgGraph;

typedef struct QrgVertex {
  uint32_t circle;
  double start;
  double length;
} QrgVertex;

typedef struct QrgEdge {
  uint32_t u;
  uint32_t v;
  uint32_t multiplicity;
} QrgEdge;

/**
 * Statistics of one component. A rank past the last component yields an
 * all-zero record.
 */
typedef struct QrgComponent {
  uint64_t rank;
  uint64_t vertex_count;
  double total_length;
  uint64_t edge_count_simple;
  uint64_t edge_count_multi;
} QrgComponent;

typedef struct QrgTheory {
  double beta;
  double lambda;
  double f;
  double gamma;
  double rho;
  double zeta;
  double giant_length_density;
  double vertex_density;
  double edge_density;
} QrgTheory;

typedef struct QrgSurvival {
  double estimate;
  double stderr;
  uint64_t survived;
  uint64_t trials;
} QrgSurvival;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qrg_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qrg_last_error_message(void);

/**
 * Samples a graph. On success `*out` owns a new handle.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle pointer.
 */
enum QrgStatus qrg_graph_build(double beta,
                               double lambda,
                               uint64_t n,
                               uint64_t seed,
                               bool audit,
                               struct QrgGraph **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `graph` must be NULL or a handle from this library not yet freed.
 */
void qrg_graph_free(struct QrgGraph *graph);

/**
 * Creates a new handle with parallel edges collapsed and reports the number
 * of removed copies.
 *
 * # Safety
 * `graph` must be a live handle; `out` and `excess` must be writable.
 */
enum QrgStatus qrg_graph_simplify(const struct QrgGraph *graph,
                                  struct QrgGraph **out,
                                  uint64_t *excess);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_vertex_count(const struct QrgGraph *graph, size_t *out);

/**
 * Number of edge records (adjacent pairs).
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_edge_count(const struct QrgGraph *graph, size_t *out);

/**
 * Number of edges counted with multiplicity.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_edge_count_multi(const struct QrgGraph *graph, uint64_t *out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_vertex(const struct QrgGraph *graph, size_t index, struct QrgVertex *out);

/**
 * Edge records are sorted by `(u, v)` with `u < v`.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_edge(const struct QrgGraph *graph, size_t index, struct QrgEdge *out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_component_count(const struct QrgGraph *graph, size_t *out);

/**
 * Component of the given 1-based rank, largest first.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_component(const struct QrgGraph *graph,
                                   size_t rank,
                                   struct QrgComponent *out);

/**
 * Probability that two length-uniform points share a component.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum QrgStatus qrg_graph_same_component_length_prob(const struct QrgGraph *graph, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QrgStatus qrg_arc_intersection_length(double a_start,
                                           double a_len,
                                           double b_start,
                                           double b_len,
                                           double beta,
                                           double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QrgStatus qrg_critical_f(double beta, double lambda, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QrgStatus qrg_solve_gamma(double beta, double lambda, double tol, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QrgStatus qrg_extinction_fixed_point(double beta, double lambda, double tol, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QrgStatus qrg_theory_predictions(double beta, double lambda, struct QrgTheory *out);

/**
 * Monte Carlo survival frequency of the branching process.
 *
 * # Safety
 * `out` must be writable.
 */
enum QrgStatus qrg_gw_survival_mc(double beta,
                                  double lambda,
                                  uint64_t trials,
                                  uint32_t max_generations,
                                  uint64_t population_cap,
                                  uint64_t seed,
                                  struct QrgSurvival *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QRG_H */
