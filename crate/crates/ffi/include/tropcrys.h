/* C interface to the tropcrys crystal library. */

#ifndef TROPCRYS_H
#define TROPCRYS_H

/* Generated by cbindgen from tropcrys-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Opaque colored-graph handle.
 */
typedef struct TcGraph TcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *tc_version(void);

/**
 * Releases a string produced by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer previously returned through an
 * out-parameter of this library, not yet freed.
 */
void tc_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null after a
 * success. Valid until the next library call on the same thread.
 */
const char *tc_last_error(void);

/**
 * Writes the JSON element list for the level-l crystal at rank n.
 *
 * # Safety
 * `out_json` must be null or valid for writes.
 */
int tc_crystal_enumerate(size_t n, uint64_t l, char **out_json);

/**
 * Applies an operator (f0..fn or e0..en) to a JSON element. Writes the
 * JSON result, or the literal `null` when the operator is undefined
 * there.
 *
 * # Safety
 * `op` and `elt_json` must be NUL-terminated strings; `out_json` must be
 * null or valid for writes.
 */
int tc_crystal_apply(const char *op, const char *elt_json, char **out_json);

/**
 * Runs the minimal-element and axiom checks at (n, l) and writes the
 * JSON report. Returns 1 when the report contains failures.
 *
 * # Safety
 * `out_json` must be null or valid for writes.
 */
int tc_crystal_perfect(size_t n, uint64_t l, char **out_json);

/**
 * Builds the lowering graph at (n, l) and hands back an owned handle.
 *
 * # Safety
 * `out_graph` must be valid for writes.
 */
int tc_graph_new(size_t n, uint64_t l, struct TcGraph **out_graph);

/**
 * Releases a graph handle. Null is ignored.
 *
 * # Safety
 * `graph` must be null or a handle from [`tc_graph_new`], not yet freed.
 */
void tc_graph_free(struct TcGraph *graph);

/**
 * Number of elements in the graph; 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle from [`tc_graph_new`].
 */
uint64_t tc_graph_node_count(const struct TcGraph *graph);

/**
 * Number of colored edges in the graph; 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle from [`tc_graph_new`].
 */
uint64_t tc_graph_edge_count(const struct TcGraph *graph);

/**
 * Writes the DOT rendering of the graph.
 *
 * # Safety
 * `graph` must be a live handle; `out_text` null or valid for writes.
 */
int tc_graph_dot(const struct TcGraph *graph, char **out_text);

/**
 * Writes the JSON rendering of the graph.
 *
 * # Safety
 * `graph` must be a live handle; `out_json` null or valid for writes.
 */
int tc_graph_json(const struct TcGraph *graph, char **out_json);

/**
 * Evaluates gammaI / epsI, or applies eI (with rational parameter text
 * `c`, required exactly then), at a rational point "p/q,...".
 *
 * # Safety
 * `point` and `action` must be NUL-terminated strings; `c` may be null;
 * `out_json` must be null or valid for writes.
 */
int tc_geom_eval(size_t n, const char *point, const char *action, const char *c, char **out_json);

/**
 * Runs a torus verification suite (axioms, lemma41, sigma-commute, eq43)
 * and writes the JSON report. Returns 1 when checks failed.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `out_json` null or valid for
 * writes.
 */
int tc_geom_verify(const char *suite, size_t n, uint64_t trials, uint64_t seed, char **out_json);

/**
 * Applies a one-step lattice operator (f0..fn or e0..en) to an integer
 * point "c2,..." and writes the moved point as JSON.
 *
 * # Safety
 * `op` and `point` must be NUL-terminated strings; `out_json` null or
 * valid for writes.
 */
int tc_ud_apply(const char *op, const char *point, size_t n, char **out_json);

/**
 * Runs a lattice verification suite (iso or mechanical) and writes the
 * JSON report. A nonnegative `box_radius` checks the whole box
 * [-box_radius, box_radius]^{2n-2}; a negative one samples `trials`
 * seeded points (or the rank default when `trials` is 0). Returns 1 when
 * checks failed.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; `out_json` null or valid for
 * writes.
 */
int tc_ud_check(const char *suite,
                size_t n,
                int64_t box_radius,
                size_t trials,
                uint64_t seed,
                char **out_json);

/**
 * Writes a catalog expression (gammaI, epsI, or eI:K) and its tropical
 * rewrite as JSON.
 *
 * # Safety
 * `target` must be a NUL-terminated string; `out_json` null or valid for
 * writes.
 */
int tc_ud_tropicalize(const char *target, size_t n, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPCRYS_H */
