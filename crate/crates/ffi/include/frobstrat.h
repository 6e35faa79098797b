#ifndef FROBSTRAT_H
#define FROBSTRAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values are stable.
 */
typedef enum {
  FROB_STATUS_OK = 0,
  FROB_STATUS_NON_PRIME_CHARACTERISTIC = 1,
  FROB_STATUS_NEGATIVE_GENUS = 2,
  FROB_STATUS_GENUS_TOO_SMALL = 3,
  FROB_STATUS_INVALID_RANK = 4,
  FROB_STATUS_NOT_CONVEX = 5,
  FROB_STATUS_BAD_ENDPOINTS = 6,
  FROB_STATUS_INDIVISIBLE_DEGREE = 7,
  FROB_STATUS_ENDPOINT_MISMATCH = 8,
  FROB_STATUS_BUDGET_EXCEEDED = 9,
  FROB_STATUS_INVALID_CONSTRAINTS = 10,
  FROB_STATUS_POINT_NOT_MAPPED = 11,
  FROB_STATUS_PARSE = 12,
  FROB_STATUS_OVERFLOW = 13,
  /**
   * A required pointer argument was NULL.
   */
  FROB_STATUS_NULL_POINTER = 100,
  /**
   * A caller-provided buffer is too short; the needed length was written.
   */
  FROB_STATUS_BUFFER_TOO_SMALL = 101,
  /**
   * An index was out of range.
   */
  FROB_STATUS_OUT_OF_RANGE = 102,
  /**
   * Internal panic caught at the boundary.
   */
  FROB_STATUS_INTERNAL = 199,
} FrobStatus;

/**
 * Opaque polygon handle.
 */
typedef struct FrobPolygon FrobPolygon;

/**
 * Opaque list of polygons.
 */
typedef struct FrobPolygonList FrobPolygonList;

/**
 * Reduced fraction with positive denominator.
 */
typedef struct {
  int64_t numer;
  int64_t denom;
} FrobRational;

/**
 * `(rank, degree)` of a bundle.
 */
typedef struct {
  int64_t rank;
  int64_t degree;
} FrobInvariants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Name of a status code as a static NUL-terminated string.
 */
const char *frob_status_name(FrobStatus status);

/**
 * Message of the last failed call on this thread, or NULL. Valid until
 * the next call into the library on the same thread.
 */
const char *frob_last_error_message(void);

/**
 * Validates a curve context (prime `p`, `g ≥ 0`).
 */
FrobStatus frob_check_context(int64_t p, int64_t g);

FrobStatus frob_slope(int64_t rank, int64_t degree, FrobRational *out_slope);

FrobStatus frob_pushforward_invariants(int64_t p,
                                       int64_t g,
                                       int64_t rank,
                                       int64_t degree,
                                       FrobInvariants *out_inv);

FrobStatus frob_pullback_invariants(int64_t p,
                                    int64_t g,
                                    int64_t rank,
                                    int64_t degree,
                                    FrobInvariants *out_inv);

FrobStatus frob_pushforward_slope(int64_t p,
                                  int64_t g,
                                  int64_t rank,
                                  int64_t degree,
                                  FrobRational *out_slope);

/**
 * Writes the `p` gradeds of the canonical filtration into `buf`.
 *
 * `*out_len` always receives `p` on success or `BufferTooSmall`; in the
 * latter case nothing is written to `buf`.
 */
FrobStatus frob_canonical_filtration_profile(int64_t p,
                                             int64_t g,
                                             int64_t rank,
                                             int64_t degree,
                                             FrobInvariants *buf,
                                             size_t capacity,
                                             size_t *out_len);

/**
 * Builds a canonical polygon from `n` vertices given as parallel arrays.
 */
FrobStatus frob_polygon_from_vertices(const int64_t *xs,
                                      const int64_t *ys,
                                      size_t n,
                                      FrobPolygon **out_polygon);

FrobStatus frob_polygon_from_json(const char *json, FrobPolygon **out_polygon);

FrobStatus frob_oper_polygon(int64_t r, int64_t d, int64_t g, FrobPolygon **out_polygon);

void frob_polygon_free(FrobPolygon *polygon);

/**
 * Number of vertices, 0 for NULL.
 */
size_t frob_polygon_vertex_count(const FrobPolygon *polygon);

FrobStatus frob_polygon_vertex(const FrobPolygon *polygon,
                               size_t index,
                               int64_t *out_x,
                               int64_t *out_y);

/**
 * Polygon JSON (`{"r":..,"d":..,"vertices":[[x,y],...]}`).
 */
FrobStatus frob_polygon_to_json(const FrobPolygon *polygon, char **out_json);

/**
 * `*out_result` is true iff `a` lies on or above `b`.
 */
FrobStatus frob_polygon_dominates(const FrobPolygon *a, const FrobPolygon *b, bool *out_result);

FrobStatus frob_polygon_mu_extremes(const FrobPolygon *polygon,
                                    FrobRational *out_max,
                                    FrobRational *out_min);

FrobStatus frob_polygon_is_oper_shape(const FrobPolygon *polygon, int64_t g, bool *out_result);

/**
 * Admissible polygons of rank `r`, degree `d` on a curve of genus `g ≥ 2`.
 * `node_cap` of 0 selects the default budget.
 */
FrobStatus frob_admissible_polygons(int64_t r,
                                    int64_t d,
                                    int64_t p,
                                    int64_t g,
                                    uint64_t node_cap,
                                    FrobPolygonList **out_list);

size_t frob_polygon_list_len(const FrobPolygonList *list);

/**
 * Copies element `index` into a new polygon handle.
 */
FrobStatus frob_polygon_list_get(const FrobPolygonList *list,
                                 size_t index,
                                 FrobPolygon **out_polygon);

/**
 * Dominance poset of the list, as JSON (`dot == false`) or Graphviz DOT.
 */
FrobStatus frob_polygon_list_poset(const FrobPolygonList *list, bool dot, char **out_text);

void frob_polygon_list_free(FrobPolygonList *list);

/**
 * Runs a verification claim (`"oper-dominance"`, `"gap-equivalence"`,
 * `"pushforward-oper"`, `"maximal-stratum"`) and returns the report JSON.
 * `r` is ignored except for oper dominance; `node_cap` of 0 selects the
 * default budget.
 */
FrobStatus frob_verify_json(const char *claim,
                            int64_t p,
                            int64_t g,
                            int64_t r,
                            int64_t d,
                            uint64_t node_cap,
                            char **out_json);

/**
 * Releases a string returned by this library.
 */
void frob_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FROBSTRAT_H */
