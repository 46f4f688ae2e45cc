#ifndef CDSS_H
#define CDSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CdssStatus {
  CDSS_STATUS_OK = 0,
  CDSS_STATUS_NULL_POINTER = 1,
  CDSS_STATUS_INVALID_UTF8 = 2,
  CDSS_STATUS_PARSE = 3,
  CDSS_STATUS_INVALID_CONFIG = 4,
  CDSS_STATUS_INVALID_RESOURCE = 5,
  CDSS_STATUS_INCONSISTENT = 6,
  CDSS_STATUS_BUDGET_EXCEEDED = 7,
  CDSS_STATUS_DISCONNECTED = 8,
  CDSS_STATUS_ALPHA_TOO_SMALL = 9,
  CDSS_STATUS_DEGENERATE_CLUSTER = 10,
  CDSS_STATUS_INFEASIBLE = 11,
  CDSS_STATUS_KAPPA_OUT_OF_RANGE = 12,
  CDSS_STATUS_INVALID_GRID = 13,
  CDSS_STATUS_INVALID_PARAMETER = 14,
  CDSS_STATUS_INDEX_OUT_OF_RANGE = 15,
  CDSS_STATUS_PANIC = 16,
} CdssStatus;

typedef enum CdssCurveKind {
  CDSS_CURVE_KIND_KAPPA = 0,
  CDSS_CURVE_KIND_ALPHA_GAMMA = 1,
  CDSS_CURVE_KIND_GAMMA_I_GAMMA_C = 2,
} CdssCurveKind;

/**
 * Opaque clustered system shape.
 */
typedef struct CdssConfig CdssConfig;

/**
 * Opaque result of a sweep: one or more curves.
 */
typedef struct CdssCurveSet CdssCurveSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread, or NULL. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *cdss_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void cdss_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CdssStatus cdss_config_new(size_t n, size_t k, size_t clusters, struct CdssConfig **out);

/**
 * # Safety
 * `cfg` must be NULL or a handle from [`cdss_config_new`], not yet freed.
 */
void cdss_config_free(struct CdssConfig *cfg);

/**
 * Nodes per cluster; 0 for a NULL handle.
 *
 * # Safety
 * `cfg` must be NULL or a live handle.
 */
size_t cdss_config_cluster_size(const struct CdssConfig *cfg);

/**
 * # Safety
 * `cfg` must be NULL or a live handle.
 */
size_t cdss_config_intra_helpers(const struct CdssConfig *cfg);

/**
 * # Safety
 * `cfg` must be NULL or a live handle.
 */
size_t cdss_config_cross_helpers(const struct CdssConfig *cfg);

/**
 * Closed-form capacity.
 *
 * # Safety
 * Pointers must be valid: a live config handle, NUL-terminated inputs and a
 * writable `out`.
 */
enum CdssStatus cdss_capacity(const struct CdssConfig *cfg,
                              const char *alpha,
                              const char *beta_i,
                              const char *beta_c,
                              char **out);

/**
 * Capacity by max-flow over every candidate graph; fails with
 * `BUDGET_EXCEEDED` when more than `budget` graphs would be needed.
 *
 * # Safety
 * As for [`cdss_capacity`].
 */
enum CdssStatus cdss_brute_force_capacity(const struct CdssConfig *cfg,
                                          const char *alpha,
                                          const char *beta_i,
                                          const char *beta_c,
                                          uint64_t budget,
                                          char **out);

/**
 * # Safety
 * As for [`cdss_capacity`].
 */
enum CdssStatus cdss_capacity_of_kappa(const struct CdssConfig *cfg,
                                       const char *alpha,
                                       const char *gamma,
                                       const char *kappa,
                                       char **out);

/**
 * Closed-form zero-cross-traffic threshold; `DEGENERATE_CLUSTER` for
 * clusters of two or fewer nodes.
 *
 * # Safety
 * As for [`cdss_capacity`].
 */
enum CdssStatus cdss_gamma_i_star(const struct CdssConfig *cfg,
                                  const char *file_size,
                                  const char *alpha,
                                  char **out);

/**
 * Zero-cross-traffic threshold for any cluster size (bisection fallback).
 *
 * # Safety
 * As for [`cdss_capacity`].
 */
enum CdssStatus cdss_zero_cross_threshold(const struct CdssConfig *cfg,
                                          const char *file_size,
                                          const char *alpha,
                                          char **out);

/**
 * Smallest cross-cluster bandwidth storing `file_size`.
 *
 * # Safety
 * As for [`cdss_capacity`].
 */
enum CdssStatus cdss_min_gamma_c(const struct CdssConfig *cfg,
                                 const char *file_size,
                                 const char *alpha,
                                 const char *gamma_i,
                                 char **out);

/**
 * Renders a rational string as a decimal with twelve significant digits.
 *
 * # Safety
 * `value` must be NUL-terminated and `out` writable.
 */
enum CdssStatus cdss_to_decimal(const char *value, char **out);

/**
 * Evaluates a trade-off curve family. `file_size`, `alpha` and `gamma` may
 * be NULL when the kind does not need them; `grid` holds `grid_len`
 * strictly increasing values.
 *
 * # Safety
 * `grid` must point to `grid_len` valid strings; other pointers as for
 * [`cdss_capacity`].
 */
enum CdssStatus cdss_sweep(const struct CdssConfig *cfg,
                           enum CdssCurveKind kind,
                           const char *file_size,
                           const char *alpha,
                           const char *gamma,
                           const char *const *grid,
                           size_t grid_len,
                           struct CdssCurveSet **out);

/**
 * Number of curves in the set; 0 for NULL.
 *
 * # Safety
 * `set` must be NULL or a live handle.
 */
size_t cdss_curve_set_len(const struct CdssCurveSet *set);

/**
 * CSV text of curve `index`.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum CdssStatus cdss_curve_set_csv(const struct CdssCurveSet *set, size_t index, char **out);

/**
 * JSON sidecar with exact values for every curve in the set.
 *
 * # Safety
 * `set` must be a live handle and `out` writable.
 */
enum CdssStatus cdss_curve_set_json(const struct CdssCurveSet *set, char **out);

/**
 * # Safety
 * `set` must be NULL or a handle from [`cdss_sweep`], not yet freed.
 */
void cdss_curve_set_free(struct CdssCurveSet *set);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CDSS_H */
