/* C interface to the shannon-cwt transform and propagation library. */

#ifndef SHANNON_CWT_H
#define SHANNON_CWT_H

#pragma once

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum ScwtStatus {
  /**
   * The call succeeded and its out-pointers are filled.
   */
  SCWT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SCWT_STATUS_NULL_ARGUMENT = 1,
  /**
   * Arguments were malformed: bad shapes, non-finite values,
   * unsupported combinations.
   */
  SCWT_STATUS_INVALID_INPUT = 2,
  /**
   * Arguments were well formed but the requested point is outside the
   * domain where the answer exists: out of the determinacy triangle,
   * on a spectrum threshold, or astride a branch change.
   */
  SCWT_STATUS_OUT_OF_DOMAIN = 3,
  /**
   * An internal invariant failed.
   */
  SCWT_STATUS_INTERNAL = 4,
} ScwtStatus;

/**
 * Opaque scale-shift grid of transform values.
 */
typedef struct ScwtField ScwtField;

/**
 * Opaque handle holding both components' values and first partials
 * sampled along one oblique line segment.
 */
typedef struct ScwtLineData ScwtLineData;

/**
 * Opaque signal handle.
 */
typedef struct ScwtSignal ScwtSignal;

/**
 * Complex value crossing the boundary.
 */
typedef struct ScwtComplex {
  double re;
  double im;
} ScwtComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failing call on this thread. Never null;
 * empty before the first failure. The pointer stays valid until the next
 * failing call on the same thread.
 */
const char *scwt_last_error_message(void);

/**
 * Creates the pure harmonic signal `exp(i omega t)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ScwtStatus scwt_signal_harmonic(double omega, struct ScwtSignal **out);

/**
 * Creates a uniformly sampled signal starting at `t0` with step `dt`.
 * `im` may be null for a real record. The samples are copied.
 *
 * # Safety
 * `re` (and `im` when non-null) must point to `len` readable doubles and
 * `out` must be a valid pointer.
 */
enum ScwtStatus scwt_signal_sampled(double t0,
                                    double dt,
                                    const double *re,
                                    const double *im,
                                    size_t len,
                                    struct ScwtSignal **out);

/**
 * Releases a signal handle. Null is ignored.
 *
 * # Safety
 * `signal` must have come from this library and not been freed before.
 */
void scwt_signal_free(struct ScwtSignal *signal);

/**
 * Evaluates the transform at one scale-shift point by direct quadrature
 * with the default integration window.
 *
 * # Safety
 * `signal` and `w` must be valid pointers.
 */
enum ScwtStatus scwt_transform(const struct ScwtSignal *signal,
                               double a,
                               double b,
                               struct ScwtComplex *w);

/**
 * Evaluates both principal-value components at one scale-shift point.
 * The transform itself is their difference.
 *
 * # Safety
 * `signal`, `w1`, and `w2` must be valid pointers.
 */
enum ScwtStatus scwt_transform_split(const struct ScwtSignal *signal,
                                     double a,
                                     double b,
                                     struct ScwtComplex *w1,
                                     struct ScwtComplex *w2);

/**
 * Builds both components' line data from harmonic closed forms along the
 * segment b = intercept_c - k a, a in [a_min, a_max], with n_nodes
 * uniformly spaced nodes.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum ScwtStatus scwt_line_data_harmonic(double omega,
                                        double k,
                                        double intercept_c,
                                        double a_min,
                                        double a_max,
                                        size_t n_nodes,
                                        struct ScwtLineData **out);

/**
 * Builds both components' line data by quadrature against an arbitrary
 * signal, using the default integration window.
 *
 * # Safety
 * `signal` and `out` must be valid pointers.
 */
enum ScwtStatus scwt_line_data_sample(const struct ScwtSignal *signal,
                                      double k,
                                      double intercept_c,
                                      double a_min,
                                      double a_max,
                                      size_t n_nodes,
                                      struct ScwtLineData **out);

/**
 * Releases a line-data handle. Null is ignored.
 *
 * # Safety
 * `ld` must have come from this library and not been freed before.
 */
void scwt_line_data_free(struct ScwtLineData *ld);

/**
 * Propagates the line data to one target inside its determinacy triangle
 * and returns the full transform there (first component minus second).
 *
 * # Safety
 * `ld` and `w` must be valid pointers.
 */
enum ScwtStatus scwt_propagate(const struct ScwtLineData *ld,
                               double a,
                               double b,
                               struct ScwtComplex *w);

/**
 * Propagates the line data onto an `na` by `nb` grid covering its
 * determinacy triangle. Grid nodes outside the triangle stay unevaluated.
 *
 * # Safety
 * `ld` and `out` must be valid pointers.
 */
enum ScwtStatus scwt_fill_triangle(const struct ScwtLineData *ld,
                                   size_t na,
                                   size_t nb,
                                   struct ScwtField **out);

/**
 * Reports the grid shape: `na` scale nodes by `nb` shift nodes.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScwtStatus scwt_field_shape(const struct ScwtField *field, size_t *na, size_t *nb);

/**
 * Reads grid node `(i, j)`: its scale, shift, transform value, and
 * whether the node was evaluated. Unevaluated nodes report `w = 0` with
 * `evaluated = false`.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScwtStatus scwt_field_node(const struct ScwtField *field,
                                size_t i,
                                size_t j,
                                double *a,
                                double *b,
                                struct ScwtComplex *w,
                                bool *evaluated);

/**
 * Releases a field handle. Null is ignored.
 *
 * # Safety
 * `field` must have come from this library and not been freed before.
 */
void scwt_field_free(struct ScwtField *field);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SHANNON_CWT_H */
