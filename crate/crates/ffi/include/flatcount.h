#ifndef FLATCOUNT_H
#define FLATCOUNT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcStatus {
  FC_STATUS_OK = 0,
  FC_STATUS_MALFORMED_SPEC = 1,
  FC_STATUS_NON_MATCHING_EDGE = 2,
  FC_STATUS_DISCONNECTED_SURFACE = 3,
  FC_STATUS_NOT_UNIMODULAR = 4,
  FC_STATUS_TOLERANCE_BREAKDOWN = 5,
  FC_STATUS_UNKNOWN_SINGULARITY = 6,
  FC_STATUS_RADIUS_EXCEEDS_ENUMERATION = 7,
  FC_STATUS_SUPPORT_EXCEEDS_ENUMERATION = 8,
  FC_STATUS_INSUFFICIENT_DATA = 9,
  FC_STATUS_SCHEDULE_VIOLATION = 10,
  FC_STATUS_EMPTY_SAMPLE = 11,
  FC_STATUS_ZERO_MASS_PSI = 12,
  FC_STATUS_INVALID_ARGUMENT = 13,
  FC_STATUS_IO = 14,
  FC_STATUS_NULL_POINTER = 15,
  FC_STATUS_INVALID_UTF8 = 16,
  FC_STATUS_INDEX_OUT_OF_RANGE = 17,
  FC_STATUS_PANIC = 18,
} FcStatus;

/**
 * Opaque holonomy set handle.
 */
typedef struct FcHolonomySet FcHolonomySet;

/**
 * Opaque surface handle.
 */
typedef struct FcSurface FcSurface;

typedef struct FcSaddleConnection {
  double x;
  double y;
  size_t start;
  size_t end;
  size_t separatrix;
} FcSaddleConnection;

typedef struct FcExponentLedger {
  double lambda;
  double alpha1;
  double alpha2;
  double beta;
  double eta;
  double eta1;
  double sigma;
  double kappa_sigma;
  double kappa_step3;
  double kappa;
  bool summable;
} FcExponentLedger;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *fc_last_error_message(void);

/**
 * Builds a surface from a NUL-terminated JSON spec.
 *
 * # Safety
 * `json` must be null or a valid C string; `out` must be null or writable.
 */
enum FcStatus fc_surface_from_json(const char *json, struct FcSurface **out);

/**
 * The unit square torus.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FcStatus fc_surface_unit_torus(struct FcSurface **out);

/**
 * Releases a surface. Null is ignored.
 *
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void fc_surface_free(struct FcSurface *s);

/**
 * `g·s` for `g = [[a, b], [c, d]]` in SL(2,R), as a new handle.
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_surface_apply(const struct FcSurface *s,
                               double a,
                               double b,
                               double c,
                               double d,
                               struct FcSurface **out);

/**
 * Genus of the surface.
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_surface_genus(const struct FcSurface *s, size_t *out);

/**
 * Area of the surface.
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_surface_area(const struct FcSurface *s, double *out);

/**
 * Length of the shortest saddle connection.
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_surface_systole(const struct FcSurface *s, double *out);

/**
 * Saddle connections of norm at most `t`.
 *
 * # Safety
 * `s` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_enumerate(const struct FcSurface *s, double t, struct FcHolonomySet **out);

/**
 * Releases a holonomy set. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle from this library not yet freed.
 */
void fc_holonomy_set_free(struct FcHolonomySet *h);

/**
 * Number of elements, or 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t fc_holonomy_set_len(const struct FcHolonomySet *h);

/**
 * Element `i` in (norm, angle) order.
 *
 * # Safety
 * `h` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_holonomy_set_get(const struct FcHolonomySet *h,
                                  size_t i,
                                  struct FcSaddleConnection *out);

/**
 * Elements of norm at most `t` with direction in `[phi1, phi2)`.
 *
 * # Safety
 * `h` must be null or a live handle; `out` must be null or writable.
 */
enum FcStatus fc_count_sector(const struct FcHolonomySet *h,
                              double t,
                              double phi1,
                              double phi2,
                              size_t *out);

/**
 * Exponent ledger for spectral gap `lambda`; `uniform` selects the
 * uniform-in-direction variant.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FcStatus fc_exponent_ledger(double lambda,
                                 double alpha1,
                                 double alpha2,
                                 bool uniform,
                                 struct FcExponentLedger *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLATCOUNT_H */
