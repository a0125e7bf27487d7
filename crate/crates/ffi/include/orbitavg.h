#ifndef ORBITAVG_H
#define ORBITAVG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum OrbitavgStatus {
  ORBITAVG_STATUS_OK = 0,
  ORBITAVG_STATUS_NULL_POINTER = 1,
  ORBITAVG_STATUS_INVALID_UTF8 = 2,
  ORBITAVG_STATUS_PARSE = 3,
  ORBITAVG_STATUS_DIMENSION_MISMATCH = 4,
  ORBITAVG_STATUS_FRAME_MISMATCH = 5,
  ORBITAVG_STATUS_PRECONDITION = 6,
  ORBITAVG_STATUS_NUMERICAL = 7,
  ORBITAVG_STATUS_IO = 8,
  ORBITAVG_STATUS_PANIC = 9,
} OrbitavgStatus;

/**
 * Opaque polynomial symbol.
 */
typedef struct OrbitavgPoly OrbitavgPoly;

/**
 * Opaque list of complex eigenvalues, sorted by real then imaginary part.
 */
typedef struct OrbitavgSpectrum OrbitavgSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next failing call.
 */
const char *orbitavg_last_error(void);

void orbitavg_clear_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void orbitavg_string_free(char *s);

/**
 * Parse an expression such as `"x1^2 + 3/2*k1*x2"` in `n` degrees of freedom
 * (`n = 0` infers it from the variables used).
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_poly_parse(const char *expr, size_t n, struct OrbitavgPoly **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_poly_from_json(const char *text, struct OrbitavgPoly **out);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_poly_to_json(const struct OrbitavgPoly *p, char **out);

/**
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_poly_to_expr(const struct OrbitavgPoly *p, char **out);

/**
 * # Safety
 * `a` and `b` must be live handles and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_poly_equal(const struct OrbitavgPoly *a,
                                        const struct OrbitavgPoly *b,
                                        bool *out);

/**
 * # Safety
 * `p` must be null or a handle from this library that has not been freed.
 */
void orbitavg_poly_free(struct OrbitavgPoly *p);

/**
 * Trajectory average of `f` under the flow with frequencies `lambda[0..n]`.
 *
 * # Safety
 * `lambda` must point to `n` integers; `f` must be a live handle; `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_average(const int64_t *lambda,
                                     size_t n,
                                     const struct OrbitavgPoly *f,
                                     struct OrbitavgPoly **out);

/**
 * Second averaged correction `⟨s⟩` for `p + iεq + ε²r`.
 *
 * # Safety
 * As [`orbitavg_average`].
 */
enum OrbitavgStatus orbitavg_second_correction(const int64_t *lambda,
                                               size_t n,
                                               const struct OrbitavgPoly *q,
                                               const struct OrbitavgPoly *r,
                                               struct OrbitavgPoly **out);

/**
 * Barrier-top function for `p₂ + p₃ + p₄`.
 *
 * # Safety
 * As [`orbitavg_average`].
 */
enum OrbitavgStatus orbitavg_barrier_s(const int64_t *lambda,
                                       size_t n,
                                       const struct OrbitavgPoly *p3,
                                       const struct OrbitavgPoly *p4,
                                       struct OrbitavgPoly **out);

/**
 * Average of `q` over great circles of the unit sphere.
 *
 * # Safety
 * `q` must be a live handle and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_sphere_radon(const struct OrbitavgPoly *q, struct OrbitavgPoly **out);

/**
 * Second correction on the sphere; `sigma` receives the form in `(x, ξ)`,
 * `reduced` the form on the sphere of oriented great circles.
 *
 * # Safety
 * `q` must be a live handle; `sigma` and `reduced` valid pointers.
 */
enum OrbitavgStatus orbitavg_sphere_second_correction(const struct OrbitavgPoly *q,
                                                      struct OrbitavgPoly **sigma,
                                                      struct OrbitavgPoly **reduced);

/**
 * Eigenvalues of `−h²Δ + iεq` on spherical harmonics of degree
 * `l_min − pad ..= l_max + pad`.
 *
 * # Safety
 * `q` must be a live handle and `out` a valid pointer.
 */
enum OrbitavgStatus orbitavg_sphere_spectrum(double h,
                                             double epsilon,
                                             const struct OrbitavgPoly *q,
                                             uint32_t l_min,
                                             uint32_t l_max,
                                             uint32_t pad,
                                             struct OrbitavgSpectrum **out);

/**
 * Number of eigenvalues in a spectrum (0 for a null handle).
 *
 * # Safety
 * `s` must be null or a live handle.
 */
size_t orbitavg_spectrum_len(const struct OrbitavgSpectrum *s);

/**
 * # Safety
 * `s` must be a live handle; `re` and `im` valid pointers.
 */
enum OrbitavgStatus orbitavg_spectrum_get(const struct OrbitavgSpectrum *s,
                                          size_t i,
                                          double *re,
                                          double *im);

/**
 * # Safety
 * `s` must be null or a handle from this library that has not been freed.
 */
void orbitavg_spectrum_free(struct OrbitavgSpectrum *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBITAVG_H */
