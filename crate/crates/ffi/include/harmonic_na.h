#ifndef HARMONIC_NA_H
#define HARMONIC_NA_H

#include <stddef.h>
#include <stdint.h>

/**
 * Result codes.
 */
typedef enum HnaStatus {
  HNA_STATUS_OK = 0,
  HNA_STATUS_NULL_POINTER = 1,
  HNA_STATUS_INVALID_ARGUMENT = 2,
  HNA_STATUS_DIMENSION_MISMATCH = 3,
  HNA_STATUS_DOMAIN = 4,
  HNA_STATUS_NON_CONVERGENCE = 5,
  HNA_STATUS_QUADRATURE = 6,
  HNA_STATUS_UNSUPPORTED_DIMENSION = 7,
  HNA_STATUS_BUFFER_TOO_SMALL = 8,
  HNA_STATUS_PANIC = 9,
  HNA_STATUS_OTHER = 10,
} HnaStatus;

/**
 * Opaque H-type algebra.
 */
typedef struct HnaAlgebra HnaAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hna_version(void);

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes) and returns its full length in bytes.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
uintptr_t hna_last_error_message(char *buf, uintptr_t len);

/**
 * Builds the algebra with center dimension `k` and `b` Clifford modules.
 *
 * # Safety
 * `out` must be valid for one pointer write.
 */
enum HnaStatus hna_algebra_new(uintptr_t k, uintptr_t b, struct HnaAlgebra **out);

/**
 * Releases an algebra. Null is ignored.
 *
 * # Safety
 * `alg` must come from [`hna_algebra_new`] and not be used afterwards.
 */
void hna_algebra_free(struct HnaAlgebra *alg);

/**
 * Dimensions `m = dim v`, `k = dim z`, `n = m + k + 1` and `Q = m/2 + k`.
 *
 * # Safety
 * `alg` must be a live handle; outputs must be valid or null (skipped).
 */
enum HnaStatus hna_algebra_dims(const struct HnaAlgebra *alg,
                                uintptr_t *m,
                                uintptr_t *k,
                                uintptr_t *n,
                                double *q);

/**
 * Geodesic distance between two points of length `len = n`.
 *
 * # Safety
 * `p`, `q` must be valid for `len` reads and `out` for one write.
 */
enum HnaStatus hna_distance(const struct HnaAlgebra *alg,
                            const double *p,
                            const double *q,
                            uintptr_t len,
                            double *out);

/**
 * Cayley transform of `p` into the unit ball, written as `[X'…, Z'…, l']`.
 *
 * # Safety
 * `p` must be valid for `len` reads and `out` for `out_len` writes.
 */
enum HnaStatus hna_cayley(const struct HnaAlgebra *alg,
                          const double *p,
                          uintptr_t len,
                          double *out,
                          uintptr_t out_len);

/**
 * `φ_λ(r)` for complex `λ`.
 *
 * # Safety
 * `out_re`, `out_im` must be valid for one write each.
 */
enum HnaStatus hna_spherical_phi(const struct HnaAlgebra *alg,
                                 double lambda_re,
                                 double lambda_im,
                                 double r,
                                 double *out_re,
                                 double *out_im);

/**
 * Poisson kernel `P_a(X, Z)` with `X` of length `m` and `Z` of length `k`.
 *
 * # Safety
 * `x`, `z` must be valid for `x_len`, `z_len` reads; `out` for one write.
 */
enum HnaStatus hna_poisson_kernel(const struct HnaAlgebra *alg,
                                  double a,
                                  const double *x,
                                  uintptr_t x_len,
                                  const double *z,
                                  uintptr_t z_len,
                                  double *out);

/**
 * Plancherel density `|c(λ)|^{-2}` at real `λ`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum HnaStatus hna_plancherel_density(const struct HnaAlgebra *alg, double lambda, double *out);

/**
 * `J_{ν+1/2}(z)` for integer `ν ≥ 0` and `z > 0`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum HnaStatus hna_bessel_half_integer(uint32_t nu, double z, double *out);

/**
 * Slow-decrease check of `λ ↦ φ_λ(t)` with the witness `(A, B, C, D)` on
 * `[ξ_min, ξ_max]`. `pass` receives 1 or 0, `margin` the smallest log ratio
 * and `worst_xi` where it occurs.
 *
 * # Safety
 * Output pointers must be valid or null (skipped).
 */
enum HnaStatus hna_slow_decrease_phi(const struct HnaAlgebra *alg,
                                     double t,
                                     double a,
                                     double b,
                                     double c,
                                     double d,
                                     double xi_min,
                                     double xi_max,
                                     int32_t *pass,
                                     double *margin,
                                     double *worst_xi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONIC_NA_H */
