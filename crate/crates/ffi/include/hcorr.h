#ifndef HCORR_H
#define HCORR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum HcorrStatus {
  HCORR_STATUS_OK = 0,
  HCORR_STATUS_NULL_POINTER = 1,
  HCORR_STATUS_INVALID_ARGUMENT = 2,
  HCORR_STATUS_COINCIDENT_EIGENVALUES = 3,
  HCORR_STATUS_POLE = 4,
  HCORR_STATUS_UNSUPPORTED = 5,
  HCORR_STATUS_NUMERICAL = 6,
  HCORR_STATUS_PANIC = 7,
} HcorrStatus;

typedef enum HcorrFamily {
  HCORR_FAMILY_O_EVEN = 0,
  HCORR_FAMILY_O_ODD = 1,
  HCORR_FAMILY_SP = 2,
  HCORR_FAMILY_U = 3,
} HcorrFamily;

/**
 * Eigenvalues of one Cartan element together with its group family.
 */
typedef struct HcorrSpectrum HcorrSpectrum;

/**
 * Values over the `(2R)!` basis classes, indexed by the Lehmer rank of the class permutation.
 */
typedef struct HcorrVector HcorrVector;

typedef struct HcorrComplex {
  double re;
  double im;
} HcorrComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread. The pointer stays valid until the next
 * failing call on the same thread; do not free it.
 */
const char *hcorr_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hcorr_version(void);

/**
 * Creates a spectrum of rank `len`; the family's rank is taken from `len`.
 *
 * # Safety
 * `eigenvalues` must be valid for `len` reads and `out_spectrum` for one write.
 */
enum HcorrStatus hcorr_spectrum_new(enum HcorrFamily family,
                                    const double *eigenvalues,
                                    size_t len,
                                    struct HcorrSpectrum **out_spectrum);

/**
 * # Safety
 * `spectrum` must be null or come from [`hcorr_spectrum_new`] and not be used afterwards.
 */
void hcorr_spectrum_free(struct HcorrSpectrum *spectrum);

/**
 * Rank of the spectrum, or 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle.
 */
size_t hcorr_spectrum_rank(const struct HcorrSpectrum *spectrum);

/**
 * Haar-normalized partition function `⟨exp(-γ tr(X Ω Y Ω⁻¹))⟩`.
 *
 * # Safety
 * `x` and `y` must be live handles and `out_value` valid for one write.
 */
enum HcorrStatus hcorr_partition(const struct HcorrSpectrum *x,
                                 const struct HcorrSpectrum *y,
                                 double gamma,
                                 double *out_value);

/**
 * Haar Monte Carlo estimate of the partition function, deterministic in `seed`.
 *
 * # Safety
 * `x` and `y` must be live handles; `out_mean` and `out_stderr` valid for one write each.
 */
enum HcorrStatus hcorr_mc_partition(const struct HcorrSpectrum *x,
                                    const struct HcorrSpectrum *y,
                                    double gamma,
                                    uint64_t samples,
                                    uint64_t seed,
                                    double *out_mean,
                                    double *out_stderr);

/**
 * Normalized correlation vector at `r` pairs of spectral points, for any `γ > 0`.
 *
 * # Safety
 * `x` and `y` must be live handles, `x_points` and `y_points` valid for `r` reads and
 * `out_vector` for one write.
 */
enum HcorrStatus hcorr_correlator(const struct HcorrSpectrum *x,
                                  const struct HcorrSpectrum *y,
                                  const struct HcorrComplex *x_points,
                                  const struct HcorrComplex *y_points,
                                  size_t r,
                                  double gamma,
                                  struct HcorrVector **out_vector);

/**
 * Number of entries, or 0 for a null handle.
 *
 * # Safety
 * `vector` must be null or a live handle.
 */
size_t hcorr_vector_len(const struct HcorrVector *vector);

/**
 * # Safety
 * `vector` must be a live handle and `out_value` valid for one write.
 */
enum HcorrStatus hcorr_vector_get(const struct HcorrVector *vector,
                                  size_t index,
                                  struct HcorrComplex *out_value);

/**
 * # Safety
 * `vector` must be null or come from this library and not be used afterwards.
 */
void hcorr_vector_free(struct HcorrVector *vector);

/**
 * Writes the one-based one-line permutation of class `index` at rank `r` into `buf`,
 * which must hold `2r` entries.
 *
 * # Safety
 * `buf` must be valid for `capacity` writes.
 */
enum HcorrStatus hcorr_class_permutation(size_t r, size_t index, size_t *buf, size_t capacity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HCORR_H */
