#ifndef QCOMM_H
#define QCOMM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QcommStatus {
  QCOMM_STATUS_OK = 0,
  QCOMM_STATUS_NULL_POINTER = 1,
  QCOMM_STATUS_INVALID_ARGUMENT = 2,
  QCOMM_STATUS_PARSE = 3,
  QCOMM_STATUS_IO = 4,
  QCOMM_STATUS_NUMERICAL = 5,
  QCOMM_STATUS_PANIC = 6,
} QcommStatus;

/**
 * Closeness measure. Passing a value outside the declared variants is undefined behaviour.
 */
typedef enum QcommMeasure {
  QCOMM_MEASURE_TRANSPORT = 0,
  QCOMM_MEASURE_FIDELITY = 1,
  QCOMM_MEASURE_FIDELITY_PHASE_AVG = 2,
  QCOMM_MEASURE_PURITY = 3,
  QCOMM_MEASURE_PURITY_PHASE_AVG = 4,
} QcommMeasure;

/**
 * Time regime. Passing a value outside the declared variants is undefined behaviour.
 */
typedef enum QcommRegime {
  QCOMM_REGIME_SHORT = 0,
  /**
   * Average over `[0, t]`; uses the `t` argument.
   */
  QCOMM_REGIME_FINITE = 1,
  QCOMM_REGIME_INFINITE = 2,
} QcommRegime;

/**
 * Opaque node closeness matrix.
 */
typedef struct QcommCloseness QcommCloseness;

/**
 * Opaque detection result: best partition and its modularity.
 */
typedef struct QcommDetection QcommDetection;

/**
 * Opaque Hermitian Hamiltonian.
 */
typedef struct QcommHamiltonian QcommHamiltonian;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a Hamiltonian from `n*n` row-major entries. `imag` may be null for
 * a real matrix. The matrix must be Hermitian within `tol`.
 *
 * # Safety
 * `real` (and `imag`, if non-null) must point to `n*n` readable doubles.
 */
enum QcommStatus qcomm_hamiltonian_new(size_t n,
                                       const double *real,
                                       const double *imag,
                                       double tol,
                                       struct QcommHamiltonian **out);

/**
 * Loads a Hamiltonian from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum QcommStatus qcomm_hamiltonian_load(const char *path, struct QcommHamiltonian **out);

/**
 * Writes a Hamiltonian as JSON.
 *
 * # Safety
 * `h` must be a live handle and `path` a NUL-terminated string.
 */
enum QcommStatus qcomm_hamiltonian_save(const struct QcommHamiltonian *h, const char *path);

/**
 * One of the six-node toy networks, `variant` in `'a'..='i'`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QcommStatus qcomm_hamiltonian_toy(char variant, uint64_t seed, struct QcommHamiltonian **out);

/**
 * Node count, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t qcomm_hamiltonian_n(const struct QcommHamiltonian *h);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void qcomm_hamiltonian_free(struct QcommHamiltonian *h);

/**
 * Computes a node closeness matrix. `t` is read only for the finite regime;
 * `phases` may be null (all zero) or point to `n` angles.
 *
 * # Safety
 * `h` must be a live handle; `phases` null or `n` readable doubles.
 */
enum QcommStatus qcomm_closeness_compute(const struct QcommHamiltonian *h,
                                         enum QcommMeasure measure,
                                         enum QcommRegime regime,
                                         double t,
                                         const double *phases,
                                         struct QcommCloseness **out);

/**
 * # Safety
 * `c` must be null or a live handle.
 */
size_t qcomm_closeness_n(const struct QcommCloseness *c);

/**
 * Copies the `n*n` entries row-major into `buf` of length `len`.
 *
 * # Safety
 * `c` must be a live handle and `buf` must have `len` writable doubles.
 */
enum QcommStatus qcomm_closeness_copy(const struct QcommCloseness *c, double *buf, size_t len);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void qcomm_closeness_free(struct QcommCloseness *c);

/**
 * Full pipeline: closeness, agglomeration and best modularity level.
 *
 * # Safety
 * As for [`qcomm_closeness_compute`].
 */
enum QcommStatus qcomm_detect(const struct QcommHamiltonian *h,
                              enum QcommMeasure measure,
                              enum QcommRegime regime,
                              double t,
                              const double *phases,
                              struct QcommDetection **out);

/**
 * Copies the community label of each node into `labels` (length `len`).
 *
 * # Safety
 * `d` must be a live handle and `labels` must have `len` writable slots.
 */
enum QcommStatus qcomm_detection_labels(const struct QcommDetection *d, size_t *labels, size_t len);

/**
 * # Safety
 * `d` must be null or a live handle.
 */
size_t qcomm_detection_num_communities(const struct QcommDetection *d);

/**
 * # Safety
 * `d` must be a live handle and `out` writable.
 */
enum QcommStatus qcomm_detection_modularity(const struct QcommDetection *d, double *out);

/**
 * # Safety
 * `d` must be null or a handle not yet freed.
 */
void qcomm_detection_free(struct QcommDetection *d);

/**
 * Normalized mutual information of two labelings of `n` nodes.
 *
 * # Safety
 * `x` and `y` must point to `n` readable labels; `out` must be writable.
 */
enum QcommStatus qcomm_nmi(const size_t *x, const size_t *y, size_t n, double *out);

/**
 * Modularity of a labeling under a closeness matrix; `is_signed` selects the
 * signed variant that accepts negative entries.
 *
 * # Safety
 * `c` must be a live handle, `labels` must hold `n` labels, `out` writable.
 */
enum QcommStatus qcomm_modularity(const struct QcommCloseness *c,
                                  const size_t *labels,
                                  size_t n,
                                  bool is_signed,
                                  double *out);

/**
 * Message of the last failed call on this thread, or null if the last call
 * succeeded. Valid until the next call into the library on this thread.
 */
const char *qcomm_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCOMM_H */
