#ifndef QUTRIT_DSD_H
#define QUTRIT_DSD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of entries in a two-qutrit matrix.
 */
#define QD_MATRIX_LEN 81

typedef enum QdStatus {
  QD_STATUS_OK = 0,
  QD_STATUS_NULL_POINTER = 1,
  QD_STATUS_INVALID_ARGUMENT = 2,
  QD_STATUS_INVALID_STATE = 3,
  QD_STATUS_PARSE_ERROR = 4,
  QD_STATUS_NO_CONVERGENCE = 5,
  QD_STATUS_ACCURACY_LOSS = 6,
  QD_STATUS_NUMERIC_ERROR = 7,
  QD_STATUS_PANIC = 8,
} QdStatus;

typedef enum QdTrajectoryType {
  QD_TRAJECTORY_TYPE_NPT_FOREVER = 0,
  QD_TRAJECTORY_TYPE_ESD_NO_DSD = 1,
  QD_TRAJECTORY_TYPE_DSD_THEN_UNDETECTED = 2,
} QdTrajectoryType;

/**
 * Opaque two-qutrit density matrix.
 */
typedef struct QdDensityMatrix QdDensityMatrix;

/**
 * Trajectory classification. Optional times come with a `has_` flag; the
 * time field is NaN when the flag is false.
 */
typedef struct QdDsdReport {
  bool has_t_n;
  double t_n;
  bool has_t_r;
  double t_r;
  bool has_window;
  double window_start;
  double window_end;
  enum QdTrajectoryType trajectory_type;
  bool entanglement_after_tn_unknown;
  bool initially_ppt;
  bool non_monotone;
  double horizon;
} QdDsdReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qd_version(void);

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next library call on this thread.
 */
const char *qd_last_error_message(void);

/**
 * Horodecki state for `alpha` in `[2, 5]`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QdStatus qd_horodecki_state(double alpha, struct QdDensityMatrix **out);

/**
 * Locally rotated Horodecki state for `alpha` in `[2, 5]`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QdStatus qd_horodecki_state_rotated(double alpha, struct QdDensityMatrix **out);

/**
 * Isotropic state for `p` in `[0, 1]`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QdStatus qd_isotropic_state(double p, struct QdDensityMatrix **out);

/**
 * Validated state from row-major real and imaginary parts; `len` must be 81.
 *
 * # Safety
 * `re` and `im` must point to `len` readable doubles; `out` must be valid
 * for a pointer write.
 */
enum QdStatus qd_density_matrix_from_parts(const double *re,
                                           const double *im,
                                           size_t len,
                                           struct QdDensityMatrix **out);

/**
 * Validated state from the text format (`dim 9` header, one row per line).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for a pointer
 * write.
 */
enum QdStatus qd_density_matrix_parse(const char *text, struct QdDensityMatrix **out);

/**
 * Copies the matrix into row-major `re`/`im` arrays of length `len` (81).
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` must point to `len` writable
 * doubles.
 */
enum QdStatus qd_density_matrix_get(const struct QdDensityMatrix *h,
                                    double *re,
                                    double *im,
                                    size_t len);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void qd_density_matrix_free(struct QdDensityMatrix *h);

/**
 * Closed-form evolution to time `gamma_e * t` with `gamma_u / gamma_e =
 * gamma_ratio`. Writes a new handle.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a pointer write.
 */
enum QdStatus qd_propagate(const struct QdDensityMatrix *h,
                           double t,
                           double gamma_ratio,
                           struct QdDensityMatrix **out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum QdStatus qd_negativity(const struct QdDensityMatrix *h, double tol, double *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum QdStatus qd_ccnr_score(const struct QdDensityMatrix *h, double *out);

/**
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum QdStatus qd_is_ppt(const struct QdDensityMatrix *h, double tol, bool *out);

/**
 * Classifies the trajectory starting from `h` up to `t_max`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be valid for a write.
 */
enum QdStatus qd_classify(const struct QdDensityMatrix *h,
                          double gamma_ratio,
                          double t_max,
                          struct QdDsdReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUTRIT_DSD_H */
