#ifndef POLFLOW_H
#define POLFLOW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PfStability {
  PF_STABILITY_ATTRACTOR = 0,
  PF_STABILITY_REPELLER = 1,
  PF_STABILITY_SADDLE = 2,
  PF_STABILITY_DEGENERATE = 3,
} PfStability;

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_INPUT = 2,
  PF_STATUS_DOMAIN = 3,
  PF_STATUS_NO_CONVERGENCE = 4,
  PF_STATUS_OUT_OF_RANGE = 5,
  PF_STATUS_PANIC = 6,
} PfStatus;

typedef enum PfTerminalReason {
  PF_TERMINAL_REASON_CONVERGED = 0,
  PF_TERMINAL_REASON_MAX_STEPS = 1,
  PF_TERMINAL_REASON_LEFT_DOMAIN = 2,
} PfTerminalReason;

/**
 * A vector field on `η`-coordinates.
 */
typedef struct PfField PfField;

/**
 * Deduplicated fixed points with their classifications.
 */
typedef struct PfFixedPoints PfFixedPoints;

/**
 * A recorded flow trajectory.
 */
typedef struct PfTrajectory PfTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pf_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full message length.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t pf_last_error_message(char *buf, size_t len);

/**
 * POL at the distribution `probs[0..len]`, which may lie on the border.
 *
 * # Safety
 * `probs` must be valid for `len` reads and `out` for one write.
 */
enum PfStatus pf_pol(const double *probs, size_t len, double *out);

/**
 * `I(η)⁻¹ = diag(η) − ηηᵗ` in row-major order into `out[0..n*n]`.
 *
 * # Safety
 * `eta` must be valid for `n` reads and `out` for `n * n` writes.
 */
enum PfStatus pf_fisher_inverse(const double *eta, size_t n, double *out);

/**
 * `grad · I(η)⁻¹` into `out[0..n]`.
 *
 * # Safety
 * `grad` and `eta` must be valid for `n` reads and `out` for `n` writes.
 */
enum PfStatus pf_natural_gradient(const double *grad, const double *eta, size_t n, double *out);

/**
 * Natural-gradient field of POL on `n` coordinates, or the Euclidean
 * gradient when `natural` is false.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum PfStatus pf_field_new_pol(size_t n, bool natural, struct PfField **out);

/**
 * Natural-gradient field of the cubic index with coefficients
 * `coeffs[0..5] = (a, b, c, d, e)` (two coordinates).
 *
 * # Safety
 * `coeffs` must be valid for 5 reads and `out` for one write.
 */
enum PfStatus pf_field_new_cubic(const double *coeffs, struct PfField **out);

/**
 * # Safety
 * `field` must be null or a handle from a `pf_field_new_*` call, freed once.
 */
void pf_field_free(struct PfField *field);

/**
 * Number of coordinates the field acts on.
 *
 * # Safety
 * `field` must be a live handle.
 */
size_t pf_field_dim(const struct PfField *field);

/**
 * Field value at `eta[0..n]` into `out[0..n]`.
 *
 * # Safety
 * `field` must be a live handle, `eta` valid for `n` reads, `out` for `n` writes.
 */
enum PfStatus pf_field_eval(const struct PfField *field, const double *eta, size_t n, double *out);

/**
 * Fixed-step RK4 flow from the interior point `start[0..n]`.
 *
 * A trajectory that stops for a reason other than convergence is still
 * returned; inspect [`pf_trajectory_terminal_reason`].
 *
 * # Safety
 * `field` must be a live handle, `start` valid for `n` reads, `out` for one write.
 */
enum PfStatus pf_flow_integrate(const struct PfField *field,
                                const double *start,
                                size_t n,
                                double dt,
                                double t_max,
                                double stop_tol,
                                struct PfTrajectory **out);

/**
 * # Safety
 * `traj` must be null or a handle from [`pf_flow_integrate`], freed once.
 */
void pf_trajectory_free(struct PfTrajectory *traj);

/**
 * Number of recorded states, including the start.
 *
 * # Safety
 * `traj` must be a live handle.
 */
size_t pf_trajectory_len(const struct PfTrajectory *traj);

/**
 * # Safety
 * `traj` must be a live handle.
 */
enum PfTerminalReason pf_trajectory_terminal_reason(const struct PfTrajectory *traj);

/**
 * Time, index value and state of step `i`; `state` receives `n` values.
 *
 * # Safety
 * `traj` must be a live handle; `time` and `value` null or valid for one
 * write; `state` valid for `n` writes.
 */
enum PfStatus pf_trajectory_step(const struct PfTrajectory *traj,
                                 size_t i,
                                 double *time,
                                 double *value,
                                 double *state,
                                 size_t n);

/**
 * Newton search from a `grid × grid` lattice of seeds on `[lo, hi]²`,
 * keeping roots in the closed simplex.
 *
 * # Safety
 * `field` must be a live two-coordinate handle and `out` valid for one write.
 */
enum PfStatus pf_fixed_points_find(const struct PfField *field,
                                   size_t grid,
                                   double lo,
                                   double hi,
                                   double tol,
                                   struct PfFixedPoints **out);

/**
 * # Safety
 * `points` must be null or a handle from [`pf_fixed_points_find`], freed once.
 */
void pf_fixed_points_free(struct PfFixedPoints *points);

/**
 * # Safety
 * `points` must be a live handle.
 */
size_t pf_fixed_points_count(const struct PfFixedPoints *points);

/**
 * Location (2 values), residual and classification of fixed point `i`.
 *
 * # Safety
 * `points` must be a live handle; `location` valid for 2 writes; `residual`
 * and `stability` null or valid for one write.
 */
enum PfStatus pf_fixed_points_get(const struct PfFixedPoints *points,
                                  size_t i,
                                  double *location,
                                  double *residual,
                                  enum PfStability *stability);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLFLOW_H */
