#ifndef BATHCOOL_H
#define BATHCOOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BcStatus {
  BC_STATUS_OK = 0,
  BC_STATUS_NULL_POINTER = 1,
  BC_STATUS_DOMAIN = 2,
  BC_STATUS_TRUNCATION = 3,
  BC_STATUS_INTEGRATION = 4,
  BC_STATUS_BUFFER_TOO_SMALL = 5,
  BC_STATUS_INVALID_ENUM = 6,
  BC_STATUS_PANIC = 7,
} BcStatus;

/**
 * Closed-form cooling laws.
 */
typedef enum BcLaw {
  BC_LAW_NEWTON = 0,
  BC_LAW_MARKOV = 1,
  BC_LAW_MODIFIED = 2,
} BcLaw;

/**
 * Time dependence of the master-equation rates.
 */
typedef enum BcRateLaw {
  BC_RATE_LAW_CONSTANT_MARKOV = 0,
  BC_RATE_LAW_FEEDBACK = 1,
  BC_RATE_LAW_RAMPED = 2,
} BcRateLaw;

/**
 * Opaque trajectory handle.
 */
typedef struct BcTrajectory BcTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *bc_last_error(void);

/**
 * Mean occupation `1 / (exp(theta0 / t) - 1)`.
 */
enum BcStatus bc_occupation_from_temperature(double t, double theta0, double *out);

/**
 * Temperature `theta0 / ln(1 + 1 / n)`.
 */
enum BcStatus bc_temperature_from_occupation(double n, double theta0, double *out);

/**
 * Value of a closed-form law at time `t`. `law` is a [`BcLaw`].
 */
enum BcStatus bc_evaluate_law(uint32_t law,
                              double x0,
                              double x_r,
                              double gamma,
                              double t,
                              double *out);

/**
 * Time at which half of the initial excess has relaxed.
 */
enum BcStatus bc_half_time(uint32_t law, double gamma, double *out);

/**
 * Time at which the law reaches `target`, strictly between `x0` and `x_r`.
 */
enum BcStatus bc_time_to_value(uint32_t law,
                               double x0,
                               double x_r,
                               double gamma,
                               double target,
                               double *out);

/**
 * Thermal four-point function of ladder operators. `ops` holds four entries,
 * `0` for the lowering and `1` for the raising operator, leftmost first.
 *
 * # Safety
 *
 * `ops` must point to four readable bytes; the out-pointers must be writable.
 */
enum BcStatus bc_wick_four_point(const uint8_t *ops, double n_bar, double *out_re, double *out_im);

/**
 * Integrate the master equation from the number state `level` on `dim`
 * levels. `law` is a [`BcRateLaw`]. On success `*out` owns a new handle.
 */
enum BcStatus bc_integrate_number_state(uint32_t law,
                                        double gamma,
                                        double n_bar_r,
                                        size_t level,
                                        size_t dim,
                                        double dt,
                                        double t_end,
                                        struct BcTrajectory **out);

/**
 * Integrate the master equation from a thermal state with mean `n_bar_s0`.
 */
enum BcStatus bc_integrate_thermal_state(uint32_t law,
                                         double gamma,
                                         double n_bar_r,
                                         double n_bar_s0,
                                         size_t dim,
                                         double dt,
                                         double t_end,
                                         struct BcTrajectory **out);

/**
 * Evolve level populations `p[0..len]` with the ladder equations.
 *
 * # Safety
 *
 * `p` must point to `len` readable values and `out` must be writable.
 */
enum BcStatus bc_evolve_populations(uint32_t law,
                                    double gamma,
                                    double n_bar_r,
                                    const double *p,
                                    size_t len,
                                    double dt,
                                    double t_end,
                                    struct BcTrajectory **out);

/**
 * Number of recorded rows; 0 for a null handle.
 *
 * # Safety
 *
 * `traj` must be null or a live handle from this library.
 */
size_t bc_trajectory_len(const struct BcTrajectory *traj);

/**
 * Copy the sample times into `buf`, which must hold `bc_trajectory_len` values.
 *
 * # Safety
 *
 * `traj` must be null or a live handle; `buf` must have room for `cap` values.
 */
enum BcStatus bc_trajectory_copy_times(const struct BcTrajectory *traj, double *buf, size_t cap);

/**
 * # Safety
 *
 * `traj` must be null or a live handle; `buf` must have room for `cap` values.
 */
enum BcStatus bc_trajectory_copy_n_bar(const struct BcTrajectory *traj, double *buf, size_t cap);

/**
 * # Safety
 *
 * `traj` must be null or a live handle; `buf` must have room for `cap` values.
 */
enum BcStatus bc_trajectory_copy_trace(const struct BcTrajectory *traj, double *buf, size_t cap);

/**
 * # Safety
 *
 * `traj` must be null or a live handle; `buf` must have room for `cap` values.
 */
enum BcStatus bc_trajectory_copy_purity(const struct BcTrajectory *traj, double *buf, size_t cap);

/**
 * Release a handle. Null is accepted.
 *
 * # Safety
 *
 * `traj` must be null or a handle from this library that has not been freed.
 */
void bc_trajectory_free(struct BcTrajectory *traj);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BATHCOOL_H */
