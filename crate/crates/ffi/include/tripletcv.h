#ifndef TRIPLETCV_H
#define TRIPLETCV_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TcvStatus {
  TCV_STATUS_OK = 0,
  TCV_STATUS_NULL_POINTER = 1,
  TCV_STATUS_INVALID_ARGUMENT = 2,
  TCV_STATUS_INVALID_STATE = 3,
  TCV_STATUS_DEGENERATE_INPUT = 4,
  TCV_STATUS_INTERNAL_CONSISTENCY = 5,
  TCV_STATUS_BUFFER_TOO_SMALL = 6,
  TCV_STATUS_PANIC = 7,
} TcvStatus;

/**
 * Opaque multimode Gaussian state.
 */
typedef struct TcvGaussianState TcvGaussianState;

/**
 * One squeezed input beam, angles in degrees.
 */
typedef struct TcvInput {
  double squeezing_db;
  double antisqueezing_db;
  double theta_sq_deg;
} TcvInput;

/**
 * Experiment parameters. `combiner_sign` is `+1` for sums and `-1` for differences.
 */
typedef struct TcvExperimentConfig {
  struct TcvInput input_a;
  struct TcvInput input_b;
  double transmittance;
  double relative_phase_deg;
  double visibility;
  double combiner_gain;
  int32_t combiner_sign;
} TcvExperimentConfig;

/**
 * Individual-beam noise and two-beam correlations, all in dB re shot noise.
 */
typedef struct TcvFig2 {
  double individual_c_db;
  double individual_d_db;
  double sum_db;
  double difference_db;
} TcvFig2;

typedef struct TcvSweepRow {
  double phi1_deg;
  double phi2_deg;
  double variance_linear;
  double variance_db;
} TcvSweepRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *tcv_version(void);

/**
 * Copies the calling thread's last error message into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t tcv_last_error(char *buf, size_t len);

/**
 * Creates the `n_modes`-mode vacuum.
 *
 * # Safety
 * `out` must be a valid pointer to a handle slot.
 */
enum TcvStatus tcv_state_vacuum(size_t n_modes, struct TcvGaussianState **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `state` must be null or a handle from this library that has not been freed.
 */
void tcv_state_free(struct TcvGaussianState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` a valid pointer.
 */
enum TcvStatus tcv_state_n_modes(const struct TcvGaussianState *state, size_t *out);

/**
 * Copies the `2n × 2n` covariance matrix, row-major, into `out`.
 *
 * # Safety
 * `state` must be a live handle and `out` must point to `len` writable doubles.
 */
enum TcvStatus tcv_state_covariance(const struct TcvGaussianState *state, double *out, size_t len);

/**
 * Squeezes `mode` by `r` along the quadrature at `angle` (radians), in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum TcvStatus tcv_state_squeeze(struct TcvGaussianState *state,
                                 size_t mode,
                                 double r,
                                 double angle);

/**
 * Rotates the phase of `mode` by `angle` radians, in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum TcvStatus tcv_state_phase_rotate(struct TcvGaussianState *state, size_t mode, double angle);

/**
 * Mixes modes `i` and `j` on a beamsplitter of power transmittance `t` and
 * relative phase `phase` (radians), in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum TcvStatus tcv_state_beamsplit(struct TcvGaussianState *state,
                                   size_t i,
                                   size_t j,
                                   double t,
                                   double phase);

/**
 * Pure loss on `mode` with power transmittance `eta`, in place.
 *
 * # Safety
 * `state` must be a live handle.
 */
enum TcvStatus tcv_state_loss(struct TcvGaussianState *state, size_t mode, double eta);

/**
 * Variance of `Σ weights[k] · X_{modes[k]}(phases[k])`.
 *
 * # Safety
 * `state` must be a live handle; `modes`, `phases` and `weights` must each point to
 * `n_terms` readable elements; `out` must be a valid pointer.
 */
enum TcvStatus tcv_state_variance(const struct TcvGaussianState *state,
                                  const size_t *modes,
                                  const double *phases,
                                  const double *weights,
                                  size_t n_terms,
                                  double *out);

/**
 * Fills `out[24]` with the invariance table, row-major: rows Ψ⁻, Ψ⁺, Φ⁻, Φ⁺;
 * columns UxUx, UyUy, UzUz, UxUx*, UyUy*, UzUz*. `1` means invariant.
 *
 * # Safety
 * `out` must point to 24 writable bytes.
 */
enum TcvStatus tcv_bell_table(uint8_t *out);

/**
 * Direction the second qubit is found along when the first is found along `n`.
 * `state_index` follows the table row order (0 = Ψ⁻ … 3 = Φ⁺).
 *
 * # Safety
 * `n` must point to 3 readable doubles and `out` to 3 writable doubles.
 */
enum TcvStatus tcv_bell_correlated_direction(uint32_t state_index, const double *n, double *out);

/**
 * Writes the measured setup's parameters.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TcvStatus tcv_config_measured(struct TcvExperimentConfig *out);

/**
 * # Safety
 * `config` and `out` must be valid pointers.
 */
enum TcvStatus tcv_fig2(const struct TcvExperimentConfig *config, struct TcvFig2 *out);

/**
 * Angle sweep in degrees. `mirror == 0` scans `φ₁` with `φ₂ = phi2_deg`; otherwise
 * `φ₂ = −φ₁` are scanned together. Writes at most `capacity` rows and stores the
 * full row count in `out_len`; returns `BUFFER_TOO_SMALL` if they did not all fit.
 *
 * # Safety
 * `config` and `out_len` must be valid pointers; `rows` must point to `capacity`
 * writable rows (it may be null when `capacity` is zero).
 */
enum TcvStatus tcv_sweep(const struct TcvExperimentConfig *config,
                         int32_t mirror,
                         double phi2_deg,
                         double start_deg,
                         double stop_deg,
                         double step_deg,
                         struct TcvSweepRow *rows,
                         size_t capacity,
                         size_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIPLETCV_H */
