#ifndef SYMSEP_H
#define SYMSEP_H

/* Generated by cbindgen; edit src/lib.rs instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. `SYMSEP_STATUS_OK` is zero; every failure is a
 * distinct nonzero code.
 */
typedef enum SymsepStatus {
  SYMSEP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SYMSEP_STATUS_NULL_POINTER = 1,
  /**
   * An argument value is invalid (zero size, odd set size, bad range).
   */
  SYMSEP_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The requested closed form is not claimed at these parameters.
   */
  SYMSEP_STATUS_OUT_OF_REGIME = 3,
  /**
   * Buffer lengths do not match the shape implied by the handle.
   */
  SYMSEP_STATUS_DIMENSION_MISMATCH = 4,
  /**
   * Evaluation hit a pole of a rational map.
   */
  SYMSEP_STATUS_POLE = 5,
  /**
   * An input/output operation failed.
   */
  SYMSEP_STATUS_IO = 6,
} SymsepStatus;

/**
 * Seeded Markov chain over eigenvalue angles; yields one angle vector per
 * call to [`symsep_sampler_next`].
 */
typedef struct SymsepSampler SymsepSampler;

/**
 * Hard-function parameters `(N, D, d̂)` with the cached normalization.
 */
typedef struct SymsepSpec SymsepSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a spec with the derived effective dimension
 * `d̂ = min(D, ⌊√(N/2)⌋)` and writes the handle to `out`.
 *
 * # Safety
 * `out` must be a valid pointer to a `SymsepSpec*` slot. On success the
 * caller owns the handle and must release it with [`symsep_spec_free`].
 */
enum SymsepStatus symsep_spec_new(size_t n, size_t d, struct SymsepSpec **out);

/**
 * Creates a spec with an explicit effective dimension `1 ≤ d̂ ≤ D`.
 *
 * # Safety
 * Same contract as [`symsep_spec_new`].
 */
enum SymsepStatus symsep_spec_with_d_hat(size_t n,
                                         size_t d,
                                         uint32_t d_hat,
                                         struct SymsepSpec **out);

/**
 * Releases a spec handle; a null pointer is ignored.
 *
 * # Safety
 * `spec` must be null or a handle returned by a spec constructor that has
 * not been freed yet.
 */
void symsep_spec_free(struct SymsepSpec *spec);

/**
 * Writes the set size `N`.
 *
 * # Safety
 * `spec` must be a live spec handle; `out` must point to a writable slot.
 */
enum SymsepStatus symsep_spec_n(const struct SymsepSpec *spec, size_t *out);

/**
 * Writes the ambient dimension `D`.
 *
 * # Safety
 * `spec` must be a live spec handle; `out` must point to a writable slot.
 */
enum SymsepStatus symsep_spec_d(const struct SymsepSpec *spec, size_t *out);

/**
 * Writes the effective dimension `d̂`.
 *
 * # Safety
 * `spec` must be a live spec handle; `out` must point to a writable slot.
 */
enum SymsepStatus symsep_spec_d_hat(const struct SymsepSpec *spec, uint32_t *out);

/**
 * Writes whether the norm identities are claimed at these parameters
 * (`2d̂² ≤ N`).
 *
 * # Safety
 * `spec` must be a live spec handle; `out` must point to a writable slot.
 */
enum SymsepStatus symsep_spec_in_regime(const struct SymsepSpec *spec, bool *out);

/**
 * Writes the coefficient-formula norm `‖g‖²`; fails with
 * `SYMSEP_STATUS_OUT_OF_REGIME` when the identity is not claimed.
 *
 * # Safety
 * `spec` must be a live spec handle; `out` must point to a writable slot.
 */
enum SymsepStatus symsep_spec_a_norm_sq(const struct SymsepSpec *spec, double *out);

/**
 * Evaluates the hard function `g` on a `D × 2N` complex matrix supplied
 * as parallel row-major real and imaginary buffers of length `len = D·2N`.
 *
 * # Safety
 * `spec` must be a live spec handle; `re` and `im` must point to `len`
 * readable doubles; `out_re` and `out_im` must point to writable slots.
 */
enum SymsepStatus symsep_g_eval(const struct SymsepSpec *spec,
                                const double *re,
                                const double *im,
                                size_t len,
                                double *out_re,
                                double *out_im);

/**
 * Evaluates the normalized hard function `g' = g / ‖g‖` with the same
 * calling convention as [`symsep_g_eval`].
 *
 * # Safety
 * Same contract as [`symsep_g_eval`].
 */
enum SymsepStatus symsep_g_prime_eval(const struct SymsepSpec *spec,
                                      const double *re,
                                      const double *im,
                                      size_t len,
                                      double *out_re,
                                      double *out_im);

/**
 * Evaluates the degree-`t` Blaschke truncation `μ̂_t` at `ξ`.
 *
 * # Safety
 * `out_re` and `out_im` must point to writable slots.
 */
enum SymsepStatus symsep_mobius_trunc(uint32_t t,
                                      double xi_re,
                                      double xi_im,
                                      double *out_re,
                                      double *out_im);

/**
 * Writes the one-dimensional width-`l` bound `max(0, 1 − 2l/n)`; the set
 * size `n` must be even and positive.
 *
 * # Safety
 * `out` must point to a writable slot.
 */
enum SymsepStatus symsep_bound_1d(uint32_t n, uint32_t l, double *out);

/**
 * Writes the flat-spectrum bound `1/6 − l/(6T)` and the pool size `T`;
 * fails with `SYMSEP_STATUS_OUT_OF_REGIME` unless `min(N/2, D−1) ≥ 2` and
 * with `SYMSEP_STATUS_INVALID_ARGUMENT` when `T` overflows 64 bits.
 *
 * # Safety
 * `out_bound` and `out_pool` must point to writable slots.
 */
enum SymsepStatus symsep_bound_simple_highd(uint32_t n,
                                            uint32_t d,
                                            uint64_t l,
                                            double *out_bound,
                                            uint64_t *out_pool);

/**
 * Writes the hard-function width-`l` bound, both the exact truncation
 * value and its closed-form estimate, clamped at zero.
 *
 * # Safety
 * `spec` must be a live spec handle; `out_exact` and `out_closed` must
 * point to writable slots.
 */
enum SymsepStatus symsep_bound_hard_highd(const struct SymsepSpec *spec,
                                          uint32_t l,
                                          double *out_exact,
                                          double *out_closed);

/**
 * Writes the width threshold `(1/24)·N^{−2}·(16/15)^{2d̂}` below which the
 * hard bound stays at least `1/12`.
 *
 * # Safety
 * `out` must point to a writable slot.
 */
enum SymsepStatus symsep_hard_threshold(size_t n, uint32_t d_hat, double *out);

/**
 * Default chain burn-in for set size `n`, in sweeps.
 */
size_t symsep_default_burn_in(size_t n);

/**
 * Default chain thinning for set size `n`, in sweeps.
 */
size_t symsep_default_thin(size_t n);

/**
 * Creates a seeded eigenvalue-angle sampler for set size `n ≥ 1` and
 * writes the handle to `out`. `burn_in` sweeps run immediately; every
 * subsequent draw advances the chain by `thin` sweeps. The same seed
 * always reproduces the same stream.
 *
 * # Safety
 * `out` must be a valid pointer to a `SymsepSampler*` slot. On success
 * the caller owns the handle and must release it with
 * [`symsep_sampler_free`].
 */
enum SymsepStatus symsep_sampler_new(size_t n,
                                     uint64_t seed,
                                     size_t burn_in,
                                     size_t thin,
                                     struct SymsepSampler **out);

/**
 * Draws the next angle vector into `out_theta`, which must hold exactly
 * `n` doubles; angles are in `[0, 2π)`.
 *
 * # Safety
 * `sampler` must be a live sampler handle not shared across threads;
 * `out_theta` must point to `len` writable doubles.
 */
enum SymsepStatus symsep_sampler_next(struct SymsepSampler *sampler, double *out_theta, size_t len);

/**
 * Releases a sampler handle; a null pointer is ignored.
 *
 * # Safety
 * `sampler` must be null or a handle returned by [`symsep_sampler_new`]
 * that has not been freed yet.
 */
void symsep_sampler_free(struct SymsepSampler *sampler);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SYMSEP_H */
