//! C interface to the certification library.
//!
//! The surface follows three conventions. Handles are opaque: a
//! [`SymsepSpec`] or [`SymsepSampler`] is created by a `*_new` function,
//! passed back by pointer, and released by the matching `*_free`. Every
//! fallible call returns a [`SymsepStatus`] and writes its result through
//! out-pointers, so the header carries no Rust types. Complex matrices
//! cross the boundary as two parallel `double` buffers (real and imaginary
//! parts) in row-major order.
//!
//! The generated header lives at `include/symsep.h` and is refreshed by the
//! build script.

use num_complex::Complex64;
use symsep::bounds::{bound_1d, bound_hard_highd, bound_simple_highd, hard_threshold};
use symsep::hardfn::{g_a_norm_sq, g_eval, g_prime_eval, mobius_trunc, HardFnSpec};
use symsep::sampling::{
    cue_sampler, default_burn_in, default_thin, substream, CueSampler, SetInput,
};
use symsep::Error;

// ─── Status codes ──────────────────────────────────────────────────────

/// Outcome of a call. `SYMSEP_STATUS_OK` is zero; every failure is a
/// distinct nonzero code.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymsepStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument value is invalid (zero size, odd set size, bad range).
    InvalidArgument = 2,
    /// The requested closed form is not claimed at these parameters.
    OutOfRegime = 3,
    /// Buffer lengths do not match the shape implied by the handle.
    DimensionMismatch = 4,
    /// Evaluation hit a pole of a rational map.
    Pole = 5,
    /// An input/output operation failed.
    Io = 6,
}

fn status_of(err: &Error) -> SymsepStatus {
    match err {
        Error::OutOfRegime(_) => SymsepStatus::OutOfRegime,
        Error::DimensionMismatch(_) => SymsepStatus::DimensionMismatch,
        Error::InvalidArgument(_) => SymsepStatus::InvalidArgument,
        Error::Pole(_) => SymsepStatus::Pole,
        Error::Io(_) => SymsepStatus::Io,
    }
}

// ─── Opaque handles ────────────────────────────────────────────────────

/// Hard-function parameters `(N, D, d̂)` with the cached normalization.
pub struct SymsepSpec {
    inner: HardFnSpec,
}

/// Seeded Markov chain over eigenvalue angles; yields one angle vector per
/// call to [`symsep_sampler_next`].
pub struct SymsepSampler {
    inner: CueSampler,
    n: usize,
}

// ─── Spec lifecycle ────────────────────────────────────────────────────

/// Creates a spec with the derived effective dimension
/// `d̂ = min(D, ⌊√(N/2)⌋)` and writes the handle to `out`.
///
/// # Safety
/// `out` must be a valid pointer to a `SymsepSpec*` slot. On success the
/// caller owns the handle and must release it with [`symsep_spec_free`].
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_new(
    n: usize,
    d: usize,
    out: *mut *mut SymsepSpec,
) -> SymsepStatus {
    if out.is_null() {
        return SymsepStatus::NullPointer;
    }
    match HardFnSpec::new(n, d) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SymsepSpec { inner }));
            SymsepStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Creates a spec with an explicit effective dimension `1 ≤ d̂ ≤ D`.
///
/// # Safety
/// Same contract as [`symsep_spec_new`].
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_with_d_hat(
    n: usize,
    d: usize,
    d_hat: u32,
    out: *mut *mut SymsepSpec,
) -> SymsepStatus {
    if out.is_null() {
        return SymsepStatus::NullPointer;
    }
    match HardFnSpec::with_d_hat(n, d, d_hat) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SymsepSpec { inner }));
            SymsepStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a spec handle; a null pointer is ignored.
///
/// # Safety
/// `spec` must be null or a handle returned by a spec constructor that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_free(spec: *mut SymsepSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Writes the set size `N`.
///
/// # Safety
/// `spec` must be a live spec handle; `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_n(spec: *const SymsepSpec, out: *mut usize) -> SymsepStatus {
    if spec.is_null() || out.is_null() {
        return SymsepStatus::NullPointer;
    }
    *out = (*spec).inner.n();
    SymsepStatus::Ok
}

/// Writes the ambient dimension `D`.
///
/// # Safety
/// `spec` must be a live spec handle; `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_d(spec: *const SymsepSpec, out: *mut usize) -> SymsepStatus {
    if spec.is_null() || out.is_null() {
        return SymsepStatus::NullPointer;
    }
    *out = (*spec).inner.d();
    SymsepStatus::Ok
}

/// Writes the effective dimension `d̂`.
///
/// # Safety
/// `spec` must be a live spec handle; `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_d_hat(
    spec: *const SymsepSpec,
    out: *mut u32,
) -> SymsepStatus {
    if spec.is_null() || out.is_null() {
        return SymsepStatus::NullPointer;
    }
    *out = (*spec).inner.d_hat();
    SymsepStatus::Ok
}

/// Writes whether the norm identities are claimed at these parameters
/// (`2d̂² ≤ N`).
///
/// # Safety
/// `spec` must be a live spec handle; `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_in_regime(
    spec: *const SymsepSpec,
    out: *mut bool,
) -> SymsepStatus {
    if spec.is_null() || out.is_null() {
        return SymsepStatus::NullPointer;
    }
    *out = (*spec).inner.in_regime();
    SymsepStatus::Ok
}

/// Writes the coefficient-formula norm `‖g‖²`; fails with
/// `SYMSEP_STATUS_OUT_OF_REGIME` when the identity is not claimed.
///
/// # Safety
/// `spec` must be a live spec handle; `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_spec_a_norm_sq(
    spec: *const SymsepSpec,
    out: *mut f64,
) -> SymsepStatus {
    if spec.is_null() || out.is_null() {
        return SymsepStatus::NullPointer;
    }
    match g_a_norm_sq(&(*spec).inner) {
        Ok(v) => {
            *out = v;
            SymsepStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

// ─── Evaluation ────────────────────────────────────────────────────────

unsafe fn eval_split(
    spec: *const SymsepSpec,
    re: *const f64,
    im: *const f64,
    len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    f: impl Fn(&HardFnSpec, &SetInput) -> symsep::Result<Complex64>,
) -> SymsepStatus {
    if spec.is_null() || re.is_null() || im.is_null() || out_re.is_null() || out_im.is_null() {
        return SymsepStatus::NullPointer;
    }
    let inner = &(*spec).inner;
    let (rows, cols) = (inner.d(), 2 * inner.n());
    if len != rows * cols {
        return SymsepStatus::DimensionMismatch;
    }
    let x = SetInput::from_fn(rows, cols, |row, col| {
        let i = row * cols + col;
        Complex64::new(*re.add(i), *im.add(i))
    });
    match f(inner, &x) {
        Ok(v) => {
            *out_re = v.re;
            *out_im = v.im;
            SymsepStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Evaluates the hard function `g` on a `D × 2N` complex matrix supplied
/// as parallel row-major real and imaginary buffers of length `len = D·2N`.
///
/// # Safety
/// `spec` must be a live spec handle; `re` and `im` must point to `len`
/// readable doubles; `out_re` and `out_im` must point to writable slots.
#[no_mangle]
pub unsafe extern "C" fn symsep_g_eval(
    spec: *const SymsepSpec,
    re: *const f64,
    im: *const f64,
    len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SymsepStatus {
    eval_split(spec, re, im, len, out_re, out_im, g_eval)
}

/// Evaluates the normalized hard function `g' = g / ‖g‖` with the same
/// calling convention as [`symsep_g_eval`].
///
/// # Safety
/// Same contract as [`symsep_g_eval`].
#[no_mangle]
pub unsafe extern "C" fn symsep_g_prime_eval(
    spec: *const SymsepSpec,
    re: *const f64,
    im: *const f64,
    len: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SymsepStatus {
    eval_split(spec, re, im, len, out_re, out_im, g_prime_eval)
}

/// Evaluates the degree-`t` Blaschke truncation `μ̂_t` at `ξ`.
///
/// # Safety
/// `out_re` and `out_im` must point to writable slots.
#[no_mangle]
pub unsafe extern "C" fn symsep_mobius_trunc(
    t: u32,
    xi_re: f64,
    xi_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> SymsepStatus {
    if out_re.is_null() || out_im.is_null() {
        return SymsepStatus::NullPointer;
    }
    let v = mobius_trunc(t, Complex64::new(xi_re, xi_im));
    *out_re = v.re;
    *out_im = v.im;
    SymsepStatus::Ok
}

// ─── Lower bounds ──────────────────────────────────────────────────────

/// Writes the one-dimensional width-`l` bound `max(0, 1 − 2l/n)`; the set
/// size `n` must be even and positive.
///
/// # Safety
/// `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_bound_1d(n: u32, l: u32, out: *mut f64) -> SymsepStatus {
    if out.is_null() {
        return SymsepStatus::NullPointer;
    }
    if n < 2 || n % 2 != 0 {
        return SymsepStatus::InvalidArgument;
    }
    *out = bound_1d(n, l);
    SymsepStatus::Ok
}

/// Writes the flat-spectrum bound `1/6 − l/(6T)` and the pool size `T`;
/// fails with `SYMSEP_STATUS_OUT_OF_REGIME` unless `min(N/2, D−1) ≥ 2` and
/// with `SYMSEP_STATUS_INVALID_ARGUMENT` when `T` overflows 64 bits.
///
/// # Safety
/// `out_bound` and `out_pool` must point to writable slots.
#[no_mangle]
pub unsafe extern "C" fn symsep_bound_simple_highd(
    n: u32,
    d: u32,
    l: u64,
    out_bound: *mut f64,
    out_pool: *mut u64,
) -> SymsepStatus {
    if out_bound.is_null() || out_pool.is_null() {
        return SymsepStatus::NullPointer;
    }
    match bound_simple_highd(n, d, l) {
        Ok((bound, pool)) => {
            let Ok(pool) = u64::try_from(pool) else {
                return SymsepStatus::InvalidArgument;
            };
            *out_bound = bound.value();
            *out_pool = pool;
            SymsepStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Writes the hard-function width-`l` bound, both the exact truncation
/// value and its closed-form estimate, clamped at zero.
///
/// # Safety
/// `spec` must be a live spec handle; `out_exact` and `out_closed` must
/// point to writable slots.
#[no_mangle]
pub unsafe extern "C" fn symsep_bound_hard_highd(
    spec: *const SymsepSpec,
    l: u32,
    out_exact: *mut f64,
    out_closed: *mut f64,
) -> SymsepStatus {
    if spec.is_null() || out_exact.is_null() || out_closed.is_null() {
        return SymsepStatus::NullPointer;
    }
    match bound_hard_highd(&(*spec).inner, l) {
        Ok(b) => {
            *out_exact = b.exact();
            *out_closed = b.closed();
            SymsepStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Writes the width threshold `(1/24)·N^{−2}·(16/15)^{2d̂}` below which the
/// hard bound stays at least `1/12`.
///
/// # Safety
/// `out` must point to a writable slot.
#[no_mangle]
pub unsafe extern "C" fn symsep_hard_threshold(
    n: usize,
    d_hat: u32,
    out: *mut f64,
) -> SymsepStatus {
    if out.is_null() {
        return SymsepStatus::NullPointer;
    }
    if n == 0 || d_hat == 0 {
        return SymsepStatus::InvalidArgument;
    }
    *out = hard_threshold(n, d_hat);
    SymsepStatus::Ok
}

// ─── Eigenvalue sampler ────────────────────────────────────────────────

/// Default chain burn-in for set size `n`, in sweeps.
#[no_mangle]
pub extern "C" fn symsep_default_burn_in(n: usize) -> usize {
    default_burn_in(n)
}

/// Default chain thinning for set size `n`, in sweeps.
#[no_mangle]
pub extern "C" fn symsep_default_thin(n: usize) -> usize {
    default_thin(n)
}

/// Creates a seeded eigenvalue-angle sampler for set size `n ≥ 1` and
/// writes the handle to `out`. `burn_in` sweeps run immediately; every
/// subsequent draw advances the chain by `thin` sweeps. The same seed
/// always reproduces the same stream.
///
/// # Safety
/// `out` must be a valid pointer to a `SymsepSampler*` slot. On success
/// the caller owns the handle and must release it with
/// [`symsep_sampler_free`].
#[no_mangle]
pub unsafe extern "C" fn symsep_sampler_new(
    n: usize,
    seed: u64,
    burn_in: usize,
    thin: usize,
    out: *mut *mut SymsepSampler,
) -> SymsepStatus {
    if out.is_null() {
        return SymsepStatus::NullPointer;
    }
    if n == 0 {
        return SymsepStatus::InvalidArgument;
    }
    let rng = substream(seed, "ffi", "cue", 0);
    let inner = cue_sampler(n, rng, burn_in, thin);
    *out = Box::into_raw(Box::new(SymsepSampler { inner, n }));
    SymsepStatus::Ok
}

/// Draws the next angle vector into `out_theta`, which must hold exactly
/// `n` doubles; angles are in `[0, 2π)`.
///
/// # Safety
/// `sampler` must be a live sampler handle not shared across threads;
/// `out_theta` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn symsep_sampler_next(
    sampler: *mut SymsepSampler,
    out_theta: *mut f64,
    len: usize,
) -> SymsepStatus {
    if sampler.is_null() || out_theta.is_null() {
        return SymsepStatus::NullPointer;
    }
    let handle = &mut *sampler;
    if len != handle.n {
        return SymsepStatus::DimensionMismatch;
    }
    let theta = handle.inner.next().expect("chain is infinite");
    std::ptr::copy_nonoverlapping(theta.as_ptr(), out_theta, len);
    SymsepStatus::Ok
}

/// Releases a sampler handle; a null pointer is ignored.
///
/// # Safety
/// `sampler` must be null or a handle returned by [`symsep_sampler_new`]
/// that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn symsep_sampler_free(sampler: *mut SymsepSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}
