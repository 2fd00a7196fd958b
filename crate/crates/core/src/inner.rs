//! The four torus inner products, in closed form and by Monte Carlo.
//!
//! For functions on eigenvalue angles, `⟨f,g⟩_V = E_{y∼V}[f·ḡ]` under the
//! squared-Vandermonde law; the defining orthogonality is
//! `⟨p_λ, p_μ⟩_V = z_λ 1_{λ=μ}` for partitions of weight at most the set
//! size. For functions on the torus `(S¹)^D`, `⟨q^α, q^β⟩_S = 1_{α=β}`.
//!
//! The composite products integrate over the structured input `X(y,q,r)`
//! with `y∼V` and `q,r` uniform on `(S¹)^D`:
//!
//! ```text
//! ⟨f,g⟩_A  = E[f(X(y,q,r)) · conj(g(X(y,q,r)))]
//! ⟨f,g⟩_A° = the same with r = 0
//! ⟨f,g⟩_*  = ⟨f,g⟩_A − 2⟨f,g⟩_A°
//! ```
//!
//! On pairwise powersum products with weights in the closed-form regime
//! (each weight between 1 and N/2) all three have exact values:
//!
//! ```text
//! ⟨p_α p_β, p_γ p_δ⟩_A  = 2(1 + 1_{|α|=|β|}) · 1_{{|α|,|β|}={|γ|,|δ|}}
//!                          · (1_{α+β=γ+δ} + 1_{(α,β)=(γ,δ)} + 1_{(α,β)=(δ,γ)})
//! ⟨p_α p_β, p_γ p_δ⟩_A° = (1 + 1_{|α|=|β|}) · 1_{{|α|,|β|}={|γ|,|δ|}} · 1_{α+β=γ+δ}
//! ```
//!
//! and the star combination collapses to a diagonal case table over
//! unordered pairs: 0 when `{α,β} ≠ {γ,δ}`, else 2, 4, or 8 depending on
//! whether the weights and the indices coincide.
//!
//! Monte Carlo estimates carry batch-means standard errors (batch size
//! 100) so chain autocorrelation from the eigenvalue sampler is priced
//! into every tolerance check. Closed-form evaluators refuse out-of-regime
//! indices instead of extrapolating.

use crate::algebra::{z_constant, MultiIndex, Partition};
use crate::polys::powersum;
use crate::sampling::{
    assemble_input, cue_sampler, sample_uniform_circle, substream, SetInput,
};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Batch size for batch-means standard errors.
pub const BATCH_SIZE: usize = 100;

/// Absolute tolerance floor added to `k · stderr` checks so that
/// zero-variance estimates of exact values still compare sanely.
const STDERR_FLOOR: f64 = 1e-12;

// ─── Estimates ─────────────────────────────────────────────────────────

/// A Monte Carlo estimate of a complex expectation.
///
/// Standard errors are per real/imaginary component and batch-means
/// corrected; `samples` counts emitted (post-thinning) draws; `seed` is the
/// root seed the streams were derived from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MCEstimate {
    mean: Complex64,
    stderr_re: f64,
    stderr_im: f64,
    samples: u64,
    seed: u64,
}

impl MCEstimate {
    pub fn mean(&self) -> Complex64 {
        self.mean
    }

    pub fn stderr_re(&self) -> f64 {
        self.stderr_re
    }

    pub fn stderr_im(&self) -> f64 {
        self.stderr_im
    }

    /// Euclidean combination of the two component errors, for reporting.
    pub fn stderr_norm(&self) -> f64 {
        self.stderr_re.hypot(self.stderr_im)
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// True when both components of `mean − expected` are within
    /// `k · stderr` (plus a 1e-12 floor) of zero.
    pub fn within(&self, expected: Complex64, k: f64) -> bool {
        let dev = self.mean - expected;
        dev.re.abs() <= k * self.stderr_re + STDERR_FLOOR
            && dev.im.abs() <= k * self.stderr_im + STDERR_FLOOR
    }

    /// Largest per-component deviation measured in standard errors.
    pub fn sigmas(&self, expected: Complex64) -> f64 {
        let dev = self.mean - expected;
        let s_re = dev.re.abs() / (self.stderr_re + STDERR_FLOOR);
        let s_im = dev.im.abs() / (self.stderr_im + STDERR_FLOOR);
        s_re.max(s_im)
    }

    /// Complex conjugate of the estimate (errors unchanged).
    pub fn conj(&self) -> Self {
        Self {
            mean: self.mean.conj(),
            ..*self
        }
    }

    /// Pools two independent estimates of the same quantity: means are
    /// sample-weighted, the variance of the combined mean is the weighted
    /// combination of the leg variances, counts add.
    pub fn merge(&self, other: &Self) -> Self {
        let na = self.samples as f64;
        let nb = other.samples as f64;
        let n = na + nb;
        let wa = na / n;
        let wb = nb / n;
        Self {
            mean: self.mean * wa + other.mean * wb,
            stderr_re: (wa * wa * self.stderr_re.powi(2) + wb * wb * other.stderr_re.powi(2))
                .sqrt(),
            stderr_im: (wa * wa * self.stderr_im.powi(2) + wb * wb * other.stderr_im.powi(2))
                .sqrt(),
            samples: self.samples + other.samples,
            seed: self.seed,
        }
    }

    /// The linear combination `a·self + b·other` for independent legs
    /// (component variances add with squared weights).
    pub fn linear(&self, a: f64, other: &Self, b: f64) -> Self {
        Self {
            mean: self.mean * a + other.mean * b,
            stderr_re: (a * a * self.stderr_re.powi(2) + b * b * other.stderr_re.powi(2)).sqrt(),
            stderr_im: (a * a * self.stderr_im.powi(2) + b * b * other.stderr_im.powi(2)).sqrt(),
            samples: self.samples.min(other.samples),
            seed: self.seed,
        }
    }
}

/// Streaming accumulator producing batch-means standard errors.
///
/// The point estimate is the mean over all pushed values; the error comes
/// from the variance of complete batch means. With fewer than two complete
/// batches it falls back to the naive i.i.d. error.
#[derive(Clone, Debug)]
pub struct BatchAccumulator {
    batch_size: usize,
    count: u64,
    total: Complex64,
    sumsq_re: f64,
    sumsq_im: f64,
    batch_sum: Complex64,
    in_batch: usize,
    batch_means: Vec<Complex64>,
}

impl BatchAccumulator {
    pub fn new(batch_size: usize) -> Self {
        assert!(batch_size >= 1);
        Self {
            batch_size,
            count: 0,
            total: Complex64::new(0.0, 0.0),
            sumsq_re: 0.0,
            sumsq_im: 0.0,
            batch_sum: Complex64::new(0.0, 0.0),
            in_batch: 0,
            batch_means: Vec::new(),
        }
    }

    pub fn push(&mut self, v: Complex64) {
        self.count += 1;
        self.total += v;
        self.sumsq_re += v.re * v.re;
        self.sumsq_im += v.im * v.im;
        self.batch_sum += v;
        self.in_batch += 1;
        if self.in_batch == self.batch_size {
            self.batch_means.push(self.batch_sum / self.batch_size as f64);
            self.batch_sum = Complex64::new(0.0, 0.0);
            self.in_batch = 0;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn finish(&self, seed: u64) -> MCEstimate {
        assert!(self.count >= 1, "estimate needs at least one sample");
        let n = self.count as f64;
        let mean = self.total / n;
        let b = self.batch_means.len();
        let (stderr_re, stderr_im) = if b >= 2 {
            let bm = &self.batch_means;
            let m_re = bm.iter().map(|z| z.re).sum::<f64>() / b as f64;
            let m_im = bm.iter().map(|z| z.im).sum::<f64>() / b as f64;
            let var_re =
                bm.iter().map(|z| (z.re - m_re).powi(2)).sum::<f64>() / (b as f64 - 1.0);
            let var_im =
                bm.iter().map(|z| (z.im - m_im).powi(2)).sum::<f64>() / (b as f64 - 1.0);
            ((var_re / b as f64).sqrt(), (var_im / b as f64).sqrt())
        } else if self.count >= 2 {
            let var_re = (self.sumsq_re / n - mean.re * mean.re).max(0.0) * n / (n - 1.0);
            let var_im = (self.sumsq_im / n - mean.im * mean.im).max(0.0) * n / (n - 1.0);
            ((var_re / n).sqrt(), (var_im / n).sqrt())
        } else {
            (0.0, 0.0)
        };
        MCEstimate {
            mean,
            stderr_re,
            stderr_im,
            samples: self.count,
            seed,
        }
    }
}

// ─── Kinds and exact forms ─────────────────────────────────────────────

/// Which inner product a Monte Carlo run integrates against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InnerProductKind {
    /// Squared-Vandermonde (eigenvalue) law; samples are `1 × N` inputs of
    /// phases.
    V,
    /// Uniform torus `(S¹)^D`; samples are `D × 1` inputs.
    S,
    /// Structured product distribution `X(y, q, r)`; samples are `D × 2N`.
    A,
    /// The `r = 0` variant of `A`.
    AZero,
    /// Only defined as `A − 2·A°`; estimated by [`mc_star`], never directly.
    Star,
}

impl InnerProductKind {
    fn label(self) -> &'static str {
        match self {
            InnerProductKind::V => "v",
            InnerProductKind::S => "s",
            InnerProductKind::A => "a",
            InnerProductKind::AZero => "a0",
            InnerProductKind::Star => "star",
        }
    }
}

/// `⟨p_λ, p_μ⟩_V` at set size `n`: `z_λ 1_{λ=μ}` when both weights are at
/// most `n`, `None` when the orthogonality theorem is silent.
pub fn exact_v(lambda: &Partition, mu: &Partition, n: u32) -> Option<u128> {
    if lambda.weight() > n || mu.weight() > n {
        return None;
    }
    Some(if lambda == mu { z_constant(lambda) } else { 0 })
}

/// `⟨q^α, q^β⟩_S = 1_{α=β}`. Panics on length mismatch.
pub fn exact_s(alpha: &MultiIndex, beta: &MultiIndex) -> u32 {
    assert_eq!(alpha.len(), beta.len(), "monomial index length mismatch");
    u32::from(alpha == beta)
}

fn weight_multisets_match(a: u32, b: u32, c: u32, d: u32) -> bool {
    let mut x = [a, b];
    let mut y = [c, d];
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

fn check_pair_regime(
    idx: [&MultiIndex; 4],
    half_n: Option<u32>,
) -> Result<()> {
    let d = idx[0].len();
    if idx.iter().any(|a| a.len() != d) {
        return Err(Error::DimensionMismatch(
            "pair inner product indices must share one length".into(),
        ));
    }
    for a in idx {
        let w = a.weight();
        if w == 0 {
            return Err(Error::OutOfRegime(
                "pair inner product indices must have weight at least 1".into(),
            ));
        }
        if let Some(n) = half_n {
            if 2 * w > n {
                return Err(Error::OutOfRegime(format!(
                    "index weight {w} exceeds N/2 = {}",
                    n as f64 / 2.0
                )));
            }
        }
    }
    Ok(())
}

/// Closed form of `⟨p_α p_β, p_γ p_δ⟩_A` for weights in `1..=N/2`.
pub fn exact_a_pair(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    gamma: &MultiIndex,
    delta: &MultiIndex,
    n: u32,
) -> Result<f64> {
    check_pair_regime([alpha, beta, gamma, delta], Some(n))?;
    let (wa, wb, wc, wd) = (alpha.weight(), beta.weight(), gamma.weight(), delta.weight());
    if !weight_multisets_match(wa, wb, wc, wd) {
        return Ok(0.0);
    }
    let eq_weights = f64::from(wa == wb);
    let sum_match = f64::from(alpha.add(beta) == gamma.add(delta));
    let tuple_match = f64::from(alpha == gamma && beta == delta);
    let swapped_match = f64::from(alpha == delta && beta == gamma);
    Ok(2.0 * (1.0 + eq_weights) * (sum_match + tuple_match + swapped_match))
}

/// Closed form of `⟨p_α p_β, p_γ p_δ⟩_A°` for weights in `1..=N/2`.
pub fn exact_a_zero_pair(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    gamma: &MultiIndex,
    delta: &MultiIndex,
    n: u32,
) -> Result<f64> {
    check_pair_regime([alpha, beta, gamma, delta], Some(n))?;
    let (wa, wb, wc, wd) = (alpha.weight(), beta.weight(), gamma.weight(), delta.weight());
    if !weight_multisets_match(wa, wb, wc, wd) {
        return Ok(0.0);
    }
    let eq_weights = f64::from(wa == wb);
    let sum_match = f64::from(alpha.add(beta) == gamma.add(delta));
    Ok((1.0 + eq_weights) * sum_match)
}

/// Closed form of `⟨p_α p_β, p_γ p_δ⟩_* = A − 2A°`, diagonal over unordered
/// pairs:
///
/// ```text
/// 0  when {α,β} ≠ {γ,δ}
/// 2  when {α,β} = {γ,δ} and |α| ≠ |β|
/// 4  when {α,β} = {γ,δ}, |α| = |β|, α ≠ β
/// 8  when α = β = γ = δ
/// ```
pub fn exact_star_pair(
    alpha: &MultiIndex,
    beta: &MultiIndex,
    gamma: &MultiIndex,
    delta: &MultiIndex,
) -> Result<f64> {
    check_pair_regime([alpha, beta, gamma, delta], None)?;
    let same_set = (alpha == gamma && beta == delta) || (alpha == delta && beta == gamma);
    if !same_set {
        return Ok(0.0);
    }
    Ok(if alpha == beta {
        8.0
    } else if alpha.weight() == beta.weight() {
        4.0
    } else {
        2.0
    })
}

// ─── Monte Carlo ───────────────────────────────────────────────────────

/// Sampling geometry and chain settings for one estimator run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McParams {
    /// Half set size N (eigenvalue count; inputs have 2N columns).
    pub n: usize,
    /// Ambient dimension D.
    pub d: usize,
    /// Emitted sample count M.
    pub samples: usize,
    /// Chain burn-in, in sweeps.
    pub burn_in: usize,
    /// Sweeps between emitted chain states.
    pub thin: usize,
}

impl McParams {
    /// Parameters with the crate-default burn-in (`10N²`) and thinning (`N`).
    pub fn new(n: usize, d: usize, samples: usize) -> Self {
        Self {
            n,
            d,
            samples,
            burn_in: crate::sampling::default_burn_in(n),
            thin: crate::sampling::default_thin(n),
        }
    }
}

/// Estimates `⟨f, g⟩ = E[f·conj(g)]` under `kind` with `params.samples`
/// draws. Star is refused here; use [`mc_star`]. Sample inputs are shaped
/// per [`InnerProductKind`].
pub fn mc_inner(
    f: impl Fn(&SetInput) -> Complex64,
    g: impl Fn(&SetInput) -> Complex64,
    kind: InnerProductKind,
    params: &McParams,
    seed: u64,
) -> Result<MCEstimate> {
    let values = move |x: &SetInput| vec![f(x), g(x)];
    let gram = mc_gram(values, 2, kind, params, seed)?;
    Ok(gram.get(0, 1))
}

/// Hermitian Gram matrix of `k` functions under one shared sample stream.
///
/// `values(x)` must return the `k` function values at the sample `x`; every
/// product `v_i · conj(v_j)` for `i ≤ j` is accumulated with its own
/// batch-means error. Sharing the stream keeps the scan affordable and
/// makes conjugate symmetry exact; entries are correlated across the Gram,
/// which is priced into each entry's own error but not cross-entry.
pub fn mc_gram(
    values: impl Fn(&SetInput) -> Vec<Complex64>,
    k: usize,
    kind: InnerProductKind,
    params: &McParams,
    seed: u64,
) -> Result<GramEstimate> {
    if params.samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one function".into()));
    }
    let mut accs = vec![BatchAccumulator::new(BATCH_SIZE); k * (k + 1) / 2];
    let mut push_sample = |x: &SetInput| {
        let v = values(x);
        debug_assert_eq!(v.len(), k);
        let mut idx = 0;
        for i in 0..k {
            for j in i..k {
                accs[idx].push(v[i] * v[j].conj());
                idx += 1;
            }
        }
    };

    match kind {
        InnerProductKind::V => {
            let rng = substream(seed, "inner", "v-chain", 0);
            let mut sampler = cue_sampler(params.n, rng, params.burn_in, params.thin);
            for _ in 0..params.samples {
                let theta = sampler.next().expect("sampler is infinite");
                let x = SetInput::from_fn(1, theta.len(), |_, col| Complex64::cis(theta[col]));
                push_sample(&x);
            }
        }
        InnerProductKind::S => {
            let mut rng = substream(seed, "inner", "s-stream", 0);
            for _ in 0..params.samples {
                let q = sample_uniform_circle(&mut rng, params.d);
                let x = SetInput::from_fn(params.d, 1, |row, _| q[row]);
                push_sample(&x);
            }
        }
        InnerProductKind::A | InnerProductKind::AZero => {
            let label = kind.label();
            let chain_rng = substream(seed, "inner", label, 0);
            let mut phase_rng = substream(seed, "inner", label, 1);
            let mut sampler = cue_sampler(params.n, chain_rng, params.burn_in, params.thin);
            let zero = vec![Complex64::new(0.0, 0.0); params.d];
            for _ in 0..params.samples {
                let y = sampler.next().expect("sampler is infinite");
                let q = sample_uniform_circle(&mut phase_rng, params.d);
                let r = if kind == InnerProductKind::AZero {
                    zero.clone()
                } else {
                    sample_uniform_circle(&mut phase_rng, params.d)
                };
                let x = assemble_input(&y, &q, &r)?;
                push_sample(&x);
            }
        }
        InnerProductKind::Star => {
            return Err(Error::InvalidArgument(
                "star is estimated as A − 2·A°, call mc_star".into(),
            ));
        }
    }

    Ok(GramEstimate {
        k,
        estimates: accs.iter().map(|a| a.finish(seed)).collect(),
    })
}

/// Upper-triangular storage of a Hermitian Gram estimate.
#[derive(Clone, Debug)]
pub struct GramEstimate {
    k: usize,
    estimates: Vec<MCEstimate>,
}

impl GramEstimate {
    pub fn size(&self) -> usize {
        self.k
    }

    /// Entry `(i, j)`; below-diagonal queries return the exact conjugate of
    /// the stored upper entry.
    pub fn get(&self, i: usize, j: usize) -> MCEstimate {
        assert!(i < self.k && j < self.k, "gram index out of range");
        if i <= j {
            self.estimates[triangle_index(self.k, i, j)]
        } else {
            self.estimates[triangle_index(self.k, j, i)].conj()
        }
    }
}

fn triangle_index(k: usize, i: usize, j: usize) -> usize {
    // row-major upper triangle: row i holds the k - i entries j = i..k
    i * (2 * k - i + 1) / 2 + (j - i)
}

/// Estimates `⟨f, g⟩_* = ⟨f,g⟩_A − 2⟨f,g⟩_A°` from two independently
/// seeded legs; leg variances add into the combined error. `samples` on the
/// result is the per-leg count.
pub fn mc_star(
    f: impl Fn(&SetInput) -> Complex64,
    g: impl Fn(&SetInput) -> Complex64,
    params: &McParams,
    seed: u64,
) -> Result<MCEstimate> {
    let a = mc_inner(&f, &g, InnerProductKind::A, params, seed)?;
    let a0 = mc_inner(&f, &g, InnerProductKind::AZero, params, seed)?;
    Ok(a.linear(1.0, &a0, -2.0))
}

/// Monte Carlo estimate of `⟨p_t p_{t'}, ∏_i p_{k_i}⟩_V` at set size `n`.
///
/// The expected value is 0 whenever the tuple length differs from 2 (the
/// orthogonality that kills cross-terms between pairwise products and
/// other pooling orders), `z_{{t,t'}}` when the tuple is exactly `{t,t'}`.
pub fn projection_orthogonality_probe(
    t: u32,
    t_prime: u32,
    tuple: &[u32],
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    assert!(
        (t + t_prime) as usize <= n,
        "pair degree must be at most the set size"
    );
    let tuple = tuple.to_vec();
    let params = McParams::new(n, 1, samples);
    mc_inner(
        move |x: &SetInput| powersum(t, x.row(0)) * powersum(t_prime, x.row(0)),
        move |x: &SetInput| tuple.iter().map(|&k| powersum(k, x.row(0))).product(),
        InnerProductKind::V,
        &params,
        seed,
    )
}
