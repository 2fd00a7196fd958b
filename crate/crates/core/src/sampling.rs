//! Random streams and the three sampling distributions behind the torus
//! inner products.
//!
//! The squared-Vandermonde density on `[0,2π)^N`,
//!
//! ```text
//! p(θ) ∝ |V(e^{iθ})|²,   V(z) = ∏_{i<j} (z_j − z_i),
//! ```
//!
//! is the joint eigenvalue law of a Haar-random unitary matrix. It is
//! sampled here by a Metropolis chain over the angles: single-coordinate
//! uniform proposals, acceptance from the log-density difference, and a
//! step scale auto-tuned toward 40% acceptance during burn-in. The
//! log-density update for one moved coordinate is O(N), so a full sweep is
//! O(N²).
//!
//! Uniform points on the unit circle drive the independent-phase factors,
//! and [`assemble_input`] builds the structured `D × 2N` input
//!
//! ```text
//! x_{dn}(y, q, r) = q_d e^{iy_n}   for n ≤ N,
//!                   r_d e^{iy_{n-N}} for n > N,
//! ```
//!
//! whose left half carries `q` and right half carries `r` against a shared
//! eigenvalue vector `y`.
//!
//! Every consumer derives its own ChaCha sub-stream from a 64-bit root seed
//! via [`substream`], so runs are reproducible and independent estimators
//! never share randomness by accident.

use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

/// A set of `M` points in `ℂ^D`, stored as a row-major `D × M` matrix.
///
/// For the torus-supported distributions every entry has unit modulus,
/// except the `r = 0` variant where the right half is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SetInput {
    d: usize,
    m: usize,
    data: Vec<Complex64>,
}

impl SetInput {
    /// Builds a `d × m` input by evaluating `f(row, col)`.
    pub fn from_fn(d: usize, m: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(d * m);
        for row in 0..d {
            for col in 0..m {
                data.push(f(row, col));
            }
        }
        Self { d, m, data }
    }

    /// Builds an input from equal-length rows.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch(
                "rows of a set input must have equal length".into(),
            ));
        }
        Ok(Self {
            d,
            m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Number of coordinates per point (rows).
    pub fn nrows(&self) -> usize {
        self.d
    }

    /// Number of points (columns).
    pub fn ncols(&self) -> usize {
        self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.m + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.m..(row + 1) * self.m]
    }

    /// A new input with columns rearranged as `cols[j] = self[perm[j]]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.m, "permutation length mismatch");
        Self::from_fn(self.d, self.m, |row, col| self.entry(row, perm[col]))
    }
}

/// `count` i.i.d. points uniform on the unit circle.
pub fn sample_uniform_circle(rng: &mut impl Rng, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|_| Complex64::cis(rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// `log |V(e^{iθ})|² = Σ_{i<j} log(4 sin²((θ_j − θ_i)/2))`.
///
/// Returns `-∞` on coincident angles, which is a valid value signaling zero
/// density, not an error.
pub fn log_vandermonde_sq(theta: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..theta.len() {
        for j in (i + 1)..theta.len() {
            acc += log_pair(theta[i], theta[j]);
        }
    }
    acc
}

#[inline]
fn log_pair(a: f64, b: f64) -> f64 {
    // |e^{ib} - e^{ia}|² = 4 sin²((b - a) / 2)
    let s = ((b - a) / 2.0).sin();
    (4.0 * s * s).ln()
}

/// Outcome of a single Metropolis proposal, exposed for the
/// detailed-balance test.
#[cfg(test)]
pub(crate) struct StepOutcome {
    pub delta_log: f64,
    pub log_u: f64,
    pub accepted: bool,
}

/// Metropolis chain over eigenvalue angles targeting `|V(e^{iθ})|²`.
///
/// The chain keeps its log-density incrementally and refreshes it from
/// scratch periodically so it never drifts from the recomputable value.
pub struct CUEChain {
    theta: Vec<f64>,
    log_density: f64,
    rng: ChaCha12Rng,
    step_scale: f64,
    accepted: u64,
    proposed: u64,
    window_accepted: u64,
    window_proposed: u64,
    steps_since_refresh: u64,
}

const TUNE_TARGET: f64 = 0.4;
const TUNE_WINDOW: u64 = 200;
const REFRESH_PERIOD: u64 = 1 << 16;

impl CUEChain {
    /// Starts a chain of `n` angles drawn uniformly (an almost-surely
    /// positive-density state).
    pub fn new(n: usize, mut rng: ChaCha12Rng) -> Self {
        assert!(n >= 1, "chain needs at least one angle");
        let theta: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        let log_density = log_vandermonde_sq(&theta);
        Self {
            theta,
            log_density,
            rng,
            step_scale: 0.5,
            accepted: 0,
            proposed: 0,
            window_accepted: 0,
            window_proposed: 0,
            steps_since_refresh: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn state(&self) -> &[f64] {
        &self.theta
    }

    pub fn log_density(&self) -> f64 {
        self.log_density
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            return 0.0;
        }
        self.accepted as f64 / self.proposed as f64
    }

    pub fn step_scale(&self) -> f64 {
        self.step_scale
    }

    /// One single-coordinate proposal; O(N).
    pub fn step(&mut self) {
        let n = self.theta.len();
        let i = self.rng.random_range(0..n);
        let old = self.theta[i];
        let mut new = old + self.rng.random_range(-self.step_scale..self.step_scale);
        new = new.rem_euclid(std::f64::consts::TAU);

        let mut delta = 0.0;
        for j in 0..n {
            if j != i {
                delta += log_pair(self.theta[j], new) - log_pair(self.theta[j], old);
            }
        }

        self.proposed += 1;
        self.window_proposed += 1;
        let log_u = self.rng.random_range(0.0f64..1.0).ln();
        if log_u < delta {
            self.theta[i] = new;
            self.log_density += delta;
            self.accepted += 1;
            self.window_accepted += 1;
        }

        self.steps_since_refresh += 1;
        if self.steps_since_refresh >= REFRESH_PERIOD {
            self.log_density = log_vandermonde_sq(&self.theta);
            self.steps_since_refresh = 0;
        }
    }

    #[cfg(test)]
    pub(crate) fn step_detailed(&mut self) -> StepOutcome {
        let before = self.log_density;
        let accepted_before = self.accepted;
        // replicate step() while capturing the decision inputs
        let n = self.theta.len();
        let i = self.rng.random_range(0..n);
        let old = self.theta[i];
        let mut new = old + self.rng.random_range(-self.step_scale..self.step_scale);
        new = new.rem_euclid(std::f64::consts::TAU);
        let mut delta = 0.0;
        for j in 0..n {
            if j != i {
                delta += log_pair(self.theta[j], new) - log_pair(self.theta[j], old);
            }
        }
        self.proposed += 1;
        let log_u = self.rng.random_range(0.0f64..1.0).ln();
        let accepted = log_u < delta;
        if accepted {
            self.theta[i] = new;
            self.log_density += delta;
            self.accepted += 1;
        }
        let _ = (before, accepted_before);
        StepOutcome {
            delta_log: delta,
            log_u,
            accepted,
        }
    }

    /// One sweep = N proposals.
    pub fn sweep(&mut self) {
        for _ in 0..self.theta.len() {
            self.step();
        }
    }

    /// Runs `sweeps` sweeps while re-tuning the step scale toward ~40%
    /// acceptance every [`TUNE_WINDOW`] proposals.
    pub fn burn_in(&mut self, sweeps: usize) {
        for _ in 0..sweeps {
            self.sweep();
            if self.window_proposed >= TUNE_WINDOW {
                let rate = self.window_accepted as f64 / self.window_proposed as f64;
                if rate > TUNE_TARGET + 0.05 {
                    self.step_scale = (self.step_scale * 1.25).min(std::f64::consts::PI);
                } else if rate < TUNE_TARGET - 0.05 {
                    self.step_scale = (self.step_scale / 1.25).max(1e-4);
                }
                self.window_accepted = 0;
                self.window_proposed = 0;
            }
        }
    }
}

/// Iterator emitting chain states every `thin` sweeps after burn-in.
pub struct CueSampler {
    chain: CUEChain,
    thin: usize,
}

impl CueSampler {
    pub fn chain(&self) -> &CUEChain {
        &self.chain
    }
}

impl Iterator for CueSampler {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        for _ in 0..self.thin {
            self.chain.sweep();
        }
        Some(self.chain.state().to_vec())
    }
}

/// Burnt-in eigenvalue-angle stream for set size `n`.
///
/// `burn_in` and `thin` are in sweeps; `thin = 0` emits every state. The
/// crate-wide defaults (`10 N²` burn-in, `N` thinning) live in
/// [`default_burn_in`] and [`default_thin`].
pub fn cue_sampler(n: usize, rng: ChaCha12Rng, burn_in: usize, thin: usize) -> CueSampler {
    let mut chain = CUEChain::new(n, rng);
    chain.burn_in(burn_in);
    CueSampler { chain, thin }
}

/// Default burn-in: `10 N²` sweeps (log-gas mixing scales with N).
pub fn default_burn_in(n: usize) -> usize {
    10 * n * n
}

/// Default thinning: `N` sweeps between emitted samples.
pub fn default_thin(n: usize) -> usize {
    n
}

/// Assembles the structured input `X(y, q, r)`: a `D × 2N` matrix whose
/// column `n` is `q ⊙ e^{iy_n}` for `n ≤ N` and `r ⊙ e^{iy_{n-N}}` for
/// `n > N`.
pub fn assemble_input(y: &[f64], q: &[Complex64], r: &[Complex64]) -> Result<SetInput> {
    if q.len() != r.len() {
        return Err(Error::DimensionMismatch(format!(
            "q has length {} but r has length {}",
            q.len(),
            r.len()
        )));
    }
    let n = y.len();
    let d = q.len();
    let phases: Vec<Complex64> = y.iter().map(|&t| Complex64::cis(t)).collect();
    Ok(SetInput::from_fn(d, 2 * n, |row, col| {
        if col < n {
            q[row] * phases[col]
        } else {
            r[row] * phases[col - n]
        }
    }))
}

/// Derives a 256-bit sub-stream seed from the root seed and a label triple.
///
/// SHA-256 over the concatenated fields; stable across platforms, so the
/// same configuration always replays the same streams.
pub fn derive_seed(root: u64, module: &str, purpose: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(root.to_le_bytes());
    hasher.update((module.len() as u64).to_le_bytes());
    hasher.update(module.as_bytes());
    hasher.update((purpose.len() as u64).to_le_bytes());
    hasher.update(purpose.as_bytes());
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

/// ChaCha sub-stream for `(module, purpose, index)` under `root`.
pub fn substream(root: u64, module: &str, purpose: &str, index: u64) -> ChaCha12Rng {
    ChaCha12Rng::from_seed(derive_seed(root, module, purpose, index))
}
