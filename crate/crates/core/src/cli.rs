//! Reproducible command-line front end: configuration, seeded runs,
//! verification suites, bound tables, approximation reports, and
//! machine-readable output.
//!
//! Every run is a pure function of the resolved [`RunConfig`]: all random
//! streams derive from `seed` through [`crate::sampling::substream`], no
//! timestamps enter the report, and JSON float formatting is shortest
//! round-trip, so identical configs produce byte-identical documents.
//!
//! Exit codes: `0` all checks pass, `1` at least one check failed its
//! tolerance, `2` usage, configuration, or I/O error. Tolerances are
//! uniform across the suites: Monte Carlo checks pass at five batch-means
//! standard errors, floating-point identities at `1e−10` absolute,
//! rational identities exactly.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_multi_indices, MultiIndex, Partition};
use crate::bounds::{
    bound_1d, bound_hard_highd, bound_simple_highd, hard_threshold, rank_lemma_oracle,
    OracleBasis,
};
use crate::hardfn::{
    g_a_norm_sq, g_coeff, g_eval, g_prime_eval, g_support, mobius_trunc, trunc_norm_sq_exact,
    HardFnSpec,
};
use crate::inner::{
    exact_a_pair, exact_a_zero_pair, exact_star_pair, exact_v, mc_gram, mc_inner,
    InnerProductKind, McParams,
};
use crate::nets::{
    choose_j, epsilon_cap, exp_f2, exp_fk, ln_factorial, sup_error_probe, ActivationPair,
    ExpNetParams, PairwiseNet,
};
use crate::polys::{pair_product, powersum_partition};
use crate::sampling::{
    default_burn_in, default_thin, sample_uniform_circle, substream, SetInput,
};
use crate::{Error, Result};

/// Version stamp on every emitted report document.
pub const SCHEMA_VERSION: u32 = 1;

/// Monte Carlo checks pass at this many batch-means standard errors.
pub const MC_SIGMA: f64 = 5.0;

/// Floating-point identities pass at this absolute deviation.
pub const EXACT_TOL: f64 = 1e-10;

const DEFAULT_N: usize = 8;
const DEFAULT_D: usize = 2;
const DEFAULT_SAMPLES: usize = 3000;
const DEFAULT_SEED: u64 = 17;
const DEFAULT_EPSILON: f64 = 0.01;
const EPSILON_MAX: f64 = 0.01;

const VERIFY_EXP_J: u32 = 12;
const DUALITY_INPUTS: usize = 50;
const SUP_GRID: usize = 4096;
const LIPSCHITZ_PAIRS_PER_T: usize = 400;
const ORACLE_TRIALS: usize = 20;
const ORACLE_T: usize = 6;
const NET_IDENTITY_SAMPLES: usize = 200;
const PROBE_GRID: usize = 600;

// ─── Configuration ─────────────────────────────────────────────────────

/// Output document format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One pretty-printed JSON document.
    Json,
    /// RFC-4180 tables, one per report section.
    Csv,
}

/// Fully resolved run configuration; the sole input of every subcommand.
///
/// Serialization is lossless: a config echoed into a report or written to
/// a file re-parses to an identical value, floats included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Set size N; structured inputs carry 2N columns.
    pub n: usize,
    /// Ambient dimension D.
    pub d: usize,
    /// Effective-dimension override; defaults to `min(D, ⌊√(N/2)⌋)`.
    pub d_hat_override: Option<u32>,
    /// Symmetric-width grid for the bound table.
    pub l_grid: Vec<u32>,
    /// Monte Carlo samples per estimator and probe points per net probe.
    pub mc_samples: usize,
    /// Chain burn-in sweeps.
    pub burn_in: usize,
    /// Sweeps between retained chain states.
    pub thin: usize,
    /// Sup-error target for the approximation run, in `(0, 1/100]`.
    pub epsilon_target: f64,
    /// Root-of-unity order override for the exponential activations.
    pub j_override: Option<u32>,
    /// Root seed; every random stream derives from it.
    pub seed: u64,
    /// Report format.
    pub output_format: OutputFormat,
    /// Report destination; stdout when absent.
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    /// The default configuration at set size `n` and dimension `d`.
    pub fn defaults(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            d_hat_override: None,
            l_grid: vec![0, 1, 2, 4, 8, 16],
            mc_samples: DEFAULT_SAMPLES,
            burn_in: default_burn_in(n),
            thin: default_thin(n),
            epsilon_target: DEFAULT_EPSILON,
            j_override: None,
            seed: DEFAULT_SEED,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }

    /// The hard-function geometry this config selects.
    pub fn spec(&self) -> Result<HardFnSpec> {
        match self.d_hat_override {
            Some(dh) => HardFnSpec::with_d_hat(self.n, self.d, dh),
            None => HardFnSpec::new(self.n, self.d),
        }
    }

    /// Checks every config invariant; failures are usage errors (exit 2).
    pub fn validate(&self) -> Result<()> {
        fn positive(value: usize, name: &str) -> Result<()> {
            if value == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
            Ok(())
        }
        positive(self.n, "n")?;
        positive(self.d, "d")?;
        positive(self.mc_samples, "mc_samples")?;
        positive(self.burn_in, "burn_in")?;
        positive(self.thin, "thin")?;
        if !(self.epsilon_target > 0.0 && self.epsilon_target <= EPSILON_MAX) {
            return Err(Error::InvalidArgument(format!(
                "epsilon_target must lie in (0, {EPSILON_MAX}], got {}",
                self.epsilon_target
            )));
        }
        let spec = self.spec()?;
        if let Some(j) = self.j_override {
            let params = ExpNetParams::new(j, spec.d_hat())?;
            let cap = epsilon_cap(spec.d_hat());
            if params.error_bound() > cap {
                return Err(Error::InvalidArgument(format!(
                    "J = {j} certifies activation error {:.3e}, above the cap {:.3e} at d̂ = {}",
                    params.error_bound(),
                    cap,
                    spec.d_hat()
                )));
            }
        }
        Ok(())
    }
}

// ─── Report document ───────────────────────────────────────────────────

/// Outcome of one verification row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not run (out-of-regime parameters or an upstream error); never
    /// turns the exit code.
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

/// One verification suite: the identity checked, how many instances were
/// scanned, and the worst measurement against its cap.
///
/// `measured ≤ bound` is the pass criterion and `margin = bound −
/// measured`, so the row embeds the bound, the measurement, and the pass
/// margin in one unit system per suite: standard errors for Monte Carlo
/// rows, absolute deviation for exact rows, signed excess over the cap
/// (negative is slack) for sup-bound rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub identity: String,
    pub instances: u64,
    pub bound: f64,
    pub measured: f64,
    pub margin: f64,
    pub status: CheckStatus,
    pub note: Option<String>,
}

impl CheckRow {
    fn evaluated(
        identity: &str,
        instances: u64,
        bound: f64,
        measured: f64,
        note: Option<String>,
    ) -> Self {
        Self {
            identity: identity.into(),
            instances,
            bound,
            measured,
            margin: bound - measured,
            status: if measured <= bound {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            note,
        }
    }

    fn skipped(identity: &str, note: String) -> Self {
        Self {
            identity: identity.into(),
            instances: 0,
            bound: 0.0,
            measured: 0.0,
            margin: 0.0,
            status: CheckStatus::Skipped,
            note: Some(note),
        }
    }
}

/// Verification suite results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifySection {
    pub d_hat: u32,
    pub rows: Vec<CheckRow>,
}

/// One symmetric-width row of the lower-bound table. Absent entries are
/// out of their regime; `note` says why.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub l: u32,
    pub one_d: Option<f64>,
    pub simple: Option<f64>,
    pub hard_exact: Option<f64>,
    pub hard_closed: Option<f64>,
    pub note: Option<String>,
}

/// Lower-bound table over the configured width grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsSection {
    pub d_hat: u32,
    /// Widths below this keep the exact hard bound at `1/12` or better.
    pub threshold_l: f64,
    /// Symmetric channel count `T = C(N/2 + D − 1, N/2)` entering the
    /// simple bound, when its regime applies.
    pub symmetric_rank_cap: Option<u64>,
    pub rows: Vec<BoundRow>,
}

/// One probed network of the approximation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRow {
    pub activation: String,
    pub j: Option<u32>,
    pub certified_epsilon: f64,
    pub probe_samples: u64,
    pub probed_sup_error: f64,
    pub error_budget: f64,
    pub tree_width: u64,
    pub tree_depth: u64,
    pub activation_neurons: Option<u64>,
    pub max_weight: Option<f64>,
    pub status: CheckStatus,
    pub note: Option<String>,
}

/// Approximation run results: the chosen root-of-unity order, the
/// per-activation error budget, and one row per probed network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxSection {
    pub d_hat: u32,
    pub epsilon_target: f64,
    pub epsilon_budget: f64,
    pub j: u32,
    pub rows: Vec<ApproxRow>,
}

/// The complete report document: config echo plus whichever sections the
/// subcommand produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub verify: Option<VerifySection>,
    pub bounds: Option<BoundsSection>,
    pub approx: Option<ApproxSection>,
}

impl SeparationReport {
    fn empty(config: RunConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            config,
            verify: None,
            bounds: None,
            approx: None,
        }
    }

    /// Rows that failed their tolerance, across all present sections.
    pub fn failure_count(&self) -> u64 {
        let verify = self
            .verify
            .iter()
            .flat_map(|s| &s.rows)
            .filter(|r| r.status == CheckStatus::Fail)
            .count();
        let approx = self
            .approx
            .iter()
            .flat_map(|s| &s.rows)
            .filter(|r| r.status == CheckStatus::Fail)
            .count();
        (verify + approx) as u64
    }

    /// Process exit code: `1` on any failed check, `0` otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failure_count() > 0 {
            1
        } else {
            0
        }
    }
}

// ─── Verification suites ───────────────────────────────────────────────

fn child_seed(root: u64, purpose: &str) -> u64 {
    substream(root, "cli", purpose, 0).random()
}

fn random_torus(d: usize, cols: usize, rng: &mut impl Rng) -> SetInput {
    let entries = sample_uniform_circle(rng, d * cols);
    SetInput::from_fn(d, cols, |row, col| entries[row * cols + col])
}

fn mc_params(config: &RunConfig, d: usize) -> McParams {
    McParams {
        n: config.n,
        d,
        samples: config.mc_samples,
        burn_in: config.burn_in,
        thin: config.thin,
    }
}

fn guarded(identity: &str, outcome: Result<CheckRow>) -> CheckRow {
    outcome.unwrap_or_else(|e| CheckRow::skipped(identity, format!("not run: {e}")))
}

/// Pair-product index set for the exhaustive exact tables: all unordered
/// pairs of multi-indices of weight `1..=w_cap` over `min(D, 2)`
/// coordinates.
fn pair_index_set(config: &RunConfig, w_cap: u32) -> Vec<(MultiIndex, MultiIndex)> {
    let dims = config.d.min(2);
    let indices = enumerate_multi_indices(dims, 1, w_cap, None);
    let mut pairs = Vec::new();
    for i in 0..indices.len() {
        for j in i..indices.len() {
            pairs.push((indices[i].clone(), indices[j].clone()));
        }
    }
    pairs
}

/// Representative pair products for the sampled Gram checks: enough to hit
/// every closed-form branch (identical, swapped, equal-weight and
/// mixed-weight pairs, and distinct pairs sharing an index sum) without the
/// exhaustive scan, which is exact and lives in the star decomposition
/// table. Keeping the Gram small keeps the per-run family of five-sigma
/// comparisons calibrated.
fn pair_gram_functions(config: &RunConfig, w_cap: u32) -> Vec<(MultiIndex, MultiIndex)> {
    let dims = config.d.min(2);
    let weight_one = enumerate_multi_indices(dims, 1, 1, None);
    let mut pairs: Vec<(MultiIndex, MultiIndex)> = Vec::new();
    for i in 0..weight_one.len() {
        for j in i..weight_one.len() {
            pairs.push((weight_one[i].clone(), weight_one[j].clone()));
        }
    }
    if w_cap >= 2 && dims == 2 {
        let e1 = MultiIndex::new([1, 0]);
        let e2 = MultiIndex::new([0, 1]);
        let s = MultiIndex::new([1, 1]);
        let d1 = MultiIndex::new([2, 0]);
        // (e1, s) and (d1, e2) share the index sum (2, 1) without sharing
        // the unordered pair; (d1, s) adds an equal-weight diagonal entry.
        pairs.push((e1, s.clone()));
        pairs.push((d1.clone(), e2));
        pairs.push((d1, s));
    }
    pairs
}

fn check_hall(config: &RunConfig) -> Result<CheckRow> {
    let w_cap = 3.min(config.n as u32);
    let partitions = Partition::enumerate_up_to(w_cap);
    let k = partitions.len();
    let funcs = partitions.clone();
    let values = move |x: &SetInput| -> Vec<Complex64> {
        funcs
            .iter()
            .map(|lambda| powersum_partition(lambda, x.row(0)))
            .collect()
    };
    let params = mc_params(config, 1);
    let gram = mc_gram(values, k, InnerProductKind::V, &params, child_seed(config.seed, "hall"))?;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let z = exact_v(&partitions[i], &partitions[j], config.n as u32)
                .expect("pair weights are capped at N");
            let expected = Complex64::new(z as f64, 0.0);
            worst = worst.max(gram.get(i, j).sigmas(expected));
        }
    }
    Ok(CheckRow::evaluated(
        "hall_orthogonality",
        (k * (k + 1) / 2) as u64,
        MC_SIGMA,
        worst,
        None,
    ))
}

fn check_pair_gram(config: &RunConfig, kind: InnerProductKind, identity: &str) -> Result<CheckRow> {
    let w_cap = 2.min((config.n / 2) as u32);
    if w_cap == 0 {
        return Ok(CheckRow::skipped(
            identity,
            "closed forms need index weights in 1..=N/2, so N ≥ 2".into(),
        ));
    }
    let pairs = pair_gram_functions(config, w_cap);
    let k = pairs.len();
    let funcs = pairs.clone();
    let values = move |x: &SetInput| -> Vec<Complex64> {
        funcs
            .iter()
            .map(|(a, b)| pair_product(a, b, x).expect("sampler emits full-width inputs"))
            .collect()
    };
    let params = mc_params(config, config.d);
    let purpose = format!("pair-gram-{identity}");
    let gram = mc_gram(values, k, kind, &params, child_seed(config.seed, &purpose))?;
    let n = config.n as u32;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let (a, b) = &pairs[i];
            let (c, d) = &pairs[j];
            let expected = match kind {
                InnerProductKind::A => exact_a_pair(a, b, c, d, n)?,
                InnerProductKind::AZero => exact_a_zero_pair(a, b, c, d, n)?,
                _ => unreachable!("only the composite kinds are scanned"),
            };
            worst = worst.max(gram.get(i, j).sigmas(Complex64::new(expected, 0.0)));
        }
    }
    Ok(CheckRow::evaluated(
        identity,
        (k * (k + 1) / 2) as u64,
        MC_SIGMA,
        worst,
        None,
    ))
}

fn check_star_table(config: &RunConfig) -> Result<CheckRow> {
    let identity = "star_decomposition_exact";
    let w_cap = 3.min((config.n / 2) as u32);
    if w_cap == 0 {
        return Ok(CheckRow::skipped(
            identity,
            "closed forms need index weights in 1..=N/2, so N ≥ 2".into(),
        ));
    }
    let pairs = pair_index_set(config, w_cap);
    let n = config.n as u32;
    let mut worst = 0.0f64;
    let mut count = 0u64;
    for (a, b) in &pairs {
        for (c, d) in &pairs {
            let star = exact_star_pair(a, b, c, d)?;
            let full = exact_a_pair(a, b, c, d, n)?;
            let zero = exact_a_zero_pair(a, b, c, d, n)?;
            worst = worst.max((star - (full - 2.0 * zero)).abs());
            count += 1;
        }
    }
    Ok(CheckRow::evaluated(identity, count, 0.0, worst, None))
}

fn check_blaschke_rational() -> Result<CheckRow> {
    let sixteenth = BigRational::new(BigInt::from(1), BigInt::from(16));
    let mut mismatches = 0u32;
    for t in 1..=12u32 {
        let mut r_pow = BigRational::one();
        for _ in 0..t {
            r_pow *= &sixteenth;
        }
        let expected = BigRational::one() + r_pow;
        if trunc_norm_sq_exact(t) != expected {
            mismatches += 1;
        }
    }
    Ok(CheckRow::evaluated(
        "blaschke_norms_rational",
        12,
        0.0,
        f64::from(mismatches),
        None,
    ))
}

fn check_blaschke_sup() -> Result<CheckRow> {
    let mut worst_excess = f64::NEG_INFINITY;
    for t in 1..=8u32 {
        let cap = 1.0 + 0.25f64.powi(t as i32);
        let mut sup = 0.0f64;
        for k in 0..SUP_GRID {
            let xi = Complex64::cis(std::f64::consts::TAU * k as f64 / SUP_GRID as f64);
            sup = sup.max(mobius_trunc(t, xi).norm());
        }
        worst_excess = worst_excess.max(sup - cap);
    }
    Ok(CheckRow::evaluated(
        "blaschke_sup_bound",
        8,
        0.0,
        worst_excess,
        None,
    ))
}

fn check_blaschke_lipschitz(config: &RunConfig) -> Result<CheckRow> {
    let mut rng = substream(config.seed, "cli", "blaschke-lipschitz", 0);
    let mut worst = 0.0f64;
    let mut count = 0u64;
    for t in 1..=6u32 {
        for _ in 0..LIPSCHITZ_PAIRS_PER_T {
            let mut draw = || {
                let rho = rng.random_range(0.0f64..1.0).sqrt();
                let theta = rng.random_range(0.0..std::f64::consts::TAU);
                rho * Complex64::cis(theta)
            };
            let (xi, omega) = (draw(), draw());
            let dist = (xi - omega).norm();
            if dist < 1e-12 {
                continue;
            }
            worst = worst.max((mobius_trunc(t, xi) - mobius_trunc(t, omega)).norm() / dist);
            count += 1;
        }
    }
    Ok(CheckRow::evaluated(
        "blaschke_lipschitz",
        count,
        6.0,
        worst,
        None,
    ))
}

fn check_duality(config: &RunConfig, corrupt: bool) -> Result<CheckRow> {
    let spec = config.spec()?;
    let support = g_support(spec.d_hat());
    let mut coeffs: Vec<f64> = support
        .iter()
        .map(|alpha| g_coeff(&spec, alpha))
        .collect::<Result<_>>()?;
    let note = if corrupt {
        coeffs[0] += 1e-3;
        Some("one coefficient deliberately shifted by 1e-3 (negative control)".into())
    } else {
        None
    };
    let mut rng = substream(config.seed, "cli", "duality", 0);
    let mut worst = 0.0f64;
    for _ in 0..DUALITY_INPUTS {
        let x = random_torus(config.d, 2 * config.n, &mut rng);
        let lhs = g_eval(&spec, &x)?;
        let mut rhs = Complex64::new(0.0, 0.0);
        for (alpha, c) in support.iter().zip(&coeffs) {
            let p = crate::polys::multi_powersum(alpha, &x)?;
            rhs += c * p * p;
        }
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(CheckRow::evaluated(
        "hard_coefficient_duality",
        DUALITY_INPUTS as u64,
        EXACT_TOL,
        worst,
        note,
    ))
}

fn check_norm_range(config: &RunConfig) -> Result<CheckRow> {
    let identity = "hard_norm_range";
    let spec = config.spec()?;
    if !spec.in_regime() {
        return Ok(CheckRow::skipped(
            identity,
            format!("norm certification needs 2d̂² ≤ N, got d̂ = {}, N = {}", spec.d_hat(), spec.n()),
        ));
    }
    let value = g_a_norm_sq(&spec)?;
    let excess = (1.0 - value).max(value - spec.a_norm_sq_upper());
    Ok(CheckRow::evaluated(
        identity,
        1,
        0.0,
        excess,
        Some(format!(
            "‖g‖² = {value:.6} must lie in [1, {:.6}]",
            spec.a_norm_sq_upper()
        )),
    ))
}

fn check_norm_mc(config: &RunConfig) -> Result<CheckRow> {
    let identity = "hard_norm_vs_sampling";
    let spec = config.spec()?;
    if !spec.in_regime() {
        return Ok(CheckRow::skipped(
            identity,
            format!("norm identity needs 2d̂² ≤ N, got d̂ = {}, N = {}", spec.d_hat(), spec.n()),
        ));
    }
    let expected = g_a_norm_sq(&spec)?;
    let eval = move |x: &SetInput| g_eval(&spec, x).expect("sampler emits full-width inputs");
    let params = mc_params(config, config.d);
    let est = mc_inner(&eval, &eval, InnerProductKind::A, &params, child_seed(config.seed, "norm"))?;
    Ok(CheckRow::evaluated(
        identity,
        1,
        MC_SIGMA,
        est.sigmas(Complex64::new(expected, 0.0)),
        Some(format!(
            "coefficient value {expected:.6}, sampled {:.6} ± {:.3e}",
            est.mean().re,
            est.stderr_re()
        )),
    ))
}

fn check_hard_sup(config: &RunConfig) -> Result<CheckRow> {
    let spec = config.spec()?;
    let cap = 12.0 * (config.n as f64).powi(2);
    let mut rng = substream(config.seed, "cli", "hard-sup", 0);
    let mut sup = 0.0f64;
    for _ in 0..config.mc_samples {
        let x = random_torus(config.d, 2 * config.n, &mut rng);
        sup = sup.max(g_eval(&spec, &x)?.norm());
    }
    Ok(CheckRow::evaluated(
        "hard_sup_bound",
        config.mc_samples as u64,
        0.0,
        sup - cap,
        Some(format!("largest sampled |g| = {sup:.4} against 12N² = {cap}")),
    ))
}

fn check_coeff_cap(config: &RunConfig) -> Result<CheckRow> {
    let spec = config.spec()?;
    let cap = (config.n as f64).powi(2)
        * (15.0f64 / 16.0).powi(2 * spec.d_hat() as i32);
    let support = g_support(spec.d_hat());
    let mut worst = f64::NEG_INFINITY;
    for alpha in &support {
        let c = g_coeff(&spec, alpha)?;
        worst = worst.max(c * c - cap);
    }
    Ok(CheckRow::evaluated(
        "hard_coefficient_cap",
        support.len() as u64,
        0.0,
        worst,
        None,
    ))
}

fn check_exp_bounds(config: &RunConfig) -> Result<CheckRow> {
    let spec = config.spec()?;
    let d_eff = spec.d_hat();
    let params = ExpNetParams::new(VERIFY_EXP_J, d_eff)?;
    let j = params.j();
    let mut rng = substream(config.seed, "cli", "exp-probe", 0);
    let mut worst_excess = f64::NEG_INFINITY;

    // Monomial extractions against (4/J!)(3/4)^J on |ξ| ≤ 3.
    let fk_bound =
        (4.0f64.ln() - ln_factorial(j) + f64::from(j) * 0.75f64.ln()).exp();
    for k in 0..=4u32 {
        let mut factorial = 1.0;
        for i in 1..=k {
            factorial *= f64::from(i);
        }
        let probed = sup_error_probe(
            |xi| exp_fk(&params, k, xi),
            |xi| (params.r() * xi).powu(k) / factorial,
            3.0,
            PROBE_GRID,
            &mut rng,
        );
        worst_excess = worst_excess.max(probed - fk_bound);
    }

    // Truncation surrogate against 17·D_eff·(3/4)^J on |ξ| ≤ 3.
    let f2_bound = 17.0 * f64::from(d_eff) * 0.75f64.powi(j as i32);
    let probed = sup_error_probe(
        |xi| exp_f2(&params, xi),
        |xi| mobius_trunc(d_eff, xi),
        3.0,
        PROBE_GRID,
        &mut rng,
    );
    worst_excess = worst_excess.max(probed - f2_bound);

    Ok(CheckRow::evaluated(
        "exp_surrogate_bounds",
        6,
        0.0,
        worst_excess,
        Some(format!("probed at J = {j}")),
    ))
}

fn check_oracle_star(config: &RunConfig) -> Result<CheckRow> {
    let mut rng = substream(config.seed, "cli", "oracle-star", 0);
    let mut violations = 0u64;
    let mut min_slack = f64::INFINITY;
    let mut trials = 0u64;
    for l in 1..=3usize {
        let report = rank_lemma_oracle(
            OracleBasis::Star { d: config.d },
            ORACLE_T,
            l,
            ORACLE_TRIALS,
            &mut rng,
        )?;
        violations += report.violations as u64;
        min_slack = min_slack.min(report.min_slack);
        trials += report.trials as u64;
    }
    Ok(CheckRow::evaluated(
        "rank_oracle_star",
        trials,
        0.0,
        violations as f64,
        Some(format!("smallest slack {min_slack:.3e}")),
    ))
}

fn check_oracle_equality(config: &RunConfig) -> Result<CheckRow> {
    let identity = "rank_oracle_equality";
    let t = 3.min(config.n / 2);
    if t == 0 {
        return Ok(CheckRow::skipped(
            identity,
            "eigenvalue-basis oracle needs 2T ≤ N with T ≥ 1".into(),
        ));
    }
    let mut rng = substream(config.seed, "cli", "oracle-hall", 0);
    let mut worst = 0.0f64;
    let mut trials = 0u64;
    for l in 1..=3usize {
        let report = rank_lemma_oracle(
            OracleBasis::Hall { n: config.n as u32 },
            t,
            l,
            ORACLE_TRIALS,
            &mut rng,
        )?;
        worst = worst.max(report.min_slack.abs());
        trials += report.trials as u64;
    }
    Ok(CheckRow::evaluated(identity, trials, 1e-9, worst, None))
}

fn check_net_identity(config: &RunConfig) -> Result<CheckRow> {
    let spec = config.spec()?;
    let net = PairwiseNet::exact(spec);
    let mut rng = substream(config.seed, "cli", "net-identity", 0);
    let mut worst = 0.0f64;
    for _ in 0..NET_IDENTITY_SAMPLES {
        let x = random_torus(config.d, 2 * config.n, &mut rng);
        worst = worst.max((net.eval(&x)? - g_prime_eval(&spec, &x)?).norm());
    }
    Ok(CheckRow::evaluated(
        "exact_net_identity",
        NET_IDENTITY_SAMPLES as u64,
        EXACT_TOL,
        worst,
        None,
    ))
}

/// Runs every exact-vs-sampling and coefficient identity at the configured
/// scale. Per-check regime violations and internal errors become skipped
/// rows, never process failures; `corrupt_coefficient` shifts one
/// hard-function coefficient by `1e-3` so the duality row must fail (the
/// negative control behind the hidden `--corrupt` flag).
pub fn cmd_verify(config: &RunConfig, corrupt_coefficient: bool) -> Result<VerifySection> {
    let d_hat = config.spec()?.d_hat();
    let rows = vec![
        guarded("hall_orthogonality", check_hall(config)),
        guarded(
            "pairwise_inner_products",
            check_pair_gram(config, InnerProductKind::A, "pairwise_inner_products"),
        ),
        guarded(
            "zero_mode_inner_products",
            check_pair_gram(config, InnerProductKind::AZero, "zero_mode_inner_products"),
        ),
        guarded("star_decomposition_exact", check_star_table(config)),
        guarded("blaschke_norms_rational", check_blaschke_rational()),
        guarded("blaschke_sup_bound", check_blaschke_sup()),
        guarded("blaschke_lipschitz", check_blaschke_lipschitz(config)),
        guarded(
            "hard_coefficient_duality",
            check_duality(config, corrupt_coefficient),
        ),
        guarded("hard_norm_range", check_norm_range(config)),
        guarded("hard_norm_vs_sampling", check_norm_mc(config)),
        guarded("hard_sup_bound", check_hard_sup(config)),
        guarded("hard_coefficient_cap", check_coeff_cap(config)),
        guarded("exp_surrogate_bounds", check_exp_bounds(config)),
        guarded("rank_oracle_star", check_oracle_star(config)),
        guarded("rank_oracle_equality", check_oracle_equality(config)),
        guarded("exact_net_identity", check_net_identity(config)),
    ];
    Ok(VerifySection { d_hat, rows })
}

// ─── Bound table ───────────────────────────────────────────────────────

/// Tabulates the three lower bounds over the configured width grid; rows
/// whose regime does not hold are annotated, not dropped.
pub fn cmd_bounds(config: &RunConfig) -> Result<BoundsSection> {
    let spec = config.spec()?;
    let n = config.n as u32;
    let d = config.d as u32;
    let symmetric_rank_cap = bound_simple_highd(n, d, 0)
        .ok()
        .map(|(_, t)| u64::try_from(t).unwrap_or(u64::MAX));
    let mut rows = Vec::new();
    for &l in &config.l_grid {
        let mut notes: Vec<String> = Vec::new();
        let one_d = if config.n % 2 == 0 {
            Some(bound_1d(n, l))
        } else {
            notes.push("1-D bound needs an even point count".into());
            None
        };
        let simple = match bound_simple_highd(n, d, u64::from(l)) {
            Ok((b, _)) => Some(b.value()),
            Err(e) => {
                notes.push(format!("simple: {e}"));
                None
            }
        };
        let (hard_exact, hard_closed) = match bound_hard_highd(&spec, l) {
            Ok(hb) => (Some(hb.exact()), Some(hb.closed())),
            Err(e) => {
                notes.push(format!("hard: {e}"));
                (None, None)
            }
        };
        rows.push(BoundRow {
            l,
            one_d,
            simple,
            hard_exact,
            hard_closed,
            note: if notes.is_empty() {
                None
            } else {
                Some(notes.join("; "))
            },
        });
    }
    Ok(BoundsSection {
        d_hat: spec.d_hat(),
        threshold_l: hard_threshold(config.n, spec.d_hat()),
        symmetric_rank_cap,
        rows,
    })
}

// ─── Approximation run ─────────────────────────────────────────────────

/// Builds the exact- and exponential-activation networks, probes their
/// sup error against `g′` over `mc_samples` torus inputs, and reports the
/// width/depth/weight ledger. The per-activation budget is
/// `ε_target / (18 N² d̂²)`; `J` is the smallest certified order unless
/// overridden.
pub fn cmd_approx(config: &RunConfig) -> Result<ApproxSection> {
    let spec = config.spec()?;
    let d_hat = spec.d_hat();
    let epsilon_budget = config.epsilon_target
        / (18.0 * (config.n as f64).powi(2) * f64::from(d_hat * d_hat));
    let j = config.j_override.unwrap_or_else(|| choose_j(d_hat, epsilon_budget));

    let mut rng = substream(config.seed, "cli", "net-probe", 0);
    let inputs: Vec<SetInput> = (0..config.mc_samples)
        .map(|_| random_torus(config.d, 2 * config.n, &mut rng))
        .collect();
    let reference: Vec<Complex64> = inputs
        .iter()
        .map(|x| g_prime_eval(&spec, x).expect("inputs are full-width"))
        .collect();
    let probe = |net: &PairwiseNet| -> Result<f64> {
        let mut sup = 0.0f64;
        for (x, want) in inputs.iter().zip(&reference) {
            sup = sup.max((net.eval(x)? - want).norm());
        }
        Ok(sup)
    };

    let mut rows = Vec::new();
    let exact_net = PairwiseNet::exact(spec);
    let sup = probe(&exact_net)?;
    rows.push(ApproxRow {
        activation: "exact".into(),
        j: None,
        certified_epsilon: 0.0,
        probe_samples: config.mc_samples as u64,
        probed_sup_error: sup,
        error_budget: EXACT_TOL,
        tree_width: u64::from(exact_net.padded_width()),
        tree_depth: u64::from(exact_net.tree_depth()),
        activation_neurons: None,
        max_weight: None,
        status: if sup <= EXACT_TOL {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        note: None,
    });

    let params = ExpNetParams::new(j, d_hat)?;
    let exp_row = match ActivationPair::from_exp(params)
        .and_then(|act| {
            let certified = act.epsilon();
            PairwiseNet::with_activations(spec, act).map(|net| (net, certified))
        }) {
        Ok((net, certified)) => {
            let sup = probe(&net)?;
            let note = (certified > epsilon_budget).then(|| {
                format!(
                    "certified error {certified:.3e} exceeds the per-activation budget {epsilon_budget:.3e}"
                )
            });
            ApproxRow {
                activation: "exp".into(),
                j: Some(j),
                certified_epsilon: certified,
                probe_samples: config.mc_samples as u64,
                probed_sup_error: sup,
                error_budget: config.epsilon_target,
                tree_width: u64::from(net.padded_width()),
                tree_depth: u64::from(net.tree_depth()),
                activation_neurons: Some(u64::from(params.neuron_count())),
                max_weight: Some(params.max_weight()),
                status: if sup <= config.epsilon_target {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                note,
            }
        }
        Err(e) => ApproxRow {
            activation: "exp".into(),
            j: Some(j),
            certified_epsilon: params.error_bound(),
            probe_samples: 0,
            probed_sup_error: f64::INFINITY,
            error_budget: config.epsilon_target,
            tree_width: 0,
            tree_depth: 0,
            activation_neurons: Some(u64::from(params.neuron_count())),
            max_weight: Some(params.max_weight()),
            status: CheckStatus::Fail,
            note: Some(format!("construction failed: {e}")),
        },
    };
    rows.push(exp_row);

    Ok(ApproxSection {
        d_hat,
        epsilon_target: config.epsilon_target,
        epsilon_budget,
        j,
        rows,
    })
}

/// Runs verify, bounds, and approx into one document; deterministic given
/// the seed.
pub fn cmd_report(config: &RunConfig, corrupt_coefficient: bool) -> Result<SeparationReport> {
    let mut report = SeparationReport::empty(config.clone());
    report.verify = Some(cmd_verify(config, corrupt_coefficient)?);
    report.bounds = Some(cmd_bounds(config)?);
    report.approx = Some(cmd_approx(config)?);
    Ok(report)
}

// ─── Rendering ─────────────────────────────────────────────────────────

/// The report as one pretty-printed JSON document (trailing newline
/// included). Field order is fixed by the structs and floats print as
/// shortest round-trip decimals, so equal reports render to equal bytes.
pub fn render_json(report: &SeparationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report structs always serialize");
    s.push('\n');
    s
}

fn opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_table(headers: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(headers).expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

/// The report as RFC-4180 tables, one `(section name, csv text)` pair per
/// present section, config echo first. Every row carries its section name
/// so the concatenated stream stays unambiguous.
pub fn render_csv(report: &SeparationReport) -> Vec<(&'static str, String)> {
    let mut out = Vec::new();

    let config_value =
        serde_json::to_value(&report.config).expect("config always serializes");
    let mut config_rows = vec![vec![
        "config".to_string(),
        "schema_version".to_string(),
        report.schema_version.to_string(),
    ]];
    if let serde_json::Value::Object(map) = config_value {
        for (key, value) in map {
            config_rows.push(vec!["config".to_string(), key, value.to_string()]);
        }
    }
    out.push((
        "config",
        csv_table(&["section", "key", "value"], config_rows),
    ));

    if let Some(section) = &report.verify {
        let rows = section
            .rows
            .iter()
            .map(|r| {
                vec![
                    "verify".to_string(),
                    r.identity.clone(),
                    r.instances.to_string(),
                    r.bound.to_string(),
                    r.measured.to_string(),
                    r.margin.to_string(),
                    r.status.to_string(),
                    r.note.clone().unwrap_or_default(),
                ]
            })
            .collect();
        out.push((
            "verify",
            csv_table(
                &["section", "identity", "instances", "bound", "measured", "margin", "status", "note"],
                rows,
            ),
        ));
    }

    if let Some(section) = &report.bounds {
        let rows = section
            .rows
            .iter()
            .map(|r| {
                vec![
                    "bounds".to_string(),
                    r.l.to_string(),
                    opt_f64(r.one_d),
                    opt_f64(r.simple),
                    opt_f64(r.hard_exact),
                    opt_f64(r.hard_closed),
                    section.threshold_l.to_string(),
                    opt_u64(section.symmetric_rank_cap),
                    r.note.clone().unwrap_or_default(),
                ]
            })
            .collect();
        out.push((
            "bounds",
            csv_table(
                &["section", "l", "one_d", "simple", "hard_exact", "hard_closed", "threshold_l", "symmetric_rank_cap", "note"],
                rows,
            ),
        ));
    }

    if let Some(section) = &report.approx {
        let rows = section
            .rows
            .iter()
            .map(|r| {
                vec![
                    "approx".to_string(),
                    r.activation.clone(),
                    r.j.map(|j| j.to_string()).unwrap_or_default(),
                    r.certified_epsilon.to_string(),
                    r.probe_samples.to_string(),
                    r.probed_sup_error.to_string(),
                    r.error_budget.to_string(),
                    r.tree_width.to_string(),
                    r.tree_depth.to_string(),
                    opt_u64(r.activation_neurons),
                    opt_f64(r.max_weight),
                    r.status.to_string(),
                    r.note.clone().unwrap_or_default(),
                ]
            })
            .collect();
        out.push((
            "approx",
            csv_table(
                &["section", "activation", "j", "certified_epsilon", "probe_samples", "probed_sup_error", "error_budget", "tree_width", "tree_depth", "activation_neurons", "max_weight", "status", "note"],
                rows,
            ),
        ));
    }

    out
}

fn write_output(report: &SeparationReport) -> std::io::Result<()> {
    match report.config.output_format {
        OutputFormat::Json => {
            let body = render_json(report);
            match &report.config.output_path {
                Some(path) => {
                    fs::write(path, body)?;
                    eprintln!("wrote {}", path.display());
                }
                None => {
                    std::io::stdout().write_all(body.as_bytes())?;
                }
            }
        }
        OutputFormat::Csv => {
            let tables = render_csv(report);
            match &report.config.output_path {
                Some(path) => {
                    let stem = if path.extension().is_some_and(|e| e == "csv") {
                        path.with_extension("")
                    } else {
                        path.clone()
                    };
                    for (name, body) in &tables {
                        let target = PathBuf::from(format!("{}.{name}.csv", stem.display()));
                        fs::write(&target, body)?;
                        eprintln!("wrote {}", target.display());
                    }
                }
                None => {
                    let mut stdout = std::io::stdout().lock();
                    for (i, (_, body)) in tables.iter().enumerate() {
                        if i > 0 {
                            stdout.write_all(b"\n")?;
                        }
                        stdout.write_all(body.as_bytes())?;
                    }
                }
            }
        }
    }
    Ok(())
}

// ─── Argument parsing ──────────────────────────────────────────────────

#[derive(Parser, Debug)]
#[command(
    name = "symsep",
    version,
    about = "Symmetric-polynomial separation toolkit",
    long_about = "Verifies powersum orthogonality and hard-function identities by seeded \
                  Monte Carlo, tabulates rank-truncation lower bounds, and certifies \
                  pairwise-symmetric network approximations. Reports are deterministic \
                  given the seed."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the exact-identity and Monte Carlo verification suites.
    Verify(RunArgs),
    /// Tabulate rank-truncation lower bounds over the width grid.
    Bounds(RunArgs),
    /// Build exact and exponential-activation networks and probe their error.
    Approx(RunArgs),
    /// Run everything and emit one combined report.
    Report(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON config file (RunConfig schema); explicit flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Set size N; structured inputs carry 2N columns.
    #[arg(long)]
    n: Option<usize>,
    /// Ambient dimension D.
    #[arg(long)]
    d: Option<usize>,
    /// Effective dimension override (default min(D, ⌊√(N/2)⌋)).
    #[arg(long = "d-hat")]
    d_hat: Option<u32>,
    /// Comma-separated symmetric-width grid for the bound table.
    #[arg(long = "l-grid", value_delimiter = ',')]
    l_grid: Option<Vec<u32>>,
    /// Monte Carlo samples per estimator.
    #[arg(long)]
    samples: Option<usize>,
    /// Chain burn-in sweeps (default 10N²).
    #[arg(long = "burn-in")]
    burn_in: Option<usize>,
    /// Sweeps between retained chain states (default N).
    #[arg(long)]
    thin: Option<usize>,
    /// Sup-error target for the approximation run, in (0, 1/100].
    #[arg(long)]
    epsilon: Option<f64>,
    /// Root-of-unity order override for the exponential activations.
    #[arg(long)]
    j: Option<u32>,
    /// Root seed; every random stream derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output path (stdout when omitted); csv writes one file per section.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shift one hard-function coefficient by 1e-3 so verification must
    /// fail (negative control).
    #[arg(long, hide = true)]
    corrupt: bool,
}

/// File-side [`RunConfig`]: same field names, everything optional, unknown
/// keys rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    n: Option<usize>,
    d: Option<usize>,
    d_hat_override: Option<u32>,
    l_grid: Option<Vec<u32>>,
    mc_samples: Option<usize>,
    burn_in: Option<usize>,
    thin: Option<usize>,
    epsilon_target: Option<f64>,
    j_override: Option<u32>,
    seed: Option<u64>,
    output_format: Option<OutputFormat>,
    output_path: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> std::result::Result<RunConfig, String> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                serde_json::from_str::<ConfigFile>(&text)
                    .map_err(|e| format!("cannot parse {}: {e}", path.display()))?
            }
            None => ConfigFile::default(),
        };
        let n = self.n.or(file.n).unwrap_or(DEFAULT_N);
        let d = self.d.or(file.d).unwrap_or(DEFAULT_D);
        let mut config = RunConfig::defaults(n, d);
        config.d_hat_override = self.d_hat.or(file.d_hat_override);
        if let Some(grid) = self.l_grid.clone().or(file.l_grid) {
            config.l_grid = grid;
        }
        if let Some(samples) = self.samples.or(file.mc_samples) {
            config.mc_samples = samples;
        }
        if let Some(burn_in) = self.burn_in.or(file.burn_in) {
            config.burn_in = burn_in;
        }
        if let Some(thin) = self.thin.or(file.thin) {
            config.thin = thin;
        }
        if let Some(epsilon) = self.epsilon.or(file.epsilon_target) {
            config.epsilon_target = epsilon;
        }
        config.j_override = self.j.or(file.j_override);
        if let Some(seed) = self.seed.or(file.seed) {
            config.seed = seed;
        }
        if let Some(format) = self.format.or(file.output_format) {
            config.output_format = format;
        }
        config.output_path = self.out.clone().or(file.output_path);
        Ok(config)
    }
}

/// Parses the command line, runs the selected subcommand, writes the
/// report, and returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let (args, build): (
        &RunArgs,
        fn(&RunConfig, bool) -> Result<SeparationReport>,
    ) = match &cli.command {
        Command::Verify(a) => (a, |c, corrupt| {
            let mut r = SeparationReport::empty(c.clone());
            r.verify = Some(cmd_verify(c, corrupt)?);
            Ok(r)
        }),
        Command::Bounds(a) => (a, |c, _| {
            let mut r = SeparationReport::empty(c.clone());
            r.bounds = Some(cmd_bounds(c)?);
            Ok(r)
        }),
        Command::Approx(a) => (a, |c, _| {
            let mut r = SeparationReport::empty(c.clone());
            r.approx = Some(cmd_approx(c)?);
            Ok(r)
        }),
        Command::Report(a) => (a, |c, corrupt| cmd_report(c, corrupt)),
    };

    let config = match args.resolve() {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("symsep: {msg}");
            return 2;
        }
    };
    if let Err(e) = config.validate() {
        eprintln!("symsep: invalid configuration: {e}");
        return 2;
    }
    let report = match build(&config, args.corrupt) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("symsep: {e}");
            return 2;
        }
    };
    if let Err(e) = write_output(&report) {
        eprintln!("symsep: write failed: {e}");
        return 2;
    }
    report.exit_code()
}
