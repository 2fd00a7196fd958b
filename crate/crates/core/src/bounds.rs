//! Rank-truncation lower bounds and a small-instance lemma oracle.
//!
//! Every bound here rests on one mechanism. A symmetric function built
//! from pairwise powersum products corresponds to a symmetric coefficient
//! matrix `H` via `F_H = ½ Σ_{t,t'} H_{tt'} p_t p_{t'}`; a width-`L`
//! approximator can only realize matrices of rank at most `L`, and for the
//! norms in play
//!
//! ```text
//! ‖F_H − F_G‖² ≥ ½ ‖H − G‖_F²
//! ```
//!
//! with equality for the 1-D eigenvalue norm. When the target `G` is
//! diagonal, the best rank-`L` error is exactly the sum of all but the `L`
//! largest squared diagonal entries, which gives three concrete curves:
//!
//! - [`bound_1d`]: the identity-spectrum case, `max(0, 1 − 2L/N)`;
//! - [`bound_simple_highd`]: a flat spectrum of `T = C(N/2+D−1, N/2)`
//!   equal entries, `1/6 − L/(6T)`;
//! - [`bound_hard_highd`]: the hard function's true spectrum
//!   `{2|g_α|/‖g‖_A}`, evaluated exactly and compared with the pessimistic
//!   closed form `1/6 − 2LN²(15/16)^{2d̂}`.
//!
//! [`rank_lemma_oracle`] checks the displayed inequality itself on random
//! small instances, entirely in coefficient space: both sides reduce to
//! finite sums of exact pair inner products, so the test carries no Monte
//! Carlo noise.

use crate::algebra::{count_exact_weight, enumerate_multi_indices, MultiIndex, Partition};
use crate::hardfn::{g_coeff, g_support, HardFnSpec};
use crate::inner::{exact_star_pair, exact_v};
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

// ─── Spectra and curves ────────────────────────────────────────────────

/// Label attached to one diagonal entry of a spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumKey {
    /// Scalar powersum degree (1-D constructions).
    Degree(u32),
    /// Multi-index (high-dimensional constructions).
    Index(MultiIndex),
}

/// A diagonal coefficient matrix, stored as labelled entry magnitudes with
/// the cached total `Σ magnitude²`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalSpectrum {
    entries: Vec<(SpectrumKey, f64)>,
    total_sq: f64,
}

impl DiagonalSpectrum {
    pub fn new(entries: Vec<(SpectrumKey, f64)>) -> Result<Self> {
        if entries.iter().any(|(_, m)| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidArgument(
                "spectrum magnitudes must be finite and non-negative".into(),
            ));
        }
        let total_sq = entries.iter().map(|(_, m)| m * m).sum();
        Ok(Self { entries, total_sq })
    }

    /// `k` equal entries of the given magnitude, labelled by degree
    /// `1..=k`.
    pub fn identity(k: u32, magnitude: f64) -> Self {
        Self::new(
            (1..=k)
                .map(|t| (SpectrumKey::Degree(t), magnitude))
                .collect(),
        )
        .expect("constant spectrum is valid")
    }

    pub fn entries(&self) -> &[(SpectrumKey, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_sq(&self) -> f64 {
        self.total_sq
    }
}

/// The normalized hard function's diagonal spectrum `{2|g_α|/‖g‖_A}` over
/// its coefficient support. Its total square is exactly `1/3` by the
/// definition of `‖g‖_A`, independent of `N`.
pub fn hard_spectrum(spec: &HardFnSpec) -> DiagonalSpectrum {
    let entries = g_support(spec.d_hat())
        .into_iter()
        .map(|alpha| {
            let m = 2.0 * g_coeff(spec, &alpha).expect("support excludes zero").abs()
                / spec.a_norm();
            (SpectrumKey::Index(alpha), m)
        })
        .collect();
    DiagonalSpectrum::new(entries).expect("hard spectrum magnitudes are finite")
}

/// One row of a separation curve: approximator width against the certified
/// lower bound at that width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub l: u32,
    pub lower_bound: f64,
}

/// A lower-bound curve at fixed geometry, monotone non-increasing in `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationCurve {
    pub n: usize,
    pub d: usize,
    pub d_hat: u32,
    pub rows: Vec<CurveRow>,
}

impl SeparationCurve {
    pub fn new(n: usize, d: usize, d_hat: u32, rows: Vec<CurveRow>) -> Result<Self> {
        for w in rows.windows(2) {
            if w[1].lower_bound > w[0].lower_bound + 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "lower bound must be non-increasing in width: {} then {}",
                    w[0].lower_bound, w[1].lower_bound
                )));
            }
        }
        Ok(Self { n, d, d_hat, rows })
    }
}

// ─── The three bounds ──────────────────────────────────────────────────

/// A bound reported both raw (as the formula gives it, possibly negative)
/// and clamped at zero for presentation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClampedBound {
    raw: f64,
}

impl ClampedBound {
    pub fn raw(&self) -> f64 {
        self.raw
    }

    pub fn value(&self) -> f64 {
        self.raw.max(0.0)
    }
}

/// 1-D separation bound at set size `n` (even) and symmetric width `l`:
/// `max(0, 1 − 2L/N)`.
pub fn bound_1d(n: u32, l: u32) -> f64 {
    assert!(n >= 2 && n % 2 == 0, "set size must be even and positive");
    (1.0 - 2.0 * f64::from(l) / f64::from(n)).max(0.0)
}

/// High-dimensional bound over the flat spectrum of all `T = C(N/2+D−1,
/// N/2)` exact-weight-`N/2` directions: `1/6 − L/(6T)`.
///
/// Requires `min(N/2, D−1) ≥ 2`. Also returns the pool size `T`.
pub fn bound_simple_highd(n: u32, d: u32, l: u64) -> Result<(ClampedBound, u128)> {
    let half = n / 2;
    if half.min(d.saturating_sub(1)) < 2 {
        return Err(Error::OutOfRegime(format!(
            "flat-spectrum bound needs min(N/2, D−1) ≥ 2, got N = {n}, D = {d}"
        )));
    }
    let t = count_exact_weight(d, half);
    let raw = 1.0 / 6.0 - (l as f64) / (6.0 * t as f64);
    Ok((ClampedBound { raw }, t))
}

/// Best rank-`l` truncation error of a diagonal spectrum: the total square
/// minus the `l` largest squared magnitudes, ties broken by entry order.
pub fn rank_trunc_error_sq(spectrum: &DiagonalSpectrum, l: usize) -> f64 {
    let mut order: Vec<usize> = (0..spectrum.len()).collect();
    order.sort_by(|&a, &b| {
        spectrum.entries()[b]
            .1
            .partial_cmp(&spectrum.entries()[a].1)
            .expect("magnitudes are finite")
    });
    let removed: f64 = order
        .iter()
        .take(l)
        .map(|&i| spectrum.entries()[i].1.powi(2))
        .sum();
    (spectrum.total_sq() - removed).max(0.0)
}

/// Hard-function bound at width `l`: the exact value `½·(‖G′‖_F² − Σ_{l
/// largest} m²)` over the true spectrum, paired with the closed-form
/// pessimistic estimate `1/6 − 2LN²(15/16)^{2d̂}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HardBound {
    exact_raw: f64,
    closed_raw: f64,
}

impl HardBound {
    pub fn exact_raw(&self) -> f64 {
        self.exact_raw
    }

    pub fn closed_raw(&self) -> f64 {
        self.closed_raw
    }

    pub fn exact(&self) -> f64 {
        self.exact_raw.max(0.0)
    }

    pub fn closed(&self) -> f64 {
        self.closed_raw.max(0.0)
    }
}

/// Evaluates [`HardBound`] at width `l`; the spec must be in the sampling
/// regime `d̂² ≤ N/2`.
pub fn bound_hard_highd(spec: &HardFnSpec, l: u32) -> Result<HardBound> {
    if !spec.in_regime() {
        return Err(Error::OutOfRegime(format!(
            "hard bound needs d̂² ≤ N/2, got d̂ = {}, N = {}",
            spec.d_hat(),
            spec.n()
        )));
    }
    Ok(hard_bound_unchecked(spec, l))
}

fn hard_bound_unchecked(spec: &HardFnSpec, l: u32) -> HardBound {
    let spectrum = hard_spectrum(spec);
    let exact_raw = 0.5 * rank_trunc_error_sq(&spectrum, l as usize);
    let n_sq = (spec.n() as f64).powi(2);
    let coeff_cap = (15.0 / 16.0f64).powi(2 * spec.d_hat() as i32);
    let closed_raw = 1.0 / 6.0 - 2.0 * f64::from(l) * n_sq * coeff_cap;
    HardBound { exact_raw, closed_raw }
}

/// Width threshold `(1/24)·N^{−2}·(16/15)^{2d̂}` below which the hard
/// bound is at least `1/12`.
pub fn hard_threshold(n: usize, d_hat: u32) -> f64 {
    (16.0 / 15.0f64).powi(2 * d_hat as i32) / (24.0 * (n as f64).powi(2))
}

// ─── Rank Lemma oracle ─────────────────────────────────────────────────

/// Which exact pair-product geometry the oracle expands against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleBasis {
    /// Scalar powersums `p_1, …, p_T` under the eigenvalue norm at set
    /// size `n`; needs `2T ≤ n` so all pair weights stay orthogonal.
    Hall { n: u32 },
    /// Multisymmetric powersums (the first `T` indices of weight ≥ 1 in
    /// `d` coordinates) under the star norm.
    Star { d: usize },
}

/// Outcome of a randomized Rank Lemma scan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct OracleReport {
    pub t: usize,
    pub l: usize,
    pub trials: usize,
    /// Trials with `‖f − g‖² < ½‖CᵀVC − G‖_F² − 1e−9`.
    pub violations: usize,
    /// Smallest observed `‖f − g‖² − ½‖CᵀVC − G‖_F²`.
    pub min_slack: f64,
}

const ORACLE_MAX_T: usize = 12;
const ORACLE_TOL: f64 = 1e-9;

/// Randomized check of `‖f − g‖² ≥ ½‖CᵀVC − G‖_F²` on small instances.
///
/// Each trial draws a coefficient matrix `C` (`l × t`), a symmetric `V`
/// (`l × l`), and a diagonal `G` (`t` entries), all uniform in `[−1, 1]`,
/// forms `M = CᵀVC − G`, and evaluates `‖F_M‖²` by expanding the pair
/// products through the exact inner products of `basis`. No sampling noise
/// enters either side.
pub fn rank_lemma_oracle(
    basis: OracleBasis,
    t: usize,
    l: usize,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<OracleReport> {
    if t == 0 || l == 0 || trials == 0 {
        return Err(Error::InvalidArgument(
            "oracle needs t, l, trials all positive".into(),
        ));
    }
    if t > ORACLE_MAX_T {
        return Err(Error::InvalidArgument(format!(
            "oracle is a desk-scale tool, t ≤ {ORACLE_MAX_T}"
        )));
    }
    let gram = basis_pair_gram(basis, t)?;
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..trials {
        let c: Vec<Vec<f64>> = (0..l)
            .map(|_| (0..t).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let mut v = vec![vec![0.0; l]; l];
        for i in 0..l {
            for j in i..l {
                let x = rng.random_range(-1.0..1.0);
                v[i][j] = x;
                v[j][i] = x;
            }
        }
        let g: Vec<f64> = (0..t).map(|_| rng.random_range(-1.0..1.0)).collect();

        let m = residual_matrix(&c, &v, &g, t, l);
        let slack = lemma_slack(&m, &gram, t);
        min_slack = min_slack.min(slack);
        if slack < -ORACLE_TOL {
            violations += 1;
        }
    }
    Ok(OracleReport {
        t,
        l,
        trials,
        violations,
        min_slack,
    })
}

fn residual_matrix(
    c: &[Vec<f64>],
    v: &[Vec<f64>],
    g: &[f64],
    t: usize,
    l: usize,
) -> Vec<Vec<f64>> {
    // M = CᵀVC − diag(G)
    let mut vc = vec![vec![0.0; t]; l];
    for i in 0..l {
        for j in 0..t {
            vc[i][j] = (0..l).map(|k| v[i][k] * c[k][j]).sum();
        }
    }
    let mut m = vec![vec![0.0; t]; t];
    for a in 0..t {
        for b in 0..t {
            m[a][b] = (0..l).map(|k| c[k][a] * vc[k][b]).sum();
        }
        m[a][a] -= g[a];
    }
    m
}

fn lemma_slack(m: &[Vec<f64>], gram: &[Vec<f64>], t: usize) -> f64 {
    // F_M = Σ_{i<j} M_ij · p_i p_j + Σ_i (M_ii/2) · p_i², so collect the
    // unordered-pair coefficients and push them through the pair Gram.
    let mut coeffs = Vec::with_capacity(t * (t + 1) / 2);
    for i in 0..t {
        for j in i..t {
            coeffs.push(if i == j { m[i][i] / 2.0 } else { m[i][j] });
        }
    }
    let lhs: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(p, cp)| {
            coeffs
                .iter()
                .enumerate()
                .map(|(q, cq)| cp * cq * gram[p][q])
                .sum::<f64>()
        })
        .sum();
    let frob_sq: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|x| x * x)
        .sum();
    lhs - 0.5 * frob_sq
}

fn basis_pair_gram(basis: OracleBasis, t: usize) -> Result<Vec<Vec<f64>>> {
    match basis {
        OracleBasis::Hall { n } => {
            if 2 * t as u32 > n {
                return Err(Error::OutOfRegime(format!(
                    "powersum pairs up to degree {} need set size ≥ {}, got {n}",
                    t,
                    2 * t
                )));
            }
            let pairs: Vec<Partition> = unordered_pairs(t)
                .into_iter()
                .map(|(i, j)| Partition::new([i as u32 + 1, j as u32 + 1]))
                .collect();
            let k = pairs.len();
            let mut gram = vec![vec![0.0; k]; k];
            for p in 0..k {
                for q in 0..k {
                    let v = exact_v(&pairs[p], &pairs[q], n)
                        .expect("pair weights validated above");
                    gram[p][q] = v as f64;
                }
            }
            Ok(gram)
        }
        OracleBasis::Star { d } => {
            let indices = leading_indices(d, t)?;
            let pairs = unordered_pairs(t);
            let k = pairs.len();
            let mut gram = vec![vec![0.0; k]; k];
            for (p, &(i, j)) in pairs.iter().enumerate() {
                for (q, &(a, b)) in pairs.iter().enumerate() {
                    gram[p][q] = exact_star_pair(
                        &indices[i],
                        &indices[j],
                        &indices[a],
                        &indices[b],
                    )?;
                }
            }
            Ok(gram)
        }
    }
}

fn unordered_pairs(t: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(t * (t + 1) / 2);
    for i in 0..t {
        for j in i..t {
            out.push((i, j));
        }
    }
    out
}

fn leading_indices(d: usize, t: usize) -> Result<Vec<MultiIndex>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut w_max = 1;
    loop {
        let all = enumerate_multi_indices(d, 1, w_max, None);
        if all.len() >= t {
            return Ok(all.into_iter().take(t).collect());
        }
        w_max += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::substream;

    #[test]
    fn one_dimensional_bound_values() {
        assert_eq!(bound_1d(8, 2), 0.5);
        assert_eq!(bound_1d(8, 0), 1.0);
        assert_eq!(bound_1d(8, 4), 0.0);
        assert_eq!(bound_1d(8, 97), 0.0);
        for n in [4u32, 8, 12, 16] {
            assert_eq!(bound_1d(n, n / 4), 0.5, "N = {n}");
            for l in 1..=n {
                assert!(bound_1d(n, l) <= bound_1d(n, l - 1));
            }
        }
    }

    #[test]
    #[should_panic(expected = "even")]
    fn one_dimensional_bound_rejects_odd_sizes() {
        bound_1d(7, 1);
    }

    #[test]
    fn flat_spectrum_bound_values() {
        let (b, t) = bound_simple_highd(4, 3, 0).unwrap();
        assert_eq!(t, 6);
        assert!((b.value() - 1.0 / 6.0).abs() < 1e-15);
        let (at_t, _) = bound_simple_highd(4, 3, 6).unwrap();
        assert_eq!(at_t.value(), 0.0);
        assert!((at_t.raw()).abs() < 1e-15);
        // past the pool the raw value goes negative, the clamp holds at 0
        let (past, _) = bound_simple_highd(4, 3, 60).unwrap();
        assert!(past.raw() < 0.0);
        assert_eq!(past.value(), 0.0);

        assert!(bound_simple_highd(4, 2, 0).is_err());
        assert!(bound_simple_highd(2, 5, 0).is_err());

        // wide pool keeps the bound near 1/6 for small widths
        let (wide, pool) = bound_simple_highd(8, 5, 2).unwrap();
        assert_eq!(pool, 70);
        assert!(wide.value() >= (1.0 / 6.0) * (1.0 - 2.0 / 70.0) - 1e-15);
    }

    #[test]
    fn truncation_error_of_explicit_spectra() {
        let spec = DiagonalSpectrum::new(vec![
            (SpectrumKey::Degree(1), 3.0),
            (SpectrumKey::Degree(2), 1.0),
            (SpectrumKey::Degree(3), 3.0),
        ])
        .unwrap();
        assert_eq!(spec.total_sq(), 19.0);
        assert_eq!(rank_trunc_error_sq(&spec, 0), 19.0);
        assert_eq!(rank_trunc_error_sq(&spec, 1), 10.0);
        assert_eq!(rank_trunc_error_sq(&spec, 2), 1.0);
        assert_eq!(rank_trunc_error_sq(&spec, 3), 0.0);
        assert_eq!(rank_trunc_error_sq(&spec, 17), 0.0);

        let flat = DiagonalSpectrum::identity(6, 0.5);
        for l in 0..=6usize {
            let expect = (6 - l) as f64 * 0.25;
            assert!((rank_trunc_error_sq(&flat, l) - expect).abs() < 1e-15);
        }

        assert!(DiagonalSpectrum::new(vec![(SpectrumKey::Degree(1), -1.0)]).is_err());
    }

    #[test]
    fn hard_spectrum_total_is_one_third() {
        for d_hat in 1..=4u32 {
            let n = 2 * (d_hat * d_hat) as usize;
            let spec = HardFnSpec::with_d_hat(n, d_hat as usize, d_hat).unwrap();
            let spectrum = hard_spectrum(&spec);
            assert!(
                (spectrum.total_sq() - 1.0 / 3.0).abs() < 1e-12,
                "d̂ = {d_hat}: {}",
                spectrum.total_sq()
            );
        }
    }

    #[test]
    fn hard_bound_exact_and_closed_form() {
        let spec = HardFnSpec::with_d_hat(8, 2, 2).unwrap();
        let at0 = bound_hard_highd(&spec, 0).unwrap();
        assert!((at0.exact() - 1.0 / 6.0).abs() < 1e-12);
        assert!((at0.closed() - 1.0 / 6.0).abs() < 1e-12);

        for l in 0..=64u32 {
            let b = bound_hard_highd(&spec, l).unwrap();
            assert!(
                b.exact_raw() >= b.closed_raw() - 1e-12,
                "L = {l}: exact {} below closed {}",
                b.exact_raw(),
                b.closed_raw()
            );
        }

        let out = HardFnSpec::with_d_hat(4, 2, 2).unwrap();
        assert!(matches!(bound_hard_highd(&out, 1), Err(Error::OutOfRegime(_))));
    }

    #[test]
    fn hard_bound_threshold_gives_a_twelfth() {
        for d_hat in 1..=4u32 {
            for n in 1..=32usize {
                let spec = match HardFnSpec::with_d_hat(n, d_hat as usize, d_hat) {
                    Ok(s) if s.in_regime() => s,
                    _ => continue,
                };
                let cap = hard_threshold(n, d_hat);
                let mut l = 0u32;
                while f64::from(l) <= cap {
                    let b = bound_hard_highd(&spec, l).unwrap();
                    assert!(b.closed() >= 1.0 / 12.0 - 1e-12, "N={n} d̂={d_hat} L={l}");
                    assert!(b.exact() >= 1.0 / 12.0 - 1e-12);
                    l += 1;
                }
            }
        }
    }

    #[test]
    fn bounds_are_monotone_over_the_grid() {
        // in L, for the flat bound
        for n in [4u32, 8, 12, 16] {
            for d in [3u32, 4, 5] {
                if n / 2 < 2 || d < 3 {
                    continue;
                }
                let mut prev = f64::INFINITY;
                for l in 0..=64u64 {
                    let (b, _) = bound_simple_highd(n, d, l).unwrap();
                    assert!(b.value() <= prev + 1e-15);
                    prev = b.value();
                }
            }
        }
        // in L and d̂, for the exact spectral value (N-free, so the scan
        // covers every d̂ without the sampling-regime gate)
        for n in [8usize, 16] {
            let mut prev_by_l: Option<Vec<f64>> = None;
            for d_hat in 1..=4u32 {
                let spec = HardFnSpec::with_d_hat(n, d_hat as usize, d_hat).unwrap();
                let spectrum = hard_spectrum(&spec);
                let curve: Vec<f64> = (0..=64usize)
                    .map(|l| 0.5 * rank_trunc_error_sq(&spectrum, l))
                    .collect();
                for w in curve.windows(2) {
                    assert!(w[1] <= w[0] + 1e-15);
                }
                if let Some(prev) = &prev_by_l {
                    for (lo, hi) in prev.iter().zip(&curve) {
                        assert!(hi >= &(lo - 1e-12), "d̂ = {d_hat}");
                    }
                }
                prev_by_l = Some(curve);
            }
        }
    }

    #[test]
    fn curve_rejects_increasing_rows() {
        let ok = SeparationCurve::new(
            8,
            2,
            2,
            vec![
                CurveRow { l: 0, lower_bound: 0.5 },
                CurveRow { l: 1, lower_bound: 0.25 },
            ],
        );
        assert!(ok.is_ok());
        let bad = SeparationCurve::new(
            8,
            2,
            2,
            vec![
                CurveRow { l: 0, lower_bound: 0.25 },
                CurveRow { l: 1, lower_bound: 0.5 },
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn oracle_identity_case_hits_the_known_ratios() {
        // C = 0, V = 0, G = I: M = −I
        let t = 4;
        let m: Vec<Vec<f64>> = (0..t)
            .map(|i| (0..t).map(|j| if i == j { -1.0 } else { 0.0 }).collect())
            .collect();
        // Hall: every ‖p_t²/2‖² term contributes z = 2 over 4, total T/2,
        // matching ½‖M‖² exactly
        let hall = basis_pair_gram(OracleBasis::Hall { n: 8 }, t).unwrap();
        assert!(lemma_slack(&m, &hall, t).abs() < 1e-12);
        // star: diagonal pair norms are 8, so the left side is 2T = 4·RHS
        let star = basis_pair_gram(OracleBasis::Star { d: 2 }, t).unwrap();
        let slack = lemma_slack(&m, &star, t);
        assert!((slack - (2.0 * t as f64 - 0.5 * t as f64)).abs() < 1e-12);
    }

    #[test]
    fn oracle_representable_case_vanishes() {
        // L = T, V = G = I, C = I: M = 0, both sides 0
        let t = 3;
        let c: Vec<Vec<f64>> = (0..t)
            .map(|i| (0..t).map(|j| f64::from(i == j)).collect())
            .collect();
        let v = c.clone();
        let g = vec![1.0; t];
        let m = residual_matrix(&c, &v, &g, t, t);
        assert!(m.iter().flatten().all(|x| x.abs() < 1e-15));
        let gram = basis_pair_gram(OracleBasis::Star { d: 2 }, t).unwrap();
        assert_eq!(lemma_slack(&m, &gram, t), 0.0);
    }

    #[test]
    fn oracle_randomized_scans_stay_clean() {
        let mut rng = substream(29, "bounds-tests", "oracle", 0);
        let star = rank_lemma_oracle(OracleBasis::Star { d: 2 }, 6, 2, 100, &mut rng).unwrap();
        assert_eq!(star.violations, 0);
        assert!(star.min_slack >= -ORACLE_TOL, "{star:?}");

        // the eigenvalue norm realizes the lemma with equality
        let hall = rank_lemma_oracle(OracleBasis::Hall { n: 12 }, 5, 2, 50, &mut rng).unwrap();
        assert_eq!(hall.violations, 0);
        assert!(hall.min_slack.abs() < 1e-9, "{hall:?}");

        assert!(rank_lemma_oracle(OracleBasis::Star { d: 2 }, 13, 1, 1, &mut rng).is_err());
        assert!(rank_lemma_oracle(OracleBasis::Hall { n: 4 }, 5, 1, 1, &mut rng).is_err());
        assert!(rank_lemma_oracle(OracleBasis::Star { d: 2 }, 0, 1, 1, &mut rng).is_err());
    }
}
