//! Pairwise-symmetric networks that realize the hard function, with exact
//! or exponential-sum activations.
//!
//! The network evaluates `g′(X) = g(X)/‖g‖_A` through a fixed pipeline.
//! For one column pair `(x, x′)` it forms the elementwise products
//! `z_i = x_i·x_i′` over the first `d̂` coordinates, applies the truncated
//! Blaschke factor to each, and multiplies the results up a binary tree of
//! depth `⌈log₂ d̂⌉` (padded to a power of two with constant-1 leaves):
//!
//! ```text
//! ψ(x, x′) = μ̂_{d̂}(z_1) ⋯ μ̂_{d̂}(z_{d̂})        (= h(x ∘ x′))
//! net(X)   = ρ(Σ_{n,n'} ψ(x_n, x_{n'}))
//! ```
//!
//! The approximate variant replaces every multiplication with the
//! combination `ξ⋆ω = ½(f₁(ξ+ω) − f₁(ξ) − f₁(ω))` and every `μ̂_{d̂}` with
//! `f₂`, where `(f₁, f₂)` is an [`ActivationPair`] carrying a certified
//! uniform error `ε` on `|ξ| ≤ 3`. The readout becomes
//! `ρ(ξ) = (4N²/‖g‖_A)·((ξ/4N²) ⋆ 1 − r^{d̂})`, and the whole network
//! stays within `18N²d̂²·ε` of `g′` when `ε ≤ min(1/100, 1/(12d̂²))`.
//!
//! The exponential activations come from discrete Fourier extraction over
//! a root of unity `γ = e^{2πi/J}`:
//!
//! ```text
//! f^{(k)}(ξ) = Σ_{j<J} (γ^{−kj}/J)·exp(γ^j rξ)  ≈ (rξ)^k/k!
//! f₁ = (2/r²)·f^{(2)}                            ≈ ξ²
//! f₂ = r·Σ_{k<D} k!·f^{(k)} − (1/r)·Σ_{k=1}^{D} k!·f^{(k)} ≈ μ̂_D
//! ```
//!
//! using `μ̂_D(ξ) = r·Σ_{k<D}(rξ)^k − (1/r)·Σ_{k=1}^{D}(rξ)^k`. Factorial
//! weights are realized in the exponent, `exp(ln k! + γ^j rξ)`, so nothing
//! overflows and the largest weight magnitude stays near `ln(D!)`. Sup
//! errors on `|ξ| ≤ 3` are `(2/r²)·(4/J!)(3/4)^J` for `f₁` and
//! `17D(3/4)^J` for `f₂`; [`choose_j`] inverts these for a target budget
//! and [`sup_error_probe`] certifies the claims on a disk grid.

use crate::hardfn::{mobius_trunc, HardFnSpec, BLASCHKE_R};
use crate::sampling::SetInput;
use crate::{Error, Result};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

type ScalarMap = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

// ─── Activations ───────────────────────────────────────────────────────

/// A surrogate pair `(f₁, f₂)` for squaring and for the truncated Blaschke
/// factor, with a certified uniform error on the disk `|ξ| ≤ 3`.
#[derive(Clone)]
pub struct ActivationPair {
    f1: ScalarMap,
    f2: ScalarMap,
    epsilon: f64,
}

impl fmt::Debug for ActivationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ActivationPair")
            .field("epsilon", &self.epsilon)
            .finish_non_exhaustive()
    }
}

impl ActivationPair {
    /// The exact surrogates `f₁(ξ) = ξ²` and `f₂ = μ̂_{d̂}`, error 0.
    pub fn exact_surrogates(d_hat: u32) -> Self {
        assert!(d_hat >= 1);
        Self {
            f1: Arc::new(|xi| xi * xi),
            f2: Arc::new(move |xi| mobius_trunc(d_hat, xi)),
            epsilon: 0.0,
        }
    }

    /// Exponential-sum surrogates at the given parameters. The claimed
    /// error is the analytic bound; construction fails if a disk probe
    /// ever exceeds it.
    pub fn from_exp(params: ExpNetParams) -> Result<Self> {
        let epsilon = params.error_bound();
        let d_eff = params.d_eff();
        let kernel = Arc::new(ExpKernel::new(params));
        let mut rng = crate::sampling::substream(0x5ca1e, "nets", "activation-certify", 0);
        let probe_f1 = sup_error_probe(|xi| kernel.f1(xi), |xi| xi * xi, 3.0, 800, &mut rng);
        let probe_f2 = sup_error_probe(
            |xi| kernel.f2(xi),
            |xi| mobius_trunc(d_eff, xi),
            3.0,
            800,
            &mut rng,
        );
        if probe_f1 > epsilon || probe_f2 > epsilon {
            return Err(Error::InvalidArgument(format!(
                "claimed activation error {epsilon:.3e} violated by probe \
                 (f1: {probe_f1:.3e}, f2: {probe_f2:.3e})"
            )));
        }
        let k1 = Arc::clone(&kernel);
        Ok(Self {
            f1: Arc::new(move |xi| k1.f1(xi)),
            f2: Arc::new(move |xi| kernel.f2(xi)),
            epsilon,
        })
    }

    pub fn f1(&self, xi: Complex64) -> Complex64 {
        (self.f1)(xi)
    }

    pub fn f2(&self, xi: Complex64) -> Complex64 {
        (self.f2)(xi)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// `ξ⋆ω = ½(f₁(ξ+ω) − f₁(ξ) − f₁(ω))`. With `f₁` exact this is `ξω`;
/// with uniform error `ε` it stays within `(3/2)ε` of the product on
/// `|ξ|,|ω| ≤ 3/2`.
pub fn star(act: &ActivationPair, xi: Complex64, omega: Complex64) -> Complex64 {
    0.5 * (act.f1(xi + omega) - act.f1(xi) - act.f1(omega))
}

// ─── The pairwise network ──────────────────────────────────────────────

/// Whether the network multiplies exactly or through an activation pair.
#[derive(Clone, Debug)]
pub enum Activations {
    Exact,
    Approx(ActivationPair),
}

/// An immutable network computing `g′` (exactly or approximately) over
/// `D × 2N` torus inputs.
#[derive(Clone, Debug)]
pub struct PairwiseNet {
    spec: HardFnSpec,
    activations: Activations,
    tree_depth: u32,
    padded_width: u32,
}

impl PairwiseNet {
    pub fn exact(spec: HardFnSpec) -> Self {
        let padded_width = spec.d_hat().next_power_of_two();
        Self {
            spec,
            activations: Activations::Exact,
            tree_depth: padded_width.trailing_zeros(),
            padded_width,
        }
    }

    /// Approximate network; the activation error must satisfy
    /// `ε ≤ min(1/100, 1/(12·d̂²))`.
    pub fn with_activations(spec: HardFnSpec, act: ActivationPair) -> Result<Self> {
        let cap = epsilon_cap(spec.d_hat());
        if act.epsilon() > cap {
            return Err(Error::OutOfRegime(format!(
                "activation error {:.3e} exceeds the certified cap {cap:.3e} at d̂ = {}",
                act.epsilon(),
                spec.d_hat()
            )));
        }
        let padded_width = spec.d_hat().next_power_of_two();
        Ok(Self {
            spec,
            activations: Activations::Approx(act),
            tree_depth: padded_width.trailing_zeros(),
            padded_width,
        })
    }

    pub fn spec(&self) -> &HardFnSpec {
        &self.spec
    }

    pub fn activations(&self) -> &Activations {
        &self.activations
    }

    pub fn tree_depth(&self) -> u32 {
        self.tree_depth
    }

    pub fn padded_width(&self) -> u32 {
        self.padded_width
    }

    pub fn eval(&self, x: &SetInput) -> Result<Complex64> {
        net_eval(self, x)
    }

    /// Serializable description of the architecture.
    pub fn describe(&self) -> NetDescription {
        let d_hat = self.spec.d_hat();
        let mut layers = vec![
            LayerDesc {
                role: "pairwise coordinate products".into(),
                width: d_hat,
            },
            LayerDesc {
                role: "blaschke leaves (padded)".into(),
                width: self.padded_width,
            },
        ];
        let mut w = self.padded_width;
        for level in 1..=self.tree_depth {
            w /= 2;
            layers.push(LayerDesc {
                role: format!("product tree level {level}"),
                width: w,
            });
        }
        layers.push(LayerDesc {
            role: "readout".into(),
            width: 1,
        });
        NetDescription {
            schema_version: 1,
            n: self.spec.n(),
            d: self.spec.d(),
            d_hat,
            a_norm: self.spec.a_norm(),
            tree_depth: self.tree_depth,
            layers,
            activation: match &self.activations {
                Activations::Exact => ActivationDesc::Exact,
                Activations::Approx(a) => ActivationDesc::Certified {
                    epsilon: a.epsilon(),
                },
            },
        }
    }
}

/// The admissible activation error at effective dimension `d̂`:
/// `min(1/100, 1/(12·d̂²))`.
pub fn epsilon_cap(d_hat: u32) -> f64 {
    (0.01f64).min(1.0 / (12.0 * f64::from(d_hat * d_hat)))
}

/// `ψ(x, x′) = ∏_i μ̂_{d̂}(x_i x_i′)` through the exact product tree.
/// Slices must have exactly `d_hat` entries.
pub fn psi_exact(x: &[Complex64], xp: &[Complex64], d_hat: u32) -> Complex64 {
    psi_exact_trace(x, xp, d_hat).0
}

fn psi_exact_trace(x: &[Complex64], xp: &[Complex64], d_hat: u32) -> (Complex64, f64) {
    assert_eq!(x.len(), d_hat as usize);
    assert_eq!(xp.len(), d_hat as usize);
    let padded = d_hat.next_power_of_two() as usize;
    let one = Complex64::new(1.0, 0.0);
    let mut nodes: Vec<Complex64> = (0..padded)
        .map(|i| {
            if i < d_hat as usize {
                mobius_trunc(d_hat, x[i] * xp[i])
            } else {
                one
            }
        })
        .collect();
    let mut peak = nodes.iter().map(|v| v.norm()).fold(0.0, f64::max);
    while nodes.len() > 1 {
        nodes = nodes.chunks(2).map(|pair| pair[0] * pair[1]).collect();
        peak = nodes.iter().map(|v| v.norm()).fold(peak, f64::max);
    }
    (nodes[0], peak)
}

/// The activation-approximated `ψ`: products become `⋆`, leaves become
/// `f₂`. Requires the activation error to satisfy [`epsilon_cap`]; the
/// result stays within `3·d̂²·ε` of [`psi_exact`] on torus inputs.
pub fn psi_approx(
    act: &ActivationPair,
    x: &[Complex64],
    xp: &[Complex64],
    d_hat: u32,
) -> Result<Complex64> {
    if act.epsilon() > epsilon_cap(d_hat) {
        return Err(Error::OutOfRegime(format!(
            "activation error {:.3e} exceeds the certified cap at d̂ = {d_hat}",
            act.epsilon()
        )));
    }
    Ok(psi_approx_trace(act, x, xp, d_hat).0)
}

fn psi_approx_trace(
    act: &ActivationPair,
    x: &[Complex64],
    xp: &[Complex64],
    d_hat: u32,
) -> (Complex64, f64) {
    assert_eq!(x.len(), d_hat as usize);
    assert_eq!(xp.len(), d_hat as usize);
    let padded = d_hat.next_power_of_two() as usize;
    let one = Complex64::new(1.0, 0.0);
    let mut nodes: Vec<Complex64> = (0..padded)
        .map(|i| {
            if i < d_hat as usize {
                act.f2(star(act, x[i], xp[i]))
            } else {
                one
            }
        })
        .collect();
    let mut peak = nodes.iter().map(|v| v.norm()).fold(0.0, f64::max);
    while nodes.len() > 1 {
        nodes = nodes
            .chunks(2)
            .map(|pair| star(act, pair[0], pair[1]))
            .collect();
        peak = nodes.iter().map(|v| v.norm()).fold(peak, f64::max);
    }
    (nodes[0], peak)
}

/// Evaluates the network on a `D × 2N` input. The exact variant returns
/// `g′(X)` identically; the approximate variant stays within
/// `18N²d̂²·ε`.
pub fn net_eval(net: &PairwiseNet, x: &SetInput) -> Result<Complex64> {
    let spec = &net.spec;
    let cols = 2 * spec.n();
    if x.nrows() != spec.d() || x.ncols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "network expects a {} × {} input, got {} × {}",
            spec.d(),
            cols,
            x.nrows(),
            x.ncols()
        )));
    }
    let d_hat = spec.d_hat();
    let dh = d_hat as usize;
    let mut col = vec![Complex64::new(0.0, 0.0); dh];
    let mut colp = vec![Complex64::new(0.0, 0.0); dh];
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..cols {
        for i in 0..dh {
            col[i] = x.entry(i, n);
        }
        for np in 0..cols {
            for i in 0..dh {
                colp[i] = x.entry(i, np);
            }
            total += match &net.activations {
                Activations::Exact => psi_exact(&col, &colp, d_hat),
                Activations::Approx(act) => psi_approx_trace(act, &col, &colp, d_hat).0,
            };
        }
    }
    let scale = 4.0 * (spec.n() as f64).powi(2);
    let shift = BLASCHKE_R.powi(d_hat as i32);
    Ok(match &net.activations {
        Activations::Exact => (total - scale * shift) / spec.a_norm(),
        Activations::Approx(act) => {
            let one = Complex64::new(1.0, 0.0);
            scale / spec.a_norm() * (star(act, total / scale, one) - shift)
        }
    })
}

// ─── Exponential activations ───────────────────────────────────────────

/// Root-of-unity order `J`, contraction `r = 1/4`, and polynomial degree
/// `D_eff` for the exponential surrogates. Valid only with `J > D_eff`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpNetParams {
    j: u32,
    r: f64,
    d_eff: u32,
}

impl ExpNetParams {
    pub fn new(j: u32, d_eff: u32) -> Result<Self> {
        if d_eff == 0 {
            return Err(Error::InvalidArgument(
                "polynomial degree must be at least 1".into(),
            ));
        }
        if j <= d_eff {
            return Err(Error::InvalidArgument(format!(
                "root-of-unity order must exceed the degree, got J = {j}, D = {d_eff}"
            )));
        }
        Ok(Self {
            j,
            r: BLASCHKE_R,
            d_eff,
        })
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn d_eff(&self) -> u32 {
        self.d_eff
    }

    /// The analytic sup-error bound on `|ξ| ≤ 3`:
    /// `max(17·D·(3/4)^J, (2/r²)·(4/J!)·(3/4)^J)`.
    pub fn error_bound(&self) -> f64 {
        f2_error_bound(self.d_eff, self.j).max(f1_error_bound(self.j))
    }

    /// Neurons in the `f₁`/`f₂` blocks: `2·D_eff·J + J`.
    pub fn neuron_count(&self) -> u32 {
        2 * self.d_eff * self.j + self.j
    }

    /// Largest weight magnitude in the log-domain realization: the
    /// factorial bias `ln k!`, the input weight `|γ^j r| = r`, or the
    /// output weight `1/(rJ)`.
    pub fn max_weight(&self) -> f64 {
        ln_factorial(self.d_eff)
            .max(self.r)
            .max(1.0 / (self.r * f64::from(self.j)))
    }

    /// The ledger budget `ln(D_eff!) + r` the weights are checked against.
    pub fn weight_budget(&self) -> f64 {
        ln_factorial(self.d_eff) + self.r
    }
}

fn f1_error_bound(j: u32) -> f64 {
    // (2/r²)·(4/J!)·(3/4)^J, in the log domain so large J cannot overflow
    (128f64.ln() - ln_factorial(j) + f64::from(j) * 0.75f64.ln()).exp()
}

fn f2_error_bound(d_eff: u32, j: u32) -> f64 {
    17.0 * f64::from(d_eff) * 0.75f64.powi(j as i32)
}

/// `ln k!` by direct log summation.
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| f64::from(i).ln()).sum()
}

fn unit_root(j: u32, power: i64) -> Complex64 {
    let reduced = power.rem_euclid(i64::from(j)) as f64;
    Complex64::cis(TAU * reduced / f64::from(j))
}

fn unit_root_table(j: u32) -> Vec<Complex64> {
    (0..i64::from(j)).map(|p| unit_root(j, p)).collect()
}

fn table_root(roots: &[Complex64], power: i64) -> Complex64 {
    roots[power.rem_euclid(roots.len() as i64) as usize]
}

/// Indicator `i ≡ 0 (mod J)` computed through the root-of-unity sum
/// `(1/J)·Σ_j γ^{ij}`; panics if the numeric sum is not clearly 0 or 1.
pub fn unity_filter(j: u32, i: i64) -> u32 {
    assert!(j >= 1);
    let mut sum = Complex64::new(0.0, 0.0);
    for jj in 0..j {
        sum += unit_root(j, i * i64::from(jj));
    }
    sum /= f64::from(j);
    if (sum - Complex64::new(1.0, 0.0)).norm() < 1e-9 {
        1
    } else if sum.norm() < 1e-9 {
        0
    } else {
        panic!("root-of-unity sum {sum} is neither 0 nor 1");
    }
}

/// Shared evaluation kernel: the unit-root table is built once and the
/// `exp(γ^j rξ)` factors are reused across extraction orders.
struct ExpKernel {
    params: ExpNetParams,
    roots: Vec<Complex64>,
}

impl ExpKernel {
    fn new(params: ExpNetParams) -> Self {
        Self {
            params,
            roots: unit_root_table(params.j),
        }
    }

    fn shared(&self, xi: Complex64) -> Vec<Complex64> {
        self.roots
            .iter()
            .map(|g| (g * (self.params.r * xi)).exp())
            .collect()
    }

    fn extract(&self, k: u32, shared: &[Complex64]) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (jj, e) in shared.iter().enumerate() {
            sum += table_root(&self.roots, -i64::from(k) * jj as i64) * e;
        }
        sum / f64::from(self.params.j)
    }

    fn f1(&self, xi: Complex64) -> Complex64 {
        assert!(self.params.j > 2, "squaring surrogate needs J > 2");
        (2.0 / (self.params.r * self.params.r)) * self.extract(2, &self.shared(xi))
    }

    fn f2(&self, xi: Complex64) -> Complex64 {
        let d = self.params.d_eff;
        let shared = self.shared(xi);
        let mut out = Complex64::new(0.0, 0.0);
        for k in 0..=d {
            let mut weight = 0.0;
            if k < d {
                weight += self.params.r;
            }
            if k >= 1 {
                weight -= 1.0 / self.params.r;
            }
            if weight == 0.0 {
                continue;
            }
            out += weight * ln_factorial(k).exp() * self.extract(k, &shared);
        }
        out
    }
}

/// `f^{(k)}(ξ) = Σ_{j<J} (γ^{−kj}/J)·exp(γ^j rξ) ≈ (rξ)^k/k!` for
/// `0 ≤ k ≤ J−1`.
pub fn exp_fk(params: &ExpNetParams, k: u32, xi: Complex64) -> Complex64 {
    assert!(k < params.j, "extraction order must satisfy k ≤ J−1");
    let kernel = ExpKernel::new(*params);
    let shared = kernel.shared(xi);
    kernel.extract(k, &shared)
}

/// `f₁(ξ) = (2/r²)·f^{(2)}(ξ) ≈ ξ²`. Needs `J > 2`.
pub fn exp_f1(params: &ExpNetParams, xi: Complex64) -> Complex64 {
    ExpKernel::new(*params).f1(xi)
}

/// `f₂(ξ) = r·Σ_{k<D} k!f^{(k)}(ξ) − (1/r)·Σ_{k=1}^{D} k!f^{(k)}(ξ)
/// ≈ μ̂_D(ξ)`. The network realizes the factorial weights as the bias
/// `ln k!` in the exponent, `exp(ln k! + γ^j rξ)`; evaluation shares each
/// `exp(γ^j rξ)` factor across the extraction orders.
pub fn exp_f2(params: &ExpNetParams, xi: Complex64) -> Complex64 {
    ExpKernel::new(*params).f2(xi)
}

/// Smallest `J > D_eff` whose analytic error bound is at most `eps`.
pub fn choose_j(d_eff: u32, eps: f64) -> u32 {
    assert!(eps > 0.0, "error budget must be positive");
    assert!(d_eff >= 1);
    let mut j = (d_eff + 1).max(3);
    loop {
        if f2_error_bound(d_eff, j) <= eps && f1_error_bound(j) <= eps {
            return j;
        }
        j += 1;
    }
}

/// Largest deviation `|f − target|` over a deterministic grid in the disk
/// `|ξ| ≤ radius` (boundary ring, interior rings at `radius·k/4`, the
/// center) plus random fill up to `grid_points` samples. A lower bound on
/// the true sup.
pub fn sup_error_probe(
    f: impl Fn(Complex64) -> Complex64,
    target: impl Fn(Complex64) -> Complex64,
    radius: f64,
    grid_points: usize,
    rng: &mut impl Rng,
) -> f64 {
    assert!(radius > 0.0);
    let mut worst = 0.0f64;
    let mut check = |xi: Complex64| {
        let dev = (f(xi) - target(xi)).norm();
        if dev > worst {
            worst = dev;
        }
    };
    check(Complex64::new(0.0, 0.0));
    let boundary = grid_points / 2;
    for k in 0..boundary {
        check(radius * Complex64::cis(TAU * k as f64 / boundary as f64));
    }
    let ring = grid_points / 8;
    for level in 1..=3 {
        let rho = radius * level as f64 / 4.0;
        for k in 0..ring {
            check(rho * Complex64::cis(TAU * k as f64 / ring.max(1) as f64));
        }
    }
    let used = 1 + boundary + 3 * ring;
    for _ in used..grid_points {
        let rho = radius * rng.random_range(0.0f64..1.0).sqrt();
        let theta = rng.random_range(0.0..TAU);
        check(rho * Complex64::cis(theta));
    }
    worst
}

// ─── Description document ──────────────────────────────────────────────

/// One layer row of a [`NetDescription`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerDesc {
    pub role: String,
    pub width: u32,
}

/// Activation summary inside a [`NetDescription`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActivationDesc {
    Exact,
    Certified { epsilon: f64 },
}

/// Versioned, serializable description of a constructed network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetDescription {
    pub schema_version: u32,
    pub n: usize,
    pub d: usize,
    pub d_hat: u32,
    pub a_norm: f64,
    pub tree_depth: u32,
    pub layers: Vec<LayerDesc>,
    pub activation: ActivationDesc,
}
