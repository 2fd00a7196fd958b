//! Partitions, multi-indices, and the combinatorial constants that index
//! every polynomial and bound in the crate.
//!
//! A [`Partition`] is a non-increasing sequence of positive integers and
//! indexes products of scalar powersums. A [`MultiIndex`] is a weak
//! composition in `ℕ^D` and indexes multisymmetric powersums. The constants
//! computed here are `z_λ` (the product of multiplicity factorials), the
//! exact-weight count `C(w+D-1, w)`, and the effective dimension
//! `d̂ = min(D, ⌊√(N/2)⌋)`.
//!
//! Counts are carried in 128-bit integers and panic on overflow; at the
//! scales this crate certifies they stay tiny, but the API fails loudly
//! rather than wrapping.

use serde::{Deserialize, Serialize};

/// Non-increasing sequence of positive integers; the empty partition is
/// allowed and has weight 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order; they are sorted
    /// non-increasing. Panics if any part is zero.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        assert!(
            parts.iter().all(|&p| p > 0),
            "partition parts must be positive"
        );
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    /// The empty partition (weight 0, the index of the constant powersum 1).
    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// All partitions of weight at most `max_weight`, the empty partition
    /// included, ordered by weight and then lexicographically by parts.
    pub fn enumerate_up_to(max_weight: u32) -> Vec<Partition> {
        let mut out = vec![Partition::empty()];
        for w in 1..=max_weight {
            let mut acc = Vec::new();
            enumerate_weight_rec(w, w, &mut Vec::new(), &mut acc);
            acc.sort();
            out.extend(acc);
        }
        out
    }
}

fn enumerate_weight_rec(
    remaining: u32,
    max_part: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition {
            parts: prefix.clone(),
        });
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        prefix.push(part);
        enumerate_weight_rec(remaining - part, part, prefix, out);
        prefix.pop();
    }
}

/// `z_λ`, the product over distinct part values `t` of `n_t!` where `n_t`
/// is the multiplicity of `t` in `λ`. Always at least 1; `z_∅ = 1`.
pub fn z_constant(lambda: &Partition) -> u128 {
    let mut z: u128 = 1;
    let parts = lambda.parts();
    let mut i = 0;
    while i < parts.len() {
        let mut mult = 1u128;
        while i + 1 < parts.len() && parts[i + 1] == parts[i] {
            mult += 1;
            i += 1;
        }
        for k in 2..=mult {
            z = z.checked_mul(k).expect("z_constant overflows u128");
        }
        i += 1;
    }
    z
}

/// Weak composition in `ℕ^D`: a length-`D` vector of non-negative exponents.
///
/// Ordering and equality are componentwise; the derived `Ord` is the
/// lexicographic order used to canonicalize unordered pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    pub fn new(exps: impl Into<Vec<u32>>) -> Self {
        Self { exps: exps.into() }
    }

    /// The zero index of length `d` (every exponent 0).
    pub fn zero(d: usize) -> Self {
        Self { exps: vec![0; d] }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// `|α| = Σ_d α_d`.
    pub fn weight(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// `‖α‖_∞ = max_d α_d` (0 for the empty index).
    pub fn inf_norm(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Componentwise sum `α + β`. Panics on length mismatch.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "multi-index length mismatch");
        Self {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Unordered pair `{α, β}` of multi-indices, stored with the
/// lexicographically smaller member first so `{α,β}` and `{β,α}` compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexPair {
    lo: MultiIndex,
    hi: MultiIndex,
}

impl IndexPair {
    pub fn new(a: MultiIndex, b: MultiIndex) -> Self {
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> &MultiIndex {
        &self.lo
    }

    pub fn hi(&self) -> &MultiIndex {
        &self.hi
    }

    /// True when both members coincide (`α = β`).
    pub fn is_diagonal(&self) -> bool {
        self.lo == self.hi
    }
}

/// Exact enumeration of `{α ∈ ℕ^D : w_min ≤ |α| ≤ w_max, ‖α‖_∞ ≤ inf_max}`,
/// ordered by weight and then lexicographically by components.
pub fn enumerate_multi_indices(
    d: usize,
    w_min: u32,
    w_max: u32,
    inf_max: Option<u32>,
) -> Vec<MultiIndex> {
    assert!(d >= 1, "dimension must be at least 1");
    assert!(w_min <= w_max, "weight range is empty");
    let cap = inf_max.unwrap_or(u32::MAX);
    let mut out = Vec::new();
    for w in w_min..=w_max {
        enumerate_exact_weight(d, w, cap, &mut Vec::new(), &mut out);
    }
    out
}

fn enumerate_exact_weight(
    d: usize,
    w: u32,
    cap: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<MultiIndex>,
) {
    if d == 1 {
        if w <= cap {
            prefix.push(w);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
        }
        return;
    }
    for e in 0..=w.min(cap) {
        prefix.push(e);
        enumerate_exact_weight(d - 1, w - e, cap, prefix, out);
        prefix.pop();
    }
}

/// Binomial coefficient `C(n, k)` in 128-bit arithmetic; panics on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        result = result
            .checked_mul((n - k + i) as u128)
            .expect("binomial overflows u128");
        result /= i as u128;
    }
    result
}

/// `|{α ∈ ℕ^D : |α| = w}| = C(w + D - 1, w)`.
pub fn count_exact_weight(d: u32, w: u32) -> u128 {
    assert!(d >= 1, "dimension must be at least 1");
    binomial((w + d - 1) as u64, w as u64)
}

/// Effective dimension `d̂ = min(D, ⌊√(N/2)⌋)` for half set size `N` and
/// ambient dimension `D`.
pub fn d_hat(n: u32, d: u32) -> u32 {
    assert!(n >= 1 && d >= 1, "set size and dimension must be positive");
    d.min((n / 2).isqrt())
}
