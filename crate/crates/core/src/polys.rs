//! Evaluation of normalized powersums and their products on complex inputs.
//!
//! Scalar powersums are `p_k(x) = (1/√k) Σ_n x_n^k` with `p_0 = 1`;
//! partition products multiply them. The multisymmetric analogue on a
//! `D × M` input is `p_α(X) = (1/√|α|) Σ_n ∏_d x_{dn}^{α_d}`, indexed by a
//! weak composition `α`. A multi-index shorter than the input's coordinate
//! count acts on the leading rows, which is how truncation to an effective
//! dimension is expressed everywhere in the crate.
//!
//! Entry powers go through repeated squaring on the complex values rather
//! than angle arithmetic, so inputs with zero entries (the `r = 0`
//! distribution) evaluate on the same code path.

use crate::algebra::{IndexPair, MultiIndex, Partition};
use crate::sampling::SetInput;
use crate::{Error, Result};
use num_complex::Complex64;

/// `p_k(x) = (1/√k) Σ_n x_n^k`, with `p_0 = 1`.
pub fn powersum(k: u32, x: &[Complex64]) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let sum: Complex64 = x.iter().map(|z| z.powu(k)).sum();
    sum / (k as f64).sqrt()
}

/// `p_λ(x) = ∏_i p_{λ_i}(x)`; the empty partition gives 1.
pub fn powersum_partition(lambda: &Partition, x: &[Complex64]) -> Complex64 {
    lambda
        .parts()
        .iter()
        .map(|&k| powersum(k, x))
        .product()
}

/// `p_α(X) = (1/√|α|) Σ_n ∏_d x_{dn}^{α_d}`, with `p_0 = 1`.
///
/// `α` may be shorter than the coordinate count of `X`; it then reads the
/// leading `α.len()` rows. A longer `α` is a dimension mismatch.
pub fn multi_powersum(alpha: &MultiIndex, x: &SetInput) -> Result<Complex64> {
    if alpha.len() > x.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "index has {} coordinates but input has {} rows",
            alpha.len(),
            x.nrows()
        )));
    }
    let w = alpha.weight();
    if w == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for col in 0..x.ncols() {
        let mut term = Complex64::new(1.0, 0.0);
        for (row, &e) in alpha.exps().iter().enumerate() {
            if e > 0 {
                term *= x.entry(row, col).powu(e);
            }
        }
        sum += term;
    }
    Ok(sum / (w as f64).sqrt())
}

/// `q^α = ∏_d q_d^{α_d}`. Panics on length mismatch.
pub fn monomial(alpha: &MultiIndex, q: &[Complex64]) -> Complex64 {
    assert_eq!(alpha.len(), q.len(), "monomial length mismatch");
    alpha
        .exps()
        .iter()
        .zip(q)
        .map(|(&e, z)| if e == 0 { Complex64::new(1.0, 0.0) } else { z.powu(e) })
        .product()
}

/// `p_α(X) · p_β(X)`, the pairwise product term `p_{{α,β}}` evaluated at `X`.
pub fn pair_product(alpha: &MultiIndex, beta: &MultiIndex, x: &SetInput) -> Result<Complex64> {
    Ok(multi_powersum(alpha, x)? * multi_powersum(beta, x)?)
}

/// One term of a powersum-product expansion: a coefficient attached either
/// to a partition product `p_λ` or to an unordered pairwise product
/// `p_{{α,β}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowersumProductTerm {
    pub indices: ProductIndices,
    pub coeff: Complex64,
}

/// Index set of a product term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProductIndices {
    Partition(Partition),
    Pair(IndexPair),
}

impl PowersumProductTerm {
    pub fn from_partition(lambda: Partition, coeff: Complex64) -> Self {
        Self {
            indices: ProductIndices::Partition(lambda),
            coeff,
        }
    }

    /// Stores `{α, β}` canonically, so terms built from `(α,β)` and `(β,α)`
    /// compare equal.
    pub fn from_pair(alpha: MultiIndex, beta: MultiIndex, coeff: Complex64) -> Self {
        Self {
            indices: ProductIndices::Pair(IndexPair::new(alpha, beta)),
            coeff,
        }
    }

    /// Evaluates the term on a scalar input (partition case) or set input
    /// (pair case).
    pub fn eval_scalar(&self, x: &[Complex64]) -> Option<Complex64> {
        match &self.indices {
            ProductIndices::Partition(l) => Some(self.coeff * powersum_partition(l, x)),
            ProductIndices::Pair(_) => None,
        }
    }

    pub fn eval_set(&self, x: &SetInput) -> Option<Complex64> {
        match &self.indices {
            ProductIndices::Pair(p) => pair_product(p.lo(), p.hi(), x)
                .ok()
                .map(|v| self.coeff * v),
            ProductIndices::Partition(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{assemble_input, sample_uniform_circle, substream};
    use proptest::prelude::*;

    fn ones(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n]
    }

    #[test]
    fn powersum_frozen_values() {
        assert!((powersum(4, &ones(3)) - Complex64::new(1.5, 0.0)).norm() < 1e-15);
        let x = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
        assert!(powersum(2, &x).norm() < 1e-15);
        assert_eq!(powersum(0, &x), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn powersum_matches_direct_sum() {
        let mut rng = substream(11, "polys-tests", "direct", 0);
        let x = sample_uniform_circle(&mut rng, 17);
        for k in 1..=9u32 {
            let direct: Complex64 = x
                .iter()
                .map(|z| {
                    let mut acc = Complex64::new(1.0, 0.0);
                    for _ in 0..k {
                        acc *= z;
                    }
                    acc
                })
                .sum::<Complex64>()
                / (k as f64).sqrt();
            assert!((powersum(k, &x) - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn partition_product_frozen_value() {
        // p_{2,1} on (1,1): (2/sqrt 2) * 2 = 2 sqrt 2
        let v = powersum_partition(&Partition::new([2, 1]), &ones(2));
        assert!((v - Complex64::new(2.0 * 2f64.sqrt(), 0.0)).norm() < 1e-14);
        assert_eq!(
            powersum_partition(&Partition::empty(), &ones(5)),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn multi_powersum_two_rows() {
        // p_(2,3) on rows y, z is (1/sqrt 5) Σ y_n² z_n³
        let mut rng = substream(11, "polys-tests", "rows", 0);
        let y = sample_uniform_circle(&mut rng, 6);
        let z = sample_uniform_circle(&mut rng, 6);
        let x = SetInput::from_rows(vec![y.clone(), z.clone()]).unwrap();
        let direct: Complex64 = y
            .iter()
            .zip(&z)
            .map(|(a, b)| a.powu(2) * b.powu(3))
            .sum::<Complex64>()
            / 5f64.sqrt();
        let v = multi_powersum(&MultiIndex::new([2, 3]), &x).unwrap();
        assert!((v - direct).norm() < 1e-13);
    }

    #[test]
    fn multi_powersum_unit_index_counts_columns() {
        let x = SetInput::from_fn(3, 7, |_, _| Complex64::new(1.0, 0.0));
        let e1 = MultiIndex::new([0, 1, 0]);
        assert!((multi_powersum(&e1, &x).unwrap() - Complex64::new(7.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn multi_powersum_rejects_long_index() {
        let x = SetInput::from_fn(2, 3, |_, _| Complex64::new(1.0, 0.0));
        assert!(multi_powersum(&MultiIndex::new([1, 0, 2]), &x).is_err());
    }

    #[test]
    fn structured_input_factorizes() {
        // p_α(X(y,q,r)) = p_|α|(e^{iy}) (q^α + r^α)
        let mut rng = substream(11, "polys-tests", "factor", 0);
        for _ in 0..20 {
            let y: Vec<f64> = (0..5)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            let q = sample_uniform_circle(&mut rng, 3);
            let r = sample_uniform_circle(&mut rng, 3);
            let x = assemble_input(&y, &q, &r).unwrap();
            let phases: Vec<Complex64> = y.iter().map(|&t| Complex64::cis(t)).collect();
            for alpha in [
                MultiIndex::new([1, 0, 0]),
                MultiIndex::new([2, 1, 0]),
                MultiIndex::new([1, 1, 3]),
            ] {
                let lhs = multi_powersum(&alpha, &x).unwrap();
                let rhs = powersum(alpha.weight(), &phases)
                    * (monomial(&alpha, &q) + monomial(&alpha, &r));
                assert!((lhs - rhs).norm() < 1e-12, "alpha {alpha:?}");
            }
        }
    }

    #[test]
    fn monomial_frozen_values() {
        let q = [Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)];
        let v = monomial(&MultiIndex::new([1, 2]), &q);
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(
            monomial(&MultiIndex::zero(2), &q),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn pair_product_matches_double_loop() {
        let mut rng = substream(11, "polys-tests", "pairs", 0);
        let x = SetInput::from_rows(vec![
            sample_uniform_circle(&mut rng, 8),
            sample_uniform_circle(&mut rng, 8),
        ])
        .unwrap();
        let alpha = MultiIndex::new([2, 0]);
        let beta = MultiIndex::new([1, 1]);
        let mut direct = Complex64::new(0.0, 0.0);
        for n in 0..8 {
            for np in 0..8 {
                let mut t = Complex64::new(1.0, 0.0);
                for (d, (&ea, &eb)) in alpha.exps().iter().zip(beta.exps()).enumerate() {
                    t *= x.entry(d, n).powu(ea) * x.entry(d, np).powu(eb);
                }
                direct += t;
            }
        }
        direct /= ((alpha.weight() * beta.weight()) as f64).sqrt();
        let v = pair_product(&alpha, &beta, &x).unwrap();
        assert!((v - direct).norm() < 1e-12);
        let sym = pair_product(&beta, &alpha, &x).unwrap();
        assert!((v - sym).norm() < 1e-14);
    }

    #[test]
    fn pair_product_all_ones() {
        let x = SetInput::from_fn(2, 6, |_, _| Complex64::new(1.0, 0.0));
        let alpha = MultiIndex::new([1, 1]);
        let v = pair_product(&alpha, &alpha, &x).unwrap();
        // M² / |α| with M = 6, |α| = 2
        assert!((v - Complex64::new(18.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn product_term_canonicalizes_pairs() {
        let a = MultiIndex::new([2, 0]);
        let b = MultiIndex::new([0, 2]);
        let c = Complex64::new(1.5, -0.5);
        assert_eq!(
            PowersumProductTerm::from_pair(a.clone(), b.clone(), c),
            PowersumProductTerm::from_pair(b, a, c)
        );
    }

    proptest! {
        #[test]
        fn column_permutation_invariance(seed in 0u64..1000) {
            let mut rng = substream(seed, "polys-tests", "perm", 0);
            let x = SetInput::from_rows(vec![
                sample_uniform_circle(&mut rng, 6),
                sample_uniform_circle(&mut rng, 6),
            ]).unwrap();
            let mut perm: Vec<usize> = (0..6).collect();
            // Fisher-Yates with the same stream
            for i in (1..6usize).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let shuffled = x.permute_columns(&perm);
            let alpha = MultiIndex::new([1, 2]);
            let a = multi_powersum(&alpha, &x).unwrap();
            let b = multi_powersum(&alpha, &shuffled).unwrap();
            prop_assert!((a - b).norm() < 1e-12);
        }

        #[test]
        fn normalization_against_raw_sum(k in 1u32..8, seed in 0u64..500) {
            let mut rng = substream(seed, "polys-tests", "norm", 1);
            let x = sample_uniform_circle(&mut rng, 9);
            let raw: Complex64 = x.iter().map(|z| z.powu(k)).sum();
            let normalized = powersum(k, &x);
            prop_assert!((normalized * (k as f64).sqrt() - raw).norm() <= 1e-13 * (1.0 + raw.norm()));
        }
    }
}
