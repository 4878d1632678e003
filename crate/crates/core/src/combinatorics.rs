//! Exact evaluation of the reciprocal sums that drive the volume bounds.
//!
//! Both sums are coefficients of truncated products of geometric series:
//!
//! * `sum_skn(n, k)` is `[x^n] prod_{j=1..k} (1 - x/j)^{-(n+1)}`, the sum of
//!   `1/(u_1...u_n)` over non-decreasing selections (with repetition) from the
//!   alphabet where each of `1..k` appears with `n+1` indexed copies;
//! * `sum_nondecreasing(n, k)` is `[x^n] prod_{j=1..k} (1 - x/j)^{-1}`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Rational;
use crate::error::{Result, invalid};

/// Truncated product `prod (1 - x/j)^{-mult_j}` with exact coefficients.
///
/// Coefficients are kept over a common denominator: the degree-`d`
/// coefficient is `scaled[d] / L^d` where `L` is the lcm of all pushed `j`.
/// Updates then only need integer multiply-adds, which keeps long sweeps over
/// `k` (thousands of factors) cheap.
#[derive(Clone, Debug)]
pub struct ReciprocalProduct {
    lcm: BigInt,
    scaled: Vec<BigInt>,
}

impl ReciprocalProduct {
    pub fn new(degree: usize) -> Self {
        let mut scaled = vec![BigInt::zero(); degree + 1];
        scaled[0] = BigInt::one();
        Self { lcm: BigInt::one(), scaled }
    }

    pub fn degree(&self) -> usize {
        self.scaled.len() - 1
    }

    /// Multiplies in `(1 - x/j)^{-multiplicity}`.
    pub fn push(&mut self, j: u64, multiplicity: u32) {
        assert!(j >= 1, "factor index must be positive");
        let j = BigInt::from(j);
        let new_lcm = self.lcm.lcm(&j);
        let growth = &new_lcm / &self.lcm;
        if !growth.is_one() {
            let mut p = growth.clone();
            for c in self.scaled.iter_mut().skip(1) {
                *c *= &p;
                p *= &growth;
            }
        }
        self.lcm = new_lcm;
        let step = &self.lcm / &j;
        for _ in 0..multiplicity {
            for d in 1..self.scaled.len() {
                let carry = &self.scaled[d - 1] * &step;
                self.scaled[d] += carry;
            }
        }
    }

    pub fn coeff(&self, d: usize) -> Rational {
        let den = num_traits::pow(self.lcm.clone(), d);
        Rational::new(self.scaled[d].clone(), den)
    }

    /// Binary64 approximation of the degree-`d` coefficient, without forming `L^d`.
    pub fn coeff_f64(&self, d: usize) -> f64 {
        let (ms, es) = mantissa_exp(&self.scaled[d]);
        let (ml, el) = mantissa_exp(&self.lcm);
        ms / ml.powi(d as i32) * 2f64.powi((es - d as i64 * el) as i32)
    }
}

/// `x = m * 2^e` with `m` in `[1, 2)`; `x` must be positive.
fn mantissa_exp(x: &BigInt) -> (f64, i64) {
    use num_traits::ToPrimitive;
    let bits = x.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (x >> shift as usize).to_f64().expect("fits after shift");
    let m = top / 2f64.powi((bits - 1 - shift) as i32);
    (m, bits - 1)
}

/// Truncated product for `j = 1..=k`, each with the same multiplicity.
pub fn reciprocal_product(degree: usize, k: u64, multiplicity: u32) -> ReciprocalProduct {
    let mut p = ReciprocalProduct::new(degree);
    for j in 1..=k {
        p.push(j, multiplicity);
    }
    p
}

/// Parameters `(n, k)` of the two reciprocal sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SknSumSpec {
    pub n: usize,
    pub k: u64,
}

impl SknSumSpec {
    pub fn new(n: usize, k: u64) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(invalid("n and k must be at least 1"));
        }
        Ok(Self { n, k })
    }

    pub fn skn(&self) -> Rational {
        sum_skn(self.n, self.k)
    }

    pub fn nondecreasing(&self) -> Rational {
        sum_nondecreasing(self.n, self.k)
    }
}

/// Sum of `1/(u_1 ... u_n)` over non-decreasing `u` drawn from `S_{k,n}`.
pub fn sum_skn(n: usize, k: u64) -> Rational {
    reciprocal_product(n, k, n as u32 + 1).coeff(n)
}

/// Sum of `1/(i_1 ... i_n)` over `1 <= i_1 <= ... <= i_n <= k`.
pub fn sum_nondecreasing(n: usize, k: u64) -> Rational {
    reciprocal_product(n, k, 1).coeff(n)
}

/// Exact harmonic number `H_k`.
pub fn harmonic(k: u64) -> Result<Rational> {
    if k == 0 {
        return Err(invalid("harmonic number needs k >= 1"));
    }
    Ok(reciprocal_product(1, k, 1).coeff(1))
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// `H_k` in binary64 with compensated summation.
pub fn harmonic_f64(k: u64) -> f64 {
    let mut s = CompensatedSum::default();
    for j in 1..=k {
        s.add(1.0 / j as f64);
    }
    s.value()
}

/// All `(l_1, ..., l_k)` with `l_i >= 0` and `l_1 + 2 l_2 + ... + k l_k = m`.
///
/// Tuples come out in descending lexicographic order of `(l_k, ..., l_1)`.
pub fn weighted_partitions(k: usize, m: u64) -> WeightedPartitions {
    assert!(k >= 1, "k must be at least 1");
    let mut parts = vec![0; k];
    fill_greedy(&mut parts, k - 1, m);
    WeightedPartitions { parts, done: false }
}

#[derive(Clone, Debug)]
pub struct WeightedPartitions {
    parts: Vec<u64>,
    done: bool,
}

/// Fills `parts[0..=top]` greedily (largest part first) with weight `rem`.
fn fill_greedy(parts: &mut [u64], top: usize, mut rem: u64) {
    for idx in (1..=top).rev() {
        let w = idx as u64 + 1;
        parts[idx] = rem / w;
        rem -= parts[idx] * w;
    }
    parts[0] = rem;
}

impl Iterator for WeightedPartitions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let current = self.parts.clone();
        match (1..self.parts.len()).find(|&i| self.parts[i] > 0) {
            Some(i) => {
                self.parts[i] -= 1;
                // Positions 1..i are zero, so only l_1 and the freed part remain.
                let rem = self.parts[0] + i as u64 + 1;
                fill_greedy(&mut self.parts, i - 1, rem);
            }
            None => self.done = true,
        }
        Some(current)
    }
}

/// Number of compositions of `n` into `p` positive parts, `binomial(n-1, p-1)`.
pub fn compositions_count(n: u64, p: u64) -> Result<BigUint> {
    if p == 0 || p > n {
        return Err(invalid(format!("need 1 <= p <= n, got n = {n}, p = {p}")));
    }
    Ok(binomial(n - 1, p - 1))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(1).unwrap(), q(1, 1));
        assert_eq!(harmonic(3).unwrap(), q(11, 6));
        assert!(harmonic(0).is_err());
        assert!((harmonic_f64(3) - 11.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn skn_examples() {
        assert_eq!(sum_skn(1, 1), q(2, 1));
        assert_eq!(sum_skn(2, 1), q(6, 1));
        assert_eq!(sum_skn(1, 2), q(3, 1));
    }

    #[test]
    fn nondecreasing_examples() {
        assert_eq!(sum_nondecreasing(1, 2), q(3, 2));
        assert_eq!(sum_nondecreasing(2, 2), q(7, 4));
        for n in 1..8 {
            assert_eq!(sum_nondecreasing(n, 1), q(1, 1));
        }
    }

    #[test]
    fn skn_sum_params_reject_zero() {
        assert!(SknSumSpec::new(0, 3).is_err());
        let s = SknSumSpec::new(1, 2).unwrap();
        assert_eq!(s.skn(), q(3, 1));
        assert_eq!(s.nondecreasing(), q(3, 2));
    }

    #[test]
    fn incremental_matches_fresh() {
        let mut p = ReciprocalProduct::new(3);
        for k in 1..=30u64 {
            p.push(k, 4);
            assert_eq!(p.coeff(3), sum_skn(3, k));
        }
        assert!((p.coeff_f64(3) - crate::rational_to_f64(&sum_skn(3, 30))).abs() < 1e-9);
    }

    #[test]
    fn partitions_examples() {
        let got: Vec<_> = weighted_partitions(2, 2).collect();
        assert_eq!(got, vec![vec![0, 1], vec![2, 0]]);
        assert_eq!(weighted_partitions(1, 5).collect::<Vec<_>>(), vec![vec![5]]);
        let got: HashSet<_> = weighted_partitions(3, 3).collect();
        let want: HashSet<_> = [vec![3, 0, 0], vec![1, 1, 0], vec![0, 0, 1]].into_iter().collect();
        assert_eq!(got, want);
        assert_eq!(weighted_partitions(3, 0).collect::<Vec<_>>(), vec![vec![0, 0, 0]]);
    }

    #[test]
    fn partitions_order_is_descending() {
        let got: Vec<Vec<u64>> = weighted_partitions(3, 6).collect();
        let keys: Vec<Vec<u64>> = got.iter().map(|l| l.iter().rev().copied().collect()).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| b.cmp(a));
        assert_eq!(keys, sorted);
    }

    #[test]
    fn compositions_examples() {
        assert_eq!(compositions_count(4, 2).unwrap(), BigUint::from(3u32));
        assert_eq!(compositions_count(7, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(compositions_count(7, 7).unwrap(), BigUint::from(1u32));
        assert!(compositions_count(3, 4).is_err());
        assert!(compositions_count(3, 0).is_err());
    }

    #[test]
    fn monotone_in_k() {
        for n in 1..5 {
            for k in 1..12 {
                assert!(sum_skn(n, k + 1) > sum_skn(n, k));
                assert!(sum_nondecreasing(n, k + 1) > sum_nondecreasing(n, k));
            }
        }
    }

    proptest! {
        #[test]
        fn harmonic_recurrence(k in 2u64..300) {
            prop_assert_eq!(harmonic(k).unwrap() - harmonic(k - 1).unwrap(), q(1, k as i64));
        }

        #[test]
        fn partitions_are_exact_and_distinct(k in 1usize..6, m in 0u64..25) {
            let all: Vec<_> = weighted_partitions(k, m).collect();
            let distinct: HashSet<_> = all.iter().cloned().collect();
            prop_assert_eq!(distinct.len(), all.len());
            for l in &all {
                let w: u64 = l.iter().enumerate().map(|(i, x)| (i as u64 + 1) * x).sum();
                prop_assert_eq!(w, m);
            }
            // Count against a brute-force scan of the box.
            let mut count = 0usize;
            let mut t = vec![0u64; k];
            loop {
                let w: u64 = t.iter().enumerate().map(|(i, x)| (i as u64 + 1) * x).sum();
                if w == m { count += 1; }
                let mut i = 0;
                loop {
                    if i == k { break; }
                    t[i] += 1;
                    if t[i] * (i as u64 + 1) <= m { break; }
                    t[i] = 0;
                    i += 1;
                }
                if i == k { break; }
            }
            prop_assert_eq!(count, all.len());
        }
    }
}
