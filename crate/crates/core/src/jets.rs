//! Dimension counts for Green-Griffiths jet bundles and for the sheaf of
//! boundary vanishing conditions `Q_{k,m}` on a toroidal compactification.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::Rational;
use crate::combinatorics::{binomial, factorial, sum_nondecreasing, weighted_partitions};
use crate::error::{Result, invalid};

/// Boundary data of a toroidal compactification whose boundary `D` is a
/// disjoint union of `components` abelian varieties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryData {
    n: usize,
    neg_dn_abs: Rational,
    components: u64,
}

impl BoundaryData {
    /// `neg_dn_abs` is the positive number `-(-D)^n`.
    pub fn new(n: usize, neg_dn_abs: Rational, components: u64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("boundary data needs n >= 2"));
        }
        if neg_dn_abs <= Rational::zero() {
            return Err(invalid("-(-D)^n must be positive"));
        }
        if components == 0 {
            return Err(invalid("boundary needs at least one component"));
        }
        Ok(Self { n, neg_dn_abs, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neg_dn_abs(&self) -> &Rational {
        &self.neg_dn_abs
    }

    pub fn components(&self) -> u64 {
        self.components
    }
}

/// Rank of `E^GG_{k,m}` over an `n`-dimensional base: the number of
/// monomials in the graded pieces `S^{l_1} Omega (x) ... (x) S^{l_k} Omega`.
pub fn rank_gr_e(n: usize, k: usize, m: u64) -> BigUint {
    assert!(n >= 1 && k >= 1, "n and k must be at least 1");
    let r = (n - 1) as u64;
    weighted_partitions(k, m).map(|l| l.iter().map(|&li| binomial(li + r, r)).product::<BigUint>()).sum()
}

/// `h^0(D, (N*)^{(x) s})`: `components` for `s = 0`, otherwise
/// `s^{n-1} / (n-1)! * [-(-D)^n]`.
pub fn h0_conormal_power(s: i64, b: &BoundaryData) -> Result<Rational> {
    if s < 0 {
        return Err(invalid("conormal power must be non-negative"));
    }
    if s == 0 {
        return Ok(Rational::from_integer(BigInt::from(b.components)));
    }
    let e = b.n - 1;
    let num = num_traits::pow(BigInt::from(s), e);
    let den = BigInt::from(factorial(e as u64));
    Ok(Rational::new(num, den) * &b.neg_dn_abs)
}

/// `[x^q] prod_{t=1..k} (1 - x^t)^{-(n-1)}` for `q = 0..=m`: the rank of
/// `sum_{l_1 + 2 l_2 + ... = q} S^{l_1} Omega_D (x) ... (x) S^{l_k} Omega_D`.
pub(crate) fn boundary_rank_table(n: usize, k: usize, m: u64) -> Vec<BigUint> {
    let len = m as usize + 1;
    let mut table = vec![BigUint::zero(); len];
    table[0] = BigUint::one();
    // Each factor (1 - x^t)^{-1} is a running sum with stride t.
    for t in 1..=k {
        for _ in 0..n - 1 {
            for q in t..len {
                let prev = table[q - t].clone();
                table[q] += prev;
            }
        }
    }
    table
}

/// Exact `h^0(D, Gr_F Q_{k,m})`, the upper bound for `h^0(Q_{k,m})`.
///
/// The vanishing-condition factor for a fixed `(j_1, ..., j_k)` is
/// `sum_i sum_{s=0}^{j_i - 1} h^0((N*)^{j_1 + ... + j_{i-1} + s})`: the sheaf
/// `O_{jD}` has exactly `j` graded pieces `(N*)^s`, `s = 0..j-1`.
pub fn h0_gr_q(k: usize, m: u64, b: &BoundaryData) -> Rational {
    assert!(k >= 1, "k must be at least 1");
    let n = b.n;
    let e = n - 1;
    // prefix[t] = sum_{x=1}^{t-1} x^{n-1}; exponents never exceed m.
    let mut prefix = Vec::with_capacity(m as usize + 2);
    prefix.push(BigUint::zero());
    prefix.push(BigUint::zero());
    for x in 1..=m {
        let next = &prefix[x as usize] + num_traits::pow(BigUint::from(x), e);
        prefix.push(next);
    }
    let ranks = boundary_rank_table(n, k, m);

    // h0 total = components * zeros + [-(-D)^n] / (n-1)! * powers.
    let mut zeros = BigUint::zero();
    let mut powers = BigUint::zero();
    for r in 1..=m {
        let rank = &ranks[(m - r) as usize];
        if rank.is_zero() {
            continue;
        }
        let mut z_r = 0u64;
        let mut w_r = BigUint::zero();
        for j in weighted_partitions(k, r) {
            let mut before = 0u64;
            for &ji in &j {
                if ji >= 1 {
                    if before == 0 {
                        z_r += 1;
                    }
                    let lo = before.max(1) as usize;
                    let hi = (before + ji) as usize;
                    if hi > lo {
                        w_r += &prefix[hi] - &prefix[lo];
                    }
                }
                before += ji;
            }
        }
        zeros += BigUint::from(z_r) * rank;
        powers += w_r * rank;
    }
    let zeros = Rational::from_integer(BigInt::from(zeros) * BigInt::from(b.components));
    let powers = Rational::new(BigInt::from(powers), BigInt::from(factorial(e as u64)));
    zeros + powers * &b.neg_dn_abs
}

/// Leading coefficient of `h^0(Q_{k,m})` against
/// `[-(-D)^n] m^{n+nk-1} / (n+nk-1)!`, namely `sum_nondecreasing(n,k) / (k!)^n`.
pub fn boundary_coeff(n: usize, k: u64) -> Rational {
    let kf = BigInt::from(factorial(k));
    sum_nondecreasing(n, k) / Rational::from_integer(num_traits::pow(kf, n))
}
