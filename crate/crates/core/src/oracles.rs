//! Brute-force counterparts of the generating-function and Chow-ring
//! computations, plus the asymptotic checks built on top of them.
//!
//! Nothing here reuses the product/series code paths it is checked against:
//! the reciprocal sums are enumerated term by term, monomials are counted by
//! coin-change dynamic programming, and partition sums walk the tuples.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::chow::weighted_tangent_top_segre;
use crate::combinatorics::{binomial, factorial, sum_nondecreasing, sum_skn, weighted_partitions};
use crate::error::{Error, Result};
use crate::jets::{BoundaryData, h0_conormal_power};
use crate::{Rational, rational_to_f64};

/// Largest number of items any oracle enumeration will walk.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// One side of a comparison.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Integer(BigInt),
    Float(f64),
}

impl Value {
    pub fn approx(&self) -> f64 {
        match self {
            Value::Exact(q) => rational_to_f64(q),
            Value::Integer(i) => i.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Integer(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:.12e}"),
        }
    }
}

impl From<Rational> for Value {
    fn from(q: Rational) -> Self {
        Value::Exact(q)
    }
}

impl From<f64> for Value {
    fn from(x: f64) -> Self {
        Value::Float(x)
    }
}

impl From<BigUint> for Value {
    fn from(x: BigUint) -> Self {
        Value::Integer(x.into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub label: String,
    pub lhs: Value,
    pub rhs: Value,
    pub passed: bool,
}

/// Pass/fail record of a family of checks, keeping both compared values.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checks: Vec::new() }
    }

    pub fn record(&mut self, label: impl Into<String>, lhs: impl Into<Value>, rhs: impl Into<Value>, passed: bool) {
        self.checks.push(CheckRecord { label: label.into(), lhs: lhs.into(), rhs: rhs.into(), passed });
    }

    /// Records an exact equality check.
    pub fn equal(&mut self, label: impl Into<String>, lhs: Rational, rhs: Rational) {
        let passed = lhs == rhs;
        self.record(label, lhs, rhs, passed);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

fn guard(count: BigUint) -> Result<()> {
    if count > BigUint::from(ENUMERATION_GUARD) {
        return Err(Error::GuardExceeded { count: count.to_string(), limit: ENUMERATION_GUARD });
    }
    Ok(())
}

/// Walks all exponent matrices `(l_{i,j})`, `i = 1..=n+1`, `j = 1..=k`, with
/// total `n` and sums `prod_j j^{-(l_{1,j} + ... + l_{n+1,j})}`.
pub fn sum_skn_bruteforce(n: usize, k: u64) -> Result<Rational> {
    let cells = (n as u64 + 1) * k;
    guard(binomial(n as u64 + cells - 1, n as u64))?;
    // Cell c sits in column j = c / (n+1) + 1.
    let column: Vec<u64> = (0..cells).map(|c| c / (n as u64 + 1) + 1).collect();
    let mut total = Rational::zero();
    distribute(n, &column, 0, &mut BigInt::one(), &mut total);
    Ok(total)
}

/// Places `left` units into cells `from..`, adding `1 / (product of the
/// chosen columns)` for each complete placement.
fn distribute(left: usize, column: &[u64], from: usize, acc: &mut BigInt, total: &mut Rational) {
    if left == 0 {
        *total += Rational::new(BigInt::one(), acc.clone());
        return;
    }
    if from == column.len() {
        return;
    }
    // Either the current cell takes one more unit, or we move past it.
    let saved = acc.clone();
    *acc *= column[from];
    distribute(left - 1, column, from, acc, total);
    *acc = saved;
    distribute(left, column, from + 1, acc, total);
}

/// Direct sum over `1 <= i_1 <= ... <= i_n <= k` of `1 / (i_1 ... i_n)`.
pub fn sum_nondecreasing_bruteforce(n: usize, k: u64) -> Result<Rational> {
    guard(binomial(n as u64 + k - 1, n as u64))?;
    let mut total = Rational::zero();
    let mut tuple = vec![1u64; n];
    loop {
        let prod: BigInt = tuple.iter().map(|&x| BigInt::from(x)).product();
        total += Rational::new(BigInt::one(), prod);
        // Advance the rightmost position that can still grow; reset the tail to it.
        let Some(pos) = (0..n).rev().find(|&i| tuple[i] < k) else { break };
        tuple[pos] += 1;
        let v = tuple[pos];
        for t in &mut tuple[pos + 1..] {
            *t = v;
        }
    }
    Ok(total)
}

/// Monomial counts of weighted degree `0..=m_max` in variables of the given weights.
pub fn weighted_monomial_counts(weights: &[u64], m_max: u64) -> Vec<BigUint> {
    let len = m_max as usize + 1;
    let mut counts = vec![BigUint::zero(); len];
    counts[0] = BigUint::one();
    for &a in weights {
        let a = a as usize;
        for m in a..len {
            let prev = counts[m - a].clone();
            counts[m] += prev;
        }
    }
    counts
}

/// Number of `(e_0, ..., e_n) >= 0` with `sum a_i e_i = m`.
pub fn count_weighted_monomials(weights: &[u64], m: u64) -> BigUint {
    assert!(!weights.is_empty() && weights.iter().all(|&a| a >= 1), "weights must be positive");
    weighted_monomial_counts(weights, m).pop().expect("non-empty table")
}

/// Monomial count against `gcd/prod(a) * m^n / n!` at the largest multiple
/// of `lcm(a)` not exceeding `m_max`; passes within 2%.
pub fn check_orbifold_h0(weights: &[u64], m_max: u64) -> VerificationReport {
    let mut report = VerificationReport::new(format!("orbifold h0 {weights:?}"));
    let n = weights.len() - 1;
    let gcd = weights.iter().fold(0u64, |g, &a| g.gcd(&a));
    let lcm = weights.iter().fold(1u64, |l, &a| l.lcm(&a));
    let prod: BigInt = weights.iter().map(|&a| BigInt::from(a)).product();
    let expected = Rational::new(BigInt::from(gcd), prod);
    let counts = weighted_monomial_counts(weights, m_max);
    let nf = BigInt::from(factorial(n as u64));
    let m = (m_max / lcm) * lcm;
    if m > 0 {
        let ratio = Rational::new(BigInt::from(counts[m as usize].clone()) * &nf, num_traits::pow(BigInt::from(m), n));
        let rel = rational_to_f64(&((&ratio - &expected) / &expected)).abs();
        report.record(format!("ratio at m = {m}"), ratio, expected, rel <= 0.02);
    }
    report
}

/// `sum over j_1 + 2 j_2 + ... + k j_k = r` of `(j_1 + ... + j_k)^n / n!`.
pub fn partition_power_sum(n: usize, k: usize, r: u64) -> Rational {
    let total: BigUint =
        weighted_partitions(k, r).map(|j| num_traits::pow(BigUint::from(j.iter().sum::<u64>()), n)).sum();
    Rational::new(total.into(), factorial(n as u64).into())
}

/// Normalized partition power sum against its leading term
/// `1/k! * sum_nondecreasing(n,k) * r^{n+k-1} / (n+k-1)!`. Every `r` in the
/// top decade `[r_max/10, r_max]` must satisfy `ratio <= 1 + 10/r`.
pub fn check_prop38(n: usize, k: usize, r_max: u64) -> VerificationReport {
    let mut report = VerificationReport::new(format!("partition power sum n={n} k={k}"));
    let d = n + k - 1;
    let lead = sum_nondecreasing(n, k as u64)
        / Rational::from_integer(BigInt::from(factorial(k as u64)) * BigInt::from(factorial(d as u64)));
    for r in (r_max / 10).max(1)..=r_max {
        let leading = &lead * Rational::from_integer(num_traits::pow(BigInt::from(r), d));
        let ratio = partition_power_sum(n, k, r) / leading;
        let slack = Rational::new(BigInt::from(r + 10), BigInt::from(r));
        let passed = ratio <= slack;
        report.record(format!("r = {r}"), ratio, slack, passed);
    }
    report
}

/// `weighted_tangent_top_segre(n,k) * (k!)^n == sum_skn(n,k)` over the box.
pub fn cross_check_volume_identity(n_max: usize, k_max: u64) -> VerificationReport {
    cross_check_with(n_max, k_max, weighted_tangent_top_segre)
}

pub(crate) fn cross_check_with(
    n_max: usize,
    k_max: u64,
    top_segre: impl Fn(usize, u64) -> Rational,
) -> VerificationReport {
    assert!(n_max <= 5 && k_max <= 6, "identity check is limited to n <= 5, k <= 6");
    let mut report = VerificationReport::new("weighted Segre volume identity");
    for n in 1..=n_max {
        for k in 1..=k_max {
            let kf = Rational::from_integer(num_traits::pow(BigInt::from(factorial(k)), n));
            report.equal(format!("n = {n}, k = {k}"), top_segre(n, k) * kf, sum_skn(n, k));
        }
    }
    report
}

/// `h^0(D, Gr Q_{k,m})` straight from the triple sum, calling
/// `h0_conormal_power` once per graded piece.
pub fn h0_gr_q_bruteforce(k: usize, m: u64, b: &BoundaryData) -> Rational {
    let n = b.n() as u64;
    let mut total = Rational::zero();
    for r in 0..=m {
        let mut vanishing = Rational::zero();
        for j in weighted_partitions(k, r) {
            let mut before = 0i64;
            for &ji in &j {
                for s in 0..ji as i64 {
                    vanishing += h0_conormal_power(before + s, b).expect("non-negative power");
                }
                before += ji as i64;
            }
        }
        let rank: BigUint = weighted_partitions(k, m - r)
            .map(|l| l.iter().map(|&lt| binomial(lt + n - 2, n - 2)).product::<BigUint>())
            .sum();
        total += vanishing * Rational::from_integer(rank.into());
    }
    total
}

/// Partitions of `m` into parts of size at most `k`.
pub fn partition_count(m: u64, k: u64) -> BigUint {
    fn go(m: u64, k: u64, memo: &mut std::collections::HashMap<(u64, u64), BigUint>) -> BigUint {
        if m == 0 {
            return BigUint::one();
        }
        if k == 0 {
            return BigUint::zero();
        }
        if let Some(v) = memo.get(&(m, k)) {
            return v.clone();
        }
        let with_k = if m >= k { go(m - k, k, memo) } else { BigUint::zero() };
        let v = go(m, k - 1, memo) + with_k;
        memo.insert((m, k), v.clone());
        v
    }
    go(m, k, &mut Default::default())
}
