//! Self-verification suites run by `wsegre verify`.
//!
//! Long sweeps record one aggregated check per family (the tightest case)
//! rather than one record per parameter value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bounds::{
    EULER_GAMMA, GeometryInput, PI, simple_lower_bound_scaled, theorem1_bound, theorem1_bound_split, volume_log,
};
use crate::chow::{weighted_sum_with_prefactor, weighted_tangent_top_segre_with};
use crate::combinatorics::{CompensatedSum, ReciprocalProduct, binomial, factorial, sum_nondecreasing, sum_skn};
use crate::error::Error;
use crate::jets::{BoundaryData, boundary_coeff, h0_gr_q, rank_gr_e};
use crate::oracles::{
    VerificationReport, check_orbifold_h0, check_prop38, count_weighted_monomials, cross_check_with,
    h0_gr_q_bruteforce, partition_count, sum_nondecreasing_bruteforce, sum_skn_bruteforce,
};
use crate::{Rational, rational_to_f64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Oracles,
    Inequalities,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "identities" => Ok(Suite::Identities),
            "oracles" => Ok(Suite::Oracles),
            "inequalities" => Ok(Suite::Inequalities),
            "all" => Ok(Suite::All),
            other => Err(Error::Parse(format!("unknown suite '{other}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Identities => "identities",
            Suite::Oracles => "oracles",
            Suite::Inequalities => "inequalities",
            Suite::All => "all",
        })
    }
}

/// Deliberate corruptions used as negative controls for the suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Drops the `gcd / prod` factor of the weighted Whitney formula.
    WhitneyPrefactor,
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "whitney-prefactor" => Ok(Mutation::WhitneyPrefactor),
            other => Err(Error::Parse(format!("unknown mutation '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub fast: bool,
    pub mutation: Option<Mutation>,
}

pub fn run(suite: Suite, opts: Options) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.extend(identities(opts));
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        out.extend(oracles(opts));
    }
    if matches!(suite, Suite::Inequalities | Suite::All) {
        out.extend(inequalities(opts));
    }
    out
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The weighted Segre volume identity for `n <= n_max`, `k <= k_max`.
pub fn volume_identity(n_max: usize, k_max: u64, mutation: Option<Mutation>) -> VerificationReport {
    match mutation {
        None => cross_check_with(n_max, k_max, |n, k| {
            weighted_tangent_top_segre_with(n, k, crate::chow::segre_weighted_sum)
        }),
        Some(Mutation::WhitneyPrefactor) => cross_check_with(n_max, k_max, |n, k| {
            weighted_tangent_top_segre_with(n, k, |s| weighted_sum_with_prefactor(s, &Rational::one()))
        }),
    }
}

pub fn identities(opts: Options) -> Vec<VerificationReport> {
    let mut reports = vec![volume_identity(5, 6, opts.mutation)];

    let mut two_paths = VerificationReport::new("volume bound: combined vs split evaluation");
    let mut no_boundary = VerificationReport::new("volume bound without boundary equals log volume");
    for n in 2..=5usize {
        for k in 1..=6u64 {
            for (kd, neg) in [(q(9, 1), q(-1, 1)), (q(27, 4), q(-5, 3)), (q(1, 1), q(-100, 1))] {
                let g = GeometryInput::new(n, kd.clone(), neg, 1).expect("valid geometry");
                two_paths.equal(format!("n={n} k={k} kd={kd}"), theorem1_bound(&g, k), theorem1_bound_split(&g, k));
                let g0 = GeometryInput::new(n, kd.clone(), Rational::zero(), 1).expect("valid geometry");
                no_boundary.equal(format!("n={n} k={k} kd={kd}"), theorem1_bound(&g0, k), volume_log(n, k, &kd));
            }
        }
    }
    reports.push(two_paths);
    reports.push(no_boundary);

    let mut small = VerificationReport::new("boundary sheaf small cases");
    for c in [1u64, 2, 5] {
        for beta in [q(1, 1), q(7, 3)] {
            for n in 2..=4 {
                let b = BoundaryData::new(n, beta.clone(), c).expect("valid boundary");
                for k in 1..=3 {
                    small.equal(format!("k={k} m=0 n={n} c={c}"), h0_gr_q(k, 0, &b), Rational::zero());
                }
                small.equal(format!("k=1 m=1 n={n} c={c}"), h0_gr_q(1, 1, &b), Rational::from_integer(c.into()));
            }
            let b = BoundaryData::new(2, beta.clone(), c).expect("valid boundary");
            small.equal(
                format!("k=1 m=2 n=2 c={c} beta={beta}"),
                h0_gr_q(1, 2, &b),
                Rational::from_integer((2 * c).into()) + &beta,
            );
        }
    }
    reports.push(small);

    let mut ranks = VerificationReport::new("boundary filtration preserves ranks");
    for n in 2..=6u64 {
        for l in 0..=20u64 {
            let graded: num_bigint::BigUint = (0..=l).map(|j| binomial(j + n - 2, n - 2)).sum();
            let lhs = Rational::from_integer(graded.into());
            let rhs = Rational::from_integer(binomial(l + n - 1, n - 1).into());
            ranks.equal(format!("n={n} l={l}"), lhs, rhs);
        }
    }
    reports.push(ranks);
    reports
}

pub fn oracles(opts: Options) -> Vec<VerificationReport> {
    let mut reports = Vec::new();

    let mut sums = VerificationReport::new("reciprocal sums vs enumeration");
    for n in 1..=4usize {
        for k in 1..=4u64 {
            let brute = sum_skn_bruteforce(n, k).expect("within guard");
            sums.equal(format!("S_k,n n={n} k={k}"), sum_skn(n, k), brute);
            let brute = sum_nondecreasing_bruteforce(n, k).expect("within guard");
            sums.equal(format!("nondecreasing n={n} k={k}"), sum_nondecreasing(n, k), brute);
        }
    }
    reports.push(sums);

    let scale = if opts.fast { 1_000 } else { 10_000 };
    for weights in [vec![1u64, 1], vec![1, 2], vec![2, 4, 6], vec![1, 2, 3]] {
        let lcm = weights.iter().fold(1u64, |l, &a| num_integer::lcm(l, a));
        reports.push(check_orbifold_h0(&weights, scale * lcm));
    }
    let mut exact = VerificationReport::new("orbifold h0 [1, 1, 1] exact");
    for m in 0..=300u64 {
        let count = count_weighted_monomials(&[1, 1, 1], m);
        exact.equal(
            format!("m = {m}"),
            Rational::from_integer(count.into()),
            Rational::from_integer(binomial(m + 2, 2).into()),
        );
    }
    reports.push(exact);

    let r_max = if opts.fast { 200 } else { 500 };
    for (n, k) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        reports.push(check_prop38(n, k, r_max));
    }

    let mut h0 = VerificationReport::new("boundary sheaf sections: prefix sums vs direct sum");
    for n in 2..=4 {
        let b = BoundaryData::new(n, q(3, 2), 2).expect("valid boundary");
        for k in 1..=3 {
            for m in [0u64, 1, 2, 5, 9, 12] {
                h0.equal(format!("n={n} k={k} m={m}"), h0_gr_q(k, m, &b), h0_gr_q_bruteforce(k, m, &b));
            }
        }
    }
    reports.push(h0);

    let mut parts = VerificationReport::new("ranks in dimension one vs partition counts");
    for k in 1..=6usize {
        for m in 0..=30u64 {
            let lhs = Rational::from_integer(rank_gr_e(1, k, m).into());
            let rhs = Rational::from_integer(partition_count(m, k as u64).into());
            parts.equal(format!("k={k} m={m}"), lhs, rhs);
        }
    }
    reports.push(parts);

    reports.push(boundary_leading_coefficient(if opts.fast { 600 } else { 3000 }));
    reports
}

/// `h0_gr_q(2, m, b) / (m^5/5!)` against `boundary_coeff(2,2) * beta` for
/// `n = 2`, `c = 1`, `beta = 1`; passes within 10%.
pub fn boundary_leading_coefficient(m: u64) -> VerificationReport {
    let mut report = VerificationReport::new("boundary sheaf leading coefficient n=2 k=2");
    let b = BoundaryData::new(2, Rational::one(), 1).expect("valid boundary");
    let (n, k) = (2usize, 2usize);
    let d = n + n * k - 1;
    let norm = Rational::new(num_traits::pow(BigInt::from(m), d), BigInt::from(factorial(d as u64)));
    let ratio = h0_gr_q(k, m, &b) / norm;
    let target = boundary_coeff(n, k as u64) * b.neg_dn_abs();
    let rel = rational_to_f64(&((&ratio - &target) / &target)).abs();
    report.record(format!("m = {m}"), ratio, target, rel <= 0.10);
    report
}

pub fn inequalities(opts: Options) -> Vec<VerificationReport> {
    let big_k: &[u64] = if opts.fast { &[1_000] } else { &[1_000, 10_000] };
    vec![
        lower_chain(5, big_k),
        upper_bound_nondecreasing(8, if opts.fast { 1_000 } else { 10_000 }),
        harmonic_bracketing(if opts.fast { 100_000 } else { 1_000_000 }),
        simple_bound_below_volume(5, 100),
    ]
}

/// `n! S_{k,n} >= (n+1)^n H_k^n` (exact) and `H_k >= log k + gamma` (binary64)
/// for `n <= n_max`, `k` in `1..=100` and the extra values `big_k`.
pub fn lower_chain(n_max: usize, big_k: &[u64]) -> VerificationReport {
    let mut report = VerificationReport::new("lower chain for the open volume");
    let k_last = big_k.iter().copied().max().unwrap_or(100).max(100);
    let wanted = |k: u64| k <= 100 || big_k.contains(&k);
    let mut harmonic = ReciprocalProduct::new(1);
    let mut skn: Vec<ReciprocalProduct> = (1..=n_max).map(ReciprocalProduct::new).collect();
    let mut exact_ok = true;
    let mut worst_exact: Option<(f64, String, Rational, Rational)> = None;
    let mut worst_float: Option<(f64, u64, f64, f64)> = None;
    for k in 1..=k_last {
        harmonic.push(k, 1);
        for (i, p) in skn.iter_mut().enumerate() {
            p.push(k, i as u32 + 2);
        }
        if !wanted(k) {
            continue;
        }
        let h = harmonic.coeff(1);
        for (i, p) in skn.iter().enumerate() {
            let n = i + 1;
            let lhs = Rational::from_integer(factorial(n as u64).into()) * p.coeff(n);
            let rhs = num_traits::pow(Rational::from_integer(BigInt::from(n + 1)) * &h, n);
            exact_ok &= lhs >= rhs;
            let margin = rational_to_f64(&(&lhs / &rhs));
            if worst_exact.as_ref().is_none_or(|w| margin < w.0) {
                worst_exact = Some((margin, format!("n={n} k={k}"), lhs, rhs));
            }
        }
        let hf = rational_to_f64(&h);
        let lower = (k as f64).ln() + EULER_GAMMA;
        let margin = hf - lower;
        if worst_float.is_none_or(|w| margin < w.0) {
            worst_float = Some((margin, k, hf, lower));
        }
    }
    if let Some((_, label, lhs, rhs)) = worst_exact {
        report.record(format!("n! S >= (n+1)^n H^n, tightest at {label}"), lhs, rhs, exact_ok);
    }
    if let Some((margin, k, hf, lower)) = worst_float {
        report.record(format!("H_k >= log k + gamma, tightest at k={k}"), hf, lower, margin >= 0.0);
    }
    report
}

/// `sum_nondecreasing(n,k) <= (log k + gamma + 1/2)^n / n! + pi^2/6 (n-2) (log k + gamma + 3/2)^{n-2}`
/// for `3 <= n <= n_max`, `2 <= k <= k_max`.
pub fn upper_bound_nondecreasing(n_max: usize, k_max: u64) -> VerificationReport {
    let mut report = VerificationReport::new("upper bound for the boundary sum");
    let mut p = ReciprocalProduct::new(n_max);
    p.push(1, 1);
    let mut ok = true;
    let mut worst: Option<(f64, String, f64, f64)> = None;
    for k in 2..=k_max {
        p.push(k, 1);
        let j = (k as f64).ln() + EULER_GAMMA;
        for n in 3..=n_max {
            let lhs = p.coeff_f64(n);
            let nf = (1..=n).map(|x| x as f64).product::<f64>();
            let rhs = (j + 0.5).powi(n as i32) / nf + PI * PI / 6.0 * (n - 2) as f64 * (j + 1.5).powi(n as i32 - 2);
            ok &= lhs <= rhs;
            let ratio = lhs / rhs;
            if worst.as_ref().is_none_or(|w| ratio > w.0) {
                worst = Some((ratio, format!("n={n} k={k}"), lhs, rhs));
            }
        }
    }
    if let Some((_, label, lhs, rhs)) = worst {
        report.record(format!("sum <= bound, tightest at {label}"), lhs, rhs, ok);
    }
    report
}

/// `gamma < H_k - log k <= gamma + 1/2` for `1 <= k <= k_max`, tolerance `1e-12`.
pub fn harmonic_bracketing(k_max: u64) -> VerificationReport {
    const TOL: f64 = 1e-12;
    let mut report = VerificationReport::new("harmonic bracketing");
    let mut h = CompensatedSum::default();
    let mut lo_ok = true;
    let mut hi_ok = true;
    let mut min_gap = (f64::INFINITY, 0u64);
    let mut max_gap = (f64::NEG_INFINITY, 0u64);
    for k in 1..=k_max {
        h.add(1.0 / k as f64);
        let gap = h.value() - (k as f64).ln();
        lo_ok &= gap > EULER_GAMMA - TOL;
        hi_ok &= gap <= EULER_GAMMA + 0.5 + TOL;
        if gap < min_gap.0 {
            min_gap = (gap, k);
        }
        if gap > max_gap.0 {
            max_gap = (gap, k);
        }
    }
    report.record(format!("H_k - log k > gamma, smallest at k={}", min_gap.1), min_gap.0, EULER_GAMMA, lo_ok);
    report.record(
        format!("H_k - log k <= gamma + 1/2, largest at k={}", max_gap.1),
        max_gap.0,
        EULER_GAMMA + 0.5,
        hi_ok,
    );
    report
}

/// Simple float bound stays below the exact log volume, both scaled by
/// `(k!)^n / kd_n`, with relative tolerance `1e-9`.
pub fn simple_bound_below_volume(n_max: usize, k_max: u64) -> VerificationReport {
    let mut report = VerificationReport::new("simple bound below exact log volume");
    let mut ok = true;
    let mut worst: Option<(f64, String, f64, f64)> = None;
    for n in 1..=n_max {
        let mut p = ReciprocalProduct::new(n);
        let open_scale = num_traits::pow(n as f64 + 1.0, n);
        for k in 1..=k_max {
            p.push(k, n as u32 + 1);
            let exact = p.coeff_f64(n) / open_scale;
            let simple = simple_lower_bound_scaled(n, k);
            ok &= simple <= exact * (1.0 + 1e-9);
            let ratio = simple / exact;
            if worst.as_ref().is_none_or(|w| ratio > w.0) {
                worst = Some((ratio, format!("n={n} k={k}"), simple, exact));
            }
        }
    }
    if let Some((_, label, simple, exact)) = worst {
        report.record(format!("simple <= exact, tightest at {label}"), simple, exact, ok);
    }
    report
}
