//! The volume lower bound for Green-Griffiths jet differentials on a toroidal
//! compactification `X = (B^n / Gamma) + D`, and the explicit jet orders `k`
//! past which `O(1)` on the jet space is big.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::combinatorics::{ReciprocalProduct, factorial, sum_nondecreasing, sum_skn};
use crate::error::{Error, Result, invalid};
use crate::jets::{BoundaryData, boundary_coeff};
use crate::{Rational, rational_to_f64};

#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;
pub const PI: f64 = std::f64::consts::PI;

/// Transcendental constants used by the floating-point bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FloatConstants {
    pub gamma: f64,
    pub pi: f64,
}

impl Default for FloatConstants {
    fn default() -> Self {
        Self { gamma: EULER_GAMMA, pi: PI }
    }
}

/// Intersection numbers of a toroidal compactification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryInput {
    pub n: usize,
    /// `(K + D)^n`
    pub kd_n: Rational,
    /// `(-D)^n`, signed; negative for an actual boundary.
    pub neg_dn: Rational,
    pub components: u64,
}

impl GeometryInput {
    pub fn new(n: usize, kd_n: Rational, neg_dn: Rational, components: u64) -> Result<Self> {
        if n < 2 {
            return Err(invalid("geometry needs n >= 2"));
        }
        if components == 0 {
            return Err(invalid("boundary needs at least one component"));
        }
        Ok(Self { n, kd_n, neg_dn, components })
    }

    /// `K^n = (K + D)^n + (-D)^n`.
    pub fn canonical_volume(&self) -> Rational {
        &self.kd_n + &self.neg_dn
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.kd_n.is_positive() {
            w.push(format!("(K+D)^n = {} is not positive", self.kd_n));
        }
        if !self.neg_dn.is_negative() {
            w.push(format!("(-D)^n = {} is expected to be negative", self.neg_dn));
        }
        w
    }

    pub fn boundary(&self) -> Result<BoundaryData> {
        BoundaryData::new(self.n, -self.neg_dn.clone(), self.components)
    }
}

fn factorial_power(k: u64, n: usize) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(factorial(k)), n))
}

fn int(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Volume of the logarithmic jet differentials:
/// `kd_n / ((n+1)^n (k!)^n) * sum_skn(n, k)`.
pub fn volume_log(n: usize, k: u64, kd_n: &Rational) -> Rational {
    let scale = num_traits::pow(int(n as u64 + 1), n) * factorial_power(k, n);
    kd_n * sum_skn(n, k) / scale
}

/// `(k!)^n` times the lower bound on the volume of `E^GG_{k,.}`:
/// `kd_n/(n+1)^n * sum_skn + (-D)^n * sum_nondecreasing`. Same sign as the bound.
pub fn theorem1_scaled(g: &GeometryInput, k: u64) -> Rational {
    let n = g.n;
    let open = &g.kd_n / num_traits::pow(int(n as u64 + 1), n) * sum_skn(n, k);
    open + &g.neg_dn * sum_nondecreasing(n, k)
}

/// Lower bound on the volume of the order-`k` Green-Griffiths jet differentials.
pub fn theorem1_bound(g: &GeometryInput, k: u64) -> Rational {
    theorem1_scaled(g, k) / factorial_power(k, g.n)
}

/// The same bound assembled from the open part and the boundary correction.
pub fn theorem1_bound_split(g: &GeometryInput, k: u64) -> Rational {
    volume_log(g.n, k, &g.kd_n) + &g.neg_dn * boundary_coeff(g.n, k)
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// `kd_n (log k + gamma)^n / ((k!)^n n!)`. Underflows to zero for large `k`;
/// see [`simple_lower_bound_scaled`].
pub fn simple_lower_bound(n: usize, k: u64, kd_n: &Rational) -> f64 {
    let ln_scale = n as f64 * ln_factorial(k);
    rational_to_f64(kd_n) * simple_lower_bound_scaled(n, k) * (-ln_scale).exp()
}

/// `(log k + gamma)^n / n!`, the simple bound with `kd_n / (k!)^n` factored out.
pub fn simple_lower_bound_scaled(n: usize, k: u64) -> f64 {
    let j = (k as f64).ln() + EULER_GAMMA;
    j.powi(n as i32) / ln_factorial(n as u64).exp()
}

/// The factor `A(k, n)` in `vol >= C_k [ (K+D)^n + A(k,n) (-D)^n ]`, as a
/// function of `log k`:
/// `((j + 1/2)/j)^n + (n-2) n! pi^2/6 (j + 3/2)^{n-2} / j^n` with `j = log k + gamma`.
pub fn a_of_kn(k_log: f64, n: usize) -> Result<f64> {
    let j = k_log + EULER_GAMMA;
    if j <= 0.0 {
        return Err(invalid("log k + gamma must be positive"));
    }
    let nf = ln_factorial(n as u64).exp();
    let main = (1.0 + 0.5 / j).powi(n as i32);
    let tail =
        if n <= 2 { 0.0 } else { (n - 2) as f64 * nf * PI * PI / 6.0 * (1.0 + 1.5 / j).powi(n as i32 - 2) / (j * j) };
    Ok(main + tail)
}

/// Coarser upper bound for `A(k, n)` used to derive the explicit thresholds:
/// `(1 + 3/(2j))^{n-2} ((1 + 1/(2j))^2 + pi^2/6 (n-2) n! / j)`.
/// Dominates [`a_of_kn`] once `log k + gamma >= 1`.
pub fn a_of_kn_majorant(k_log: f64, n: usize) -> Result<f64> {
    let j = k_log + EULER_GAMMA;
    if j <= 0.0 {
        return Err(invalid("log k + gamma must be positive"));
    }
    let c = PI * PI / 6.0 * n.saturating_sub(2) as f64 * ln_factorial(n as u64).exp();
    Ok((1.0 + 1.5 / j).powi(n as i32 - 2) * ((1.0 + 0.5 / j).powi(2) + c / j))
}

/// `(n-2) n! + 1`.
pub fn corollary_coefficient(n: usize) -> BigUint {
    BigUint::from((n - 2) as u64) * factorial(n as u64) + 1u32
}

/// Real number `T` such that `log k > T` makes `O(1)` on the order-`k` jet
/// space big. For `n` in {4, 5} the threshold depends on `(-D)^n`.
pub fn threshold_logk(n: usize, neg_dn: Option<&Rational>) -> Result<f64> {
    match n {
        0..=3 => Err(Error::UnsupportedDimension(n)),
        4 | 5 => {
            let neg_dn = neg_dn.ok_or_else(|| invalid(format!("n = {n} needs (-D)^n to evaluate the threshold")))?;
            let coeff = Rational::from_integer(BigInt::from(corollary_coefficient(n)));
            Ok(-EULER_GAMMA - rational_to_f64(&(neg_dn * coeff)))
        }
        _ => {
            let c = PI * PI / 6.0 * (n - 2) as f64 * ln_factorial(n as u64).exp();
            Ok(-EULER_GAMMA + (c + 1.0) / ((n + 1) as f64 / (2.0 * PI) - 1.0))
        }
    }
}

/// `ceil(exp(t))`, or `None` when it does not fit in a `u64`.
pub fn recommended_k(log_k_threshold: f64) -> Option<u64> {
    if log_k_threshold >= 63.0 * std::f64::consts::LN_2 {
        return None;
    }
    Some((log_k_threshold.exp().ceil() as u64).max(1))
}

/// Smallest `k <= k_max` with a positive volume bound, by exact comparison.
pub fn find_min_k(g: &GeometryInput, k_max: u64) -> Option<u64> {
    let n = g.n;
    let open_weight = &g.kd_n / num_traits::pow(int(n as u64 + 1), n);
    let mut skn = ReciprocalProduct::new(n);
    let mut nondec = ReciprocalProduct::new(n);
    for k in 1..=k_max {
        skn.push(k, n as u32 + 1);
        nondec.push(k, 1);
        let value = &open_weight * skn.coeff(n) + &g.neg_dn * nondec.coeff(n);
        if value.is_positive() {
            return Some(k);
        }
    }
    None
}

/// `(k!)^n n! bound / (log k)^n`, which tends to `K^n` as `k` grows.
pub fn asymptotic_ratio(g: &GeometryInput, k: u64) -> f64 {
    let n = g.n;
    let nf = ln_factorial(n as u64).exp();
    rational_to_f64(&theorem1_scaled(g, k)) * nf / (k as f64).ln().powi(n as i32)
}

/// One column of the table of explicit thresholds.
#[derive(Clone, Debug, PartialEq)]
pub enum Table1Entry {
    /// `log k > -gamma + coefficient * (-(-D)^n)`.
    Linear {
        coefficient: BigUint,
        published_coefficient: u64,
        published_notation: &'static str,
        footnote: Option<String>,
    },
    Numeric {
        log_k: f64,
        rounded: i64,
        published: i64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Row {
    pub n: usize,
    pub entry: Table1Entry,
}

/// Published values: n = 4, 5 as (coefficient, notation); n = 6..8 as `log k`.
const PUBLISHED_LINEAR: [(usize, u64, &str); 2] = [(4, 5, "(-D^4)"), (5, 361, "(D^5)")];
const PUBLISHED_NUMERIC: [(usize, i64); 3] = [(6, 41_534), (7, 151_711), (8, 920_325)];

pub fn table1() -> Vec<Table1Row> {
    let mut rows = Vec::new();
    for (n, published, notation) in PUBLISHED_LINEAR {
        let coefficient = corollary_coefficient(n);
        let mut footnote = None;
        if coefficient != BigUint::from(published) {
            footnote = Some(format!("computed (n-2)*n!+1 = {coefficient}; the published table prints {published}"));
        }
        if n == 5 {
            footnote = Some(format!(
                "published as {published} {notation}; the sign convention differs from n = 4, \
                 the value here multiplies -(-D)^{n} > 0"
            ));
        }
        rows.push(Table1Row {
            n,
            entry: Table1Entry::Linear {
                coefficient,
                published_coefficient: published,
                published_notation: notation,
                footnote,
            },
        });
    }
    for (n, published) in PUBLISHED_NUMERIC {
        let log_k = threshold_logk(n, None).expect("n >= 6 needs no boundary data");
        rows.push(Table1Row { n, entry: Table1Entry::Numeric { log_k, rounded: log_k.round() as i64, published } });
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn geom(n: usize, kd: i64, neg: i64) -> GeometryInput {
        GeometryInput::new(n, q(kd, 1), q(neg, 1), 1).unwrap()
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume_log(2, 1, &q(9, 1)), q(6, 1));
        assert_eq!(volume_log(1, 2, &q(2, 1)), q(3, 2));
        assert_eq!(volume_log(3, 4, &q(0, 1)), q(0, 1));
    }

    #[test]
    fn theorem_examples() {
        let g = geom(2, 9, 0);
        for k in 1..6 {
            assert_eq!(theorem1_bound(&g, k), volume_log(2, k, &q(9, 1)));
        }
        assert_eq!(theorem1_bound(&geom(2, 9, -1), 1), q(5, 1));
        let g = geom(2, 9, -1);
        let by_hand = sum_skn(2, 2) / q(36, 1) * q(9, 1) - q(7, 16);
        assert_eq!(theorem1_bound(&g, 2), by_hand);
        assert_eq!(theorem1_bound_split(&g, 2), by_hand);
    }

    #[test]
    fn simple_bound_examples() {
        let g = EULER_GAMMA;
        assert!((simple_lower_bound(3, 1, &q(2, 1)) - 2.0 * g.powi(3) / 6.0).abs() < 1e-15);
        let kf = (1..=10).map(|x| x as f64).product::<f64>();
        let expected = (10f64.ln() + g).powi(2) / 2.0 / (kf * kf);
        let got = simple_lower_bound(2, 10, &q(1, 1));
        assert!((got - expected).abs() <= 1e-12 * expected);
        assert!(got <= rational_to_f64(&volume_log(2, 10, &q(1, 1))));
        let exact = rational_to_f64(&volume_log(2, 5, &q(1, 1)));
        assert!(simple_lower_bound(2, 5, &q(1, 1)) <= exact * (1.0 + 1e-9));
    }

    #[test]
    fn a_of_kn_examples() {
        let j = 3.7;
        let a = a_of_kn(j - EULER_GAMMA, 2).unwrap();
        assert!((a - (1.0 + 0.5 / j).powi(2)).abs() < 1e-15);
        assert!((a_of_kn(1.0 - EULER_GAMMA, 2).unwrap() - 2.25).abs() < 1e-12);
        assert!((a_of_kn(1e12, 6).unwrap() - 1.0).abs() < 1e-6);
        assert!(a_of_kn(-EULER_GAMMA, 3).is_err());
        assert!(a_of_kn_majorant(-1.0, 3).is_err());
    }

    #[test]
    fn a_of_kn_decreasing_and_dominated() {
        for n in 2..9 {
            let mut prev = f64::INFINITY;
            for i in 0..400 {
                let t = 0.5 + i as f64 * 0.37;
                let a = a_of_kn(t, n).unwrap();
                assert!(a < prev, "n={n} t={t}");
                assert!(a <= a_of_kn_majorant(t, n).unwrap() * (1.0 + 1e-12));
                prev = a;
            }
        }
    }

    #[test]
    fn threshold_values() {
        assert!((threshold_logk(6, None).unwrap().round() - 41_534.0).abs() <= 1.0);
        assert!((threshold_logk(7, None).unwrap().round() - 151_711.0).abs() <= 1.0);
        assert!((threshold_logk(8, None).unwrap().round() - 920_325.0).abs() <= 1.0);
        let t5 = threshold_logk(5, Some(&q(-1, 1))).unwrap();
        assert!((t5 - (361.0 - EULER_GAMMA)).abs() < 1e-9);
        assert!(threshold_logk(4, None).is_err());
        assert_eq!(threshold_logk(3, None), Err(Error::UnsupportedDimension(3)));
        assert_eq!(corollary_coefficient(4), BigUint::from(49u32));
        assert_eq!(corollary_coefficient(5), BigUint::from(361u32));
    }

    #[test]
    fn threshold_is_sufficient() {
        for n in 6..10 {
            let t = threshold_logk(n, None).unwrap();
            let target = ((n + 1) as f64 / (2.0 * PI)).powi(n as i32);
            assert!(a_of_kn_majorant(t, n).unwrap() < target);
            assert!(a_of_kn(t, n).unwrap() < target * 1.001);
            for scale in [1.5, 3.0, 10.0] {
                assert!(a_of_kn(t * scale, n).unwrap() < target);
            }
        }
    }

    #[test]
    fn recommended_k_cases() {
        assert_eq!(recommended_k(-1.0), Some(1));
        assert_eq!(recommended_k(2f64.ln()), Some(2));
        assert_eq!(recommended_k(1000.0), None);
    }

    #[test]
    fn find_min_k_cases() {
        assert_eq!(find_min_k(&geom(3, 5, 0), 10), Some(1));
        assert_eq!(find_min_k(&geom(3, 0, -1), 50), None);
        let g = GeometryInput::new(2, q(3, 2), q(-1, 1), 1).unwrap();
        let k = find_min_k(&g, 200).expect("bound turns positive");
        assert_eq!(k, 2);
        assert!(theorem1_bound(&g, k - 1) <= Rational::zero());
        assert!(theorem1_bound(&g, k).is_positive());
    }

    #[test]
    fn table_rows() {
        let rows = table1();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 5, 6, 7, 8]);
        match &rows[0].entry {
            Table1Entry::Linear { coefficient, published_coefficient, footnote, .. } => {
                assert_eq!(coefficient, &BigUint::from(49u32));
                assert_eq!(*published_coefficient, 5);
                assert!(footnote.as_deref().unwrap().contains("prints 5"));
            }
            e => panic!("unexpected {e:?}"),
        }
        match &rows[2].entry {
            Table1Entry::Numeric { rounded, .. } => assert_eq!(*rounded, 41_534),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn geometry_warnings() {
        assert!(geom(2, 9, -1).warnings().is_empty());
        assert_eq!(geom(2, 0, 1).warnings().len(), 2);
        assert_eq!(geom(2, 9, -1).canonical_volume(), q(8, 1));
        assert!(GeometryInput::new(1, q(1, 1), q(-1, 1), 1).is_err());
        assert!(geom(2, 9, 0).boundary().is_err());
    }

    proptest! {
        #[test]
        fn two_paths_agree(n in 2usize..5, k in 1u64..7, kd in -50i64..50, neg in -50i64..50, den in 1i64..9) {
            let g = GeometryInput::new(n, q(kd, den), q(neg, den), 1).unwrap();
            prop_assert_eq!(theorem1_bound(&g, k), theorem1_bound_split(&g, k));
        }

        #[test]
        fn no_boundary_means_log_volume(n in 2usize..5, k in 1u64..7, kd in -50i64..50, den in 1i64..9) {
            let g = GeometryInput::new(n, q(kd, den), q(0, 1), 1).unwrap();
            prop_assert_eq!(theorem1_bound(&g, k), volume_log(n, k, &g.kd_n));
        }
    }
}
