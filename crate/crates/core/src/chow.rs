//! Truncated characteristic-class arithmetic in `Q[H]/(H^{n+1})` and the
//! Segre classes of weighted direct sums `E_1^(a_1) + ... + E_p^(a_p)`.
//!
//! A bundle is described by its total Segre class. Everything the volume
//! computations need lives on projective space, so a class is just the list
//! of its coefficients against powers of the hyperplane class `H`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;
use crate::error::{Error, Result, invalid};

/// A class in the degree `<= dim` part of the Chow ring of `P^dim`, with
/// rational coefficients. `coeffs[i]` multiplies `H^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TotalClass {
    coeffs: Vec<Rational>,
}

impl TotalClass {
    /// Builds a class from its leading coefficients. Missing coefficients are
    /// zero; anything above degree `dim` is dropped.
    pub fn new(dim: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut coeffs: Vec<Rational> = coeffs.into_iter().take(dim + 1).collect();
        coeffs.resize(dim + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn from_integers(dim: usize, coeffs: &[i64]) -> Self {
        Self::new(dim, coeffs.iter().map(|&c| Rational::from_integer(c.into())))
    }

    pub fn one(dim: usize) -> Self {
        Self::from_integers(dim, &[1])
    }

    /// The hyperplane class `H` (zero on `P^0`).
    pub fn hyperplane(dim: usize) -> Self {
        Self::from_integers(dim, &[0, 1])
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let dim = self.dim();
        let mut out = vec![Rational::zero(); dim + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs[..=dim - i].iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let dim = self.dim();
        let mut out: Vec<Rational> = Vec::with_capacity(dim + 1);
        out.push(inv0.clone());
        for d in 1..=dim {
            let mut acc = Rational::zero();
            for i in 1..=d {
                acc += &self.coeffs[i] * &out[d - i];
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    /// Integer power; negative exponents go through [`TotalClass::inv`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut exp = e.unsigned_abs();
        let mut acc = Self::one(self.dim());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            exp >>= 1;
            if exp > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for TotalClass {
    /// Renders e.g. `1/2 - 3/2·H + 6·H^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            let monomial = match deg {
                0 => String::new(),
                1 => "H".to_string(),
                d => format!("H^{d}"),
            };
            if deg == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&monomial)?;
            } else {
                write!(f, "{mag}·{monomial}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// One term `E^(a)` of a weighted direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSummand {
    segre: TotalClass,
    rank: u32,
    weight: u64,
}

impl WeightedSummand {
    pub fn new(segre: TotalClass, rank: u32, weight: u64) -> Result<Self> {
        if !segre.coeffs[0].is_one() {
            return Err(invalid("total Segre class must have constant term 1"));
        }
        if rank == 0 {
            return Err(invalid("rank must be at least 1"));
        }
        if weight == 0 {
            return Err(invalid("weight must be at least 1"));
        }
        Ok(Self { segre, rank, weight })
    }

    /// Same as [`WeightedSummand::new`] but takes the total Chern class.
    pub fn from_chern(chern: &TotalClass, rank: u32, weight: u64) -> Result<Self> {
        Self::new(chern.inv()?, rank, weight)
    }

    pub fn segre(&self) -> &TotalClass {
        &self.segre
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }
}

/// `s(E^(a)) = a^{-(rk E - 1)} * sum_j s_j(E) / a^j`.
pub fn segre_weighted_single(s: &WeightedSummand) -> TotalClass {
    let a = Rational::from_integer(BigInt::from(s.weight));
    let a_inv = a.recip();
    let mut factor = num_traits::pow(a_inv.clone(), (s.rank - 1) as usize);
    let mut coeffs = Vec::with_capacity(s.segre.dim() + 1);
    for c in s.segre.coeffs() {
        coeffs.push(c * &factor);
        factor *= &a_inv;
    }
    TotalClass { coeffs }
}

/// `gcd(a_1..a_p) / (a_1 ... a_p)`, the prefactor of the weighted Whitney formula.
pub fn whitney_prefactor(weights: impl IntoIterator<Item = u64>) -> Rational {
    let mut gcd = BigInt::zero();
    let mut prod = BigInt::one();
    for a in weights {
        let a = BigInt::from(a);
        gcd = gcd.gcd(&a);
        prod *= a;
    }
    Rational::new(gcd, prod)
}

/// Total Segre class of a weighted direct sum (weighted Whitney formula).
pub fn segre_weighted_sum(summands: &[WeightedSummand]) -> Result<TotalClass> {
    let prefactor = whitney_prefactor(summands.iter().map(WeightedSummand::weight));
    weighted_sum_with_prefactor(summands, &prefactor)
}

pub(crate) fn weighted_sum_with_prefactor(summands: &[WeightedSummand], prefactor: &Rational) -> Result<TotalClass> {
    let (first, rest) = summands.split_first().ok_or(Error::EmptySum)?;
    let mut acc = segre_weighted_single(first);
    for s in rest {
        acc = acc.mul(&segre_weighted_single(s))?;
    }
    Ok(acc.scale(prefactor))
}

/// `s(T_{P^n}) = (1 - H + H^2 - ...)^{n+1}`, i.e. `(1 + H)^{-(n+1)}`.
pub fn tangent_segre_pn(n: usize) -> TotalClass {
    let alternating =
        TotalClass::new(n, (0..=n).map(|i| Rational::from_integer(BigInt::from(if i % 2 == 0 { 1 } else { -1 }))));
    alternating.pow((n + 1) as i64).expect("positive power cannot fail")
}

/// Degree against `[P^n]`: reads off the top coefficient.
pub fn integrate_top(x: &TotalClass) -> Rational {
    x.coeffs[x.dim()].clone()
}

/// `(-1)^n * integral over P^n of s_n(T^(1) + T^(2) + ... + T^(k))`.
pub fn weighted_tangent_top_segre(n: usize, k: u64) -> Rational {
    weighted_tangent_top_segre_with(n, k, segre_weighted_sum)
}

pub(crate) fn weighted_tangent_top_segre_with(
    n: usize,
    k: u64,
    segre_sum: impl Fn(&[WeightedSummand]) -> Result<TotalClass>,
) -> Rational {
    let tangent = tangent_segre_pn(n);
    let summands: Vec<_> =
        (1..=k).map(|j| WeightedSummand::new(tangent.clone(), n as u32, j).expect("valid tangent summand")).collect();
    let top = integrate_top(&segre_sum(&summands).expect("non-empty, same dimension"));
    if n.is_multiple_of(2) { top } else { -top }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn tc(dim: usize, c: &[i64]) -> TotalClass {
        TotalClass::from_integers(dim, c)
    }

    #[test]
    fn mul_examples() {
        assert!(tc(1, &[1, 1]).mul(&tc(1, &[1, -1])).unwrap().is_one());
        assert_eq!(tc(1, &[1, 1]).mul(&TotalClass::one(1)).unwrap(), tc(1, &[1, 1]));
        assert_eq!(tc(1, &[1, -2]).mul(&tc(1, &[1, -1])).unwrap(), tc(1, &[1, -3]));
        assert_eq!(tc(1, &[1]).mul(&tc(2, &[1])), Err(Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn inverse_examples() {
        assert!(TotalClass::one(3).inv().unwrap().is_one());
        assert_eq!(tc(2, &[1, 1]).inv().unwrap(), tc(2, &[1, -1, 1]));
        // (1+H)^{-3} = 1 - 3H + 6H^2
        assert_eq!(tc(2, &[1, 1]).inv().unwrap().pow(3).unwrap().coeff(2), q(6, 1));
        assert_eq!(tc(2, &[0, 1]).inv(), Err(Error::NotInvertible));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(tc(1, &[1, -1]).pow(2).unwrap(), tc(1, &[1, -2]));
        assert!(tc(2, &[3, 4, 5]).pow(0).unwrap().is_one());
        assert_eq!(tc(1, &[1, 1]).pow(-2).unwrap(), tc(1, &[1, -2]));
        assert_eq!(tc(1, &[0, 1]).pow(-1), Err(Error::NotInvertible));
    }

    #[test]
    fn tangent_segre_small() {
        assert_eq!(tangent_segre_pn(1), tc(1, &[1, -2]));
        assert_eq!(tangent_segre_pn(2), tc(2, &[1, -3, 6]));
        for n in 1..7 {
            assert!(tangent_segre_pn(n).coeff(0).is_one());
        }
    }

    #[test]
    fn weighted_single_examples() {
        let s = WeightedSummand::new(tc(2, &[1, -3, 6]), 2, 1).unwrap();
        assert_eq!(segre_weighted_single(&s), tc(2, &[1, -3, 6]));
        let s = WeightedSummand::new(tc(1, &[1, -2]), 1, 2).unwrap();
        assert_eq!(segre_weighted_single(&s), tc(1, &[1, -1]));
    }

    #[test]
    fn weighted_sum_examples() {
        let t = tangent_segre_pn(1);
        let sum = segre_weighted_sum(&[
            WeightedSummand::new(t.clone(), 1, 1).unwrap(),
            WeightedSummand::new(t.clone(), 1, 2).unwrap(),
        ])
        .unwrap();
        assert_eq!(sum, TotalClass::new(1, [q(1, 2), q(-3, 2)]));
        assert_eq!(sum.to_string(), "1/2 - 3/2·H");
        assert_eq!(segre_weighted_sum(&[]), Err(Error::EmptySum));
        assert_eq!(whitney_prefactor([4, 4, 4]), q(4, 64));
        assert_eq!(whitney_prefactor([1, 1]), q(1, 1));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(integrate_top(&tc(2, &[1, -3, 6])), q(6, 1));
        assert_eq!(integrate_top(&TotalClass::one(3)), q(0, 1));
        assert_eq!(integrate_top(&tangent_segre_pn(2)), q(6, 1));
    }

    #[test]
    fn weighted_tangent_examples() {
        assert_eq!(weighted_tangent_top_segre(1, 1), q(2, 1));
        assert_eq!(weighted_tangent_top_segre(1, 2), q(3, 2));
        assert_eq!(weighted_tangent_top_segre(2, 1), q(6, 1));
        for n in 1..5 {
            for k in 1..5 {
                assert!(weighted_tangent_top_segre(n, k).is_positive());
            }
        }
    }

    #[test]
    fn summand_validation() {
        assert!(WeightedSummand::new(tc(1, &[2, 1]), 1, 1).is_err());
        assert!(WeightedSummand::new(tc(1, &[1]), 0, 1).is_err());
        assert!(WeightedSummand::new(tc(1, &[1]), 1, 0).is_err());
        let from_c = WeightedSummand::from_chern(&tc(2, &[1, 3, 3]), 2, 1).unwrap();
        assert_eq!(from_c.segre().mul(&tc(2, &[1, 3, 3])).unwrap(), TotalClass::one(2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(tc(2, &[1, -3, 6]).to_string(), "1 - 3·H + 6·H^2");
        assert_eq!(tc(2, &[0, -1, 1]).to_string(), "-H + H^2");
        assert_eq!(tc(2, &[0]).to_string(), "0");
    }

    fn class(dim: usize) -> impl Strategy<Value = TotalClass> {
        proptest::collection::vec((-20i64..20, 1i64..6), dim + 1)
            .prop_map(move |v| TotalClass::new(dim, v.into_iter().map(|(a, b)| q(a, b))))
    }

    fn unit_class(dim: usize) -> impl Strategy<Value = TotalClass> {
        class(dim).prop_map(|c| {
            let mut coeffs = c.coeffs().to_vec();
            coeffs[0] = Rational::one();
            TotalClass::new(c.dim(), coeffs)
        })
    }

    proptest! {
        #[test]
        fn ring_laws(x in class(4), y in class(4), z in class(4)) {
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
        }

        #[test]
        fn inverse_is_two_sided(x in unit_class(5)) {
            let inv = x.inv().unwrap();
            prop_assert!(x.mul(&inv).unwrap().is_one());
            prop_assert!(inv.mul(&x).unwrap().is_one());
        }

        #[test]
        fn single_summand_degreewise(s in unit_class(4), rank in 1u32..5, weight in 1u64..7) {
            let summand = WeightedSummand::new(s.clone(), rank, weight).unwrap();
            let out = segre_weighted_single(&summand);
            for k in 0..=4usize {
                let a = Rational::from_integer(BigInt::from(weight));
                let expected = s.coeff(k) / num_traits::pow(a, rank as usize - 1 + k);
                prop_assert_eq!(out.coeff(k), expected);
            }
        }

        #[test]
        fn unit_weights_give_classical_whitney(a in unit_class(3), b in unit_class(3), c in unit_class(3)) {
            let summands: Vec<_> = [&a, &b, &c]
                .iter()
                .map(|s| WeightedSummand::new((*s).clone(), 2, 1).unwrap())
                .collect();
            let plain = a.mul(&b).unwrap().mul(&c).unwrap();
            prop_assert_eq!(segre_weighted_sum(&summands).unwrap(), plain);
        }
    }
}
