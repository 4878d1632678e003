//! Exact intersection-theoretic bookkeeping for weighted projective bundles and
//! effective volume bounds for Green-Griffiths jet differentials on toroidal
//! compactifications of ball quotients.
//!
//! Every class and combinatorial sum is computed with arbitrary-precision
//! rationals. Floating point only enters where transcendental constants do
//! (`log k`, the Euler-Mascheroni constant, `pi`), in [`bounds`].

pub mod bounds;
pub mod chow;
pub mod cli;
pub mod combinatorics;
mod error;
pub mod jets;
pub mod oracles;
pub mod verify;

pub use error::{Error, Result};

/// The universal exact scalar.
pub type Rational = num_rational::BigRational;

pub use bounds::{GeometryInput, a_of_kn, theorem1_bound, threshold_logk, volume_log};
pub use chow::{TotalClass, WeightedSummand, segre_weighted_sum, weighted_tangent_top_segre};
pub use combinatorics::{harmonic, sum_nondecreasing, sum_skn};
pub use jets::{BoundaryData, boundary_coeff, h0_gr_q, rank_gr_e};
pub use oracles::{Value, VerificationReport};

/// Best-effort conversion of an exact rational to binary64.
///
/// Works for numerators and denominators far outside the `f64` range by
/// shifting both to 64 significant bits first.
pub fn rational_to_f64(q: &Rational) -> f64 {
    ratio_to_f64(q.numer(), q.denom())
}

pub(crate) fn ratio_to_f64(num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> f64 {
    use num_traits::{Signed, ToPrimitive, Zero};
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.abs(), den.abs());
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (&num >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
    let d = (&den >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
    let exp = shift_n - shift_d;
    let mut value = n / d;
    // Apply the binary exponent in bounded steps to avoid intermediate overflow.
    let mut e = exp;
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        value *= 2f64.powi(step as i32);
        e -= step;
    }
    if negative { -value } else { value }
}
