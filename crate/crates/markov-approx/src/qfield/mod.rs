//! Exact arithmetic over the rationals and real quadratic fields, and the
//! conversions between eventually periodic continued fractions and surds.

mod cf;
mod surd;

pub use cf::{cf_value, convergents, surd_to_cf, ContinuedFraction};
pub use surd::{galois_conjugate, surd_cmp, QuadraticSurd};
pub(crate) use surd::{sign_of, square_part};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number; always reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QfieldError {
    #[error("empty digit word")]
    EmptyWord,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative radicand")]
    NegativeRadicand,
    #[error("partial quotients must be positive")]
    ZeroDigit,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A 2x2 matrix `(p p' / q q')` with non-negative entries and determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub p: BigUint,
    pub p_: BigUint,
    pub q: BigUint,
    pub q_: BigUint,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 { p: BigUint::one(), p_: BigUint::zero(), q: BigUint::zero(), q_: BigUint::one() }
    }

    /// Right multiplication by the elementary matrix `(a 1 / 1 0)`.
    pub fn push_digit(&mut self, a: &BigUint) {
        let p = &self.p * a + &self.p_;
        let q = &self.q * a + &self.q_;
        self.p_ = std::mem::replace(&mut self.p, p);
        self.q_ = std::mem::replace(&mut self.q, q);
    }

    pub fn trace(&self) -> BigUint {
        &self.p + &self.q_
    }

    /// Determinant as a signed integer (always ±1 for products of elementary matrices).
    pub fn det(&self) -> BigInt {
        BigInt::from(&self.p * &self.q_) - BigInt::from(&self.p_ * &self.q)
    }
}

/// The product of the elementary matrices `(a_i 1 / 1 0)` over `digits`.
pub fn word_matrix(digits: &[BigUint]) -> Result<Mat2, QfieldError> {
    if digits.is_empty() {
        return Err(QfieldError::EmptyWord);
    }
    let mut m = Mat2::identity();
    for a in digits {
        if a.is_zero() {
            return Err(QfieldError::ZeroDigit);
        }
        m.push_digit(a);
    }
    Ok(m)
}

/// The raw `(u, w, disc)` with `[period; period; ...] = (u + sqrt(disc))/w`,
/// `w > 0` and `w | disc - u^2`, before any square factor is removed.
pub(crate) fn periodic_parts(period: &[BigUint]) -> Result<(BigInt, BigInt, BigInt), QfieldError> {
    let m = word_matrix(period)?;
    let tr = BigInt::from(m.trace());
    let sign = if period.len() % 2 == 1 { 4 } else { -4 };
    let disc = &tr * &tr + BigInt::from(sign);
    let u = BigInt::from(m.p.clone()) - BigInt::from(m.q_.clone());
    let w = BigInt::from(m.q.clone()) * 2;
    Ok((u, w, disc))
}

/// The value of the purely periodic continued fraction `[period; period; ...]`.
pub fn purely_periodic_value(period: &[BigUint]) -> Result<QuadraticSurd, QfieldError> {
    let (u, w, disc) = periodic_parts(period)?;
    Ok(QuadraticSurd::normalized(u, BigInt::one(), w, disc))
}

/// Converts small digits; convenient for literals.
pub fn digits_from(ds: &[u64]) -> Vec<BigUint> {
    ds.iter().map(|&d| BigUint::from(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u32, p_: u32, q: u32, q_: u32) -> Mat2 {
        Mat2 { p: p.into(), p_: p_.into(), q: q.into(), q_: q_.into() }
    }

    #[test]
    fn word_matrices() {
        assert_eq!(word_matrix(&digits_from(&[2, 2, 1, 1])).unwrap(), m(12, 7, 5, 3));
        assert_eq!(word_matrix(&digits_from(&[1])).unwrap(), m(1, 1, 1, 0));
        assert_eq!(word_matrix(&digits_from(&[1, 1])).unwrap(), m(2, 1, 1, 1));
        assert_eq!(word_matrix(&[]), Err(QfieldError::EmptyWord));
    }

    #[test]
    fn periodic_values() {
        let v = |ds: &[u64]| purely_periodic_value(&digits_from(ds)).unwrap();
        assert_eq!(v(&[1]), QuadraticSurd::new(1, 1, 2, 5).unwrap());
        assert_eq!(v(&[2]), QuadraticSurd::new(1, 1, 1, 2).unwrap());
        // p - q' = 12 - 3 for the matrix (12 7 / 5 3).
        assert_eq!(v(&[2, 2, 1, 1]), QuadraticSurd::new(9, 1, 10, 221).unwrap());
    }

    #[test]
    fn galois_reverses_the_period() {
        let w = digits_from(&[2, 2, 1, 1]);
        let mut r = w.clone();
        r.reverse();
        let g = purely_periodic_value(&w).unwrap();
        let lhs = -galois_conjugate(&g).recip().unwrap();
        assert_eq!(lhs, purely_periodic_value(&r).unwrap());
    }
}
