use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use super::tail::{side_sites, tail_digits, Shape};
use super::{count_solutions, ClassifyError, Count, SolutionCount};
use crate::cuts::cylinder;
use crate::qfield::{word_matrix, ContinuedFraction, Rat};
use crate::words::{limit_prefix, AlphabetPair, Exterior, Side};

/// The tail to append after `x_1..x_N`.
#[derive(Debug, Clone)]
pub enum TailSpec {
    Periodic {
        shape: Shape,
        pair: AlphabetPair,
    },
    /// `lim beta_n^T` (`first_digit` 1) or `lim 2 alpha_n^+` (`first_digit` 2)
    /// along `path`, truncated.
    Sturmian {
        path: Vec<Exterior>,
        first_digit: u8,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct Generated {
    /// The expansion itself; `None` for a truncated Sturmian tail.
    pub x: Option<ContinuedFraction>,
    /// The first `horizon` partial quotients `x_1, x_2, ...`.
    #[serde(serialize_with = "digits_text")]
    pub digits: Vec<BigUint>,
    pub truncated: bool,
    pub count: Option<SolutionCount>,
}

fn digits_text<S: serde::Serializer>(ds: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(ds.iter().map(ToString::to_string))
}

fn check_prefix(n: usize, prefix: &[BigUint]) -> Result<(), ClassifyError> {
    if prefix.len() != n {
        return Err(ClassifyError::InvalidPrefix(format!("expected {n} digits, got {}", prefix.len())));
    }
    if prefix.iter().any(Zero::is_zero) {
        return Err(ClassifyError::InvalidPrefix("digits must be positive".into()));
    }
    if prefix.last().is_some_and(|d| d < &BigUint::from(2u32)) {
        return Err(ClassifyError::InvalidPrefix("x_N must be at least 2".into()));
    }
    Ok(())
}

/// `[0; x_N, ..., x_1]`.
fn reversed_value(prefix: &[BigUint]) -> Rat {
    let mut r = prefix.to_vec();
    r.reverse();
    let m = word_matrix(&r).expect("nonempty positive digits");
    Rat::new(BigInt::from(m.q), BigInt::from(m.p))
}

/// Builds `[0; x_1, ..., x_N, tail]` and checks it against the side condition.
///
/// For a periodic tail the result is validated by an exact count, which is
/// at most `N` (and exactly `N` when every prefix digit is at least 3).  A
/// Sturmian tail is emitted as its first `horizon` digits; its side condition
/// is decided from the cylinder of the emitted digits.
pub fn generate(n: usize, prefix: &[BigUint], spec: &TailSpec, horizon: usize) -> Result<Generated, ClassifyError> {
    check_prefix(n, prefix)?;
    match spec {
        TailSpec::Periodic { shape, pair } => {
            let Some((pre, per)) = tail_digits(*shape, pair) else {
                return Err(ClassifyError::InvalidPrefix("a periodic tail needs a periodic shape".into()));
            };
            let tail = ContinuedFraction::new(0, pre, per).expect("positive digits");
            let constant = tail.pre().is_empty() && tail.per().len() == 1;
            if n >= 1 && !constant {
                if let Some(s) = side_sites(prefix, tail.pre(), tail.per()).into_iter().find(|s| !s.holds) {
                    return Err(ClassifyError::SideConditionViolated { position: s.n - n });
                }
            }
            let x =
                ContinuedFraction::new(0, [prefix, tail.pre()].concat(), tail.per().to_vec()).expect("positive digits");
            let count = count_solutions(&x)?;
            match count.count {
                Count::Finite(c) if c <= n => {}
                c => return Err(ClassifyError::CountAboveN { count: c.to_string(), n }),
            }
            Ok(Generated { digits: x.digits(horizon), x: Some(x), truncated: false, count: Some(count) })
        }
        TailSpec::Sturmian { path, first_digit } => {
            let need = horizon.saturating_sub(n);
            let letters = need / 2 + 2;
            let (tail, bound_digits) = match first_digit {
                1 => {
                    let beta_t = limit_prefix(path, Side::Beta, letters)?.transpose();
                    let alpha = limit_prefix(path, Side::Alpha, letters)?;
                    (beta_t.digit_values(), alpha.digit_values())
                }
                2 => {
                    let alpha = limit_prefix(path, Side::Alpha, letters)?;
                    let beta_t = limit_prefix(path, Side::Beta, letters)?.transpose();
                    (alpha.digit_values()[1..].to_vec(), [&[BigUint::from(2u32)][..], &beta_t.digit_values()].concat())
                }
                _ => return Err(ClassifyError::InvalidPrefix("first digit of a Sturmian tail is 1 or 2".into())),
            };
            if n >= 1 {
                // The bound [0; R] is irrational and lies strictly inside the cylinder of any of its prefixes.
                let (lo, hi) = cylinder(&bound_digits)?;
                let eta = reversed_value(prefix);
                if eta >= hi {
                    return Err(ClassifyError::SideConditionViolated { position: 0 });
                }
                if eta > lo {
                    return Err(ClassifyError::HorizonTooShort);
                }
            }
            let mut digits = prefix.to_vec();
            digits.extend(tail.into_iter().take(need));
            Ok(Generated { x: None, digits, truncated: true, count: None })
        }
    }
}
