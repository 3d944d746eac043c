//! Solutions of `|x - p/q| < 1/(3q^2)`: exact counts, the normal forms of the
//! tails with finitely many solutions, generation of family members, and an
//! independent brute-force oracle.

mod generate;
mod tail;

pub use generate::{generate, Generated, TailSpec};
pub use tail::{classify_tail, side_sites, tail_digits, Classified, PairView, Shape, SideSite, TailForm};

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cuts::{bad_cuts, bad_cuts_up_to, BadCut, BadCuts, CutsError};
use crate::qfield::{cf_value, sign_of, ContinuedFraction, QuadraticSurd};
use crate::words::{is_balanced, Letter, Word, WordsError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("x is rational")]
    RationalInput,
    #[error("invalid prefix: {0}")]
    InvalidPrefix(String),
    #[error("side condition fails for the cut {position} digits into the tail")]
    SideConditionViolated { position: usize },
    #[error("the prefix is too short to decide the side condition")]
    HorizonTooShort,
    #[error("generated expansion has {count} solutions, more than N = {n}")]
    CountAboveN { count: String, n: usize },
    #[error("the tail {0} matches none of the periodic normal forms")]
    NoNormalForm(String),
    #[error("lambda_{n} > 3")]
    HasBadCut { n: usize },
    #[error(transparent)]
    Cuts(#[from] CutsError),
    #[error(transparent)]
    Words(#[from] WordsError),
}

/// Number of solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(usize),
    Infinite,
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n as u64),
            Count::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => write!(f, "infinite"),
        }
    }
}

/// A solution `p/q = p_{n-1}/q_{n-1}` with `lambda_n(x) > 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: usize,
    #[serde(serialize_with = "crate::ser::display")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::ser::display")]
    pub q: BigInt,
    pub lambda: QuadraticSurd,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionCount {
    pub count: Count,
    /// Every solution when the count is finite; empty otherwise.
    pub witnesses: Vec<Witness>,
    /// First index of a residue class whose cut values tend to a limit above 3.
    pub limit_class: Option<usize>,
}

impl SolutionCount {
    /// Largest index `n` with `lambda_n > 3`, or 0.
    pub fn last_index(&self) -> usize {
        self.witnesses.last().map_or(0, |w| w.n)
    }
}

fn witness(x0: &BigInt, c: BadCut) -> Witness {
    Witness { n: c.n, p: c.p + x0 * &c.q, q: c.q, lambda: c.lambda }
}

/// Exact count of the solutions, with the solutions themselves when finite.
///
/// By Legendre every solution is a convergent `p_{n-1}/q_{n-1}`, and it is one
/// exactly when `lambda_n(x) > 3`.
pub fn count_solutions(x: &ContinuedFraction) -> Result<SolutionCount, ClassifyError> {
    if x.is_rational() {
        return Err(ClassifyError::RationalInput);
    }
    Ok(match bad_cuts(x)? {
        BadCuts::Finite(cuts) => SolutionCount {
            count: Count::Finite(cuts.len()),
            witnesses: cuts.into_iter().map(|c| witness(x.x0(), c)).collect(),
            limit_class: None,
        },
        BadCuts::Infinite { limit_class } => {
            SolutionCount { count: Count::Infinite, witnesses: Vec::new(), limit_class: Some(limit_class) }
        }
    })
}

/// The solutions with `q <= qmax`, also for infinitely many solutions.
pub fn solutions_up_to(x: &ContinuedFraction, qmax: u64) -> Result<Vec<Witness>, ClassifyError> {
    if x.is_rational() {
        return Err(ClassifyError::RationalInput);
    }
    Ok(bad_cuts_up_to(x, &BigInt::from(qmax))?.into_iter().map(|c| witness(x.x0(), c)).collect())
}

/// Every reduced `p/q` with `1 <= q <= qmax` and `|x - p/q| < 1/(3q^2)`, by
/// direct search.  Does not use continued fractions beyond the value of `x`.
pub fn brute_force_count(x: &ContinuedFraction, qmax: u64) -> Vec<(BigInt, BigInt)> {
    brute_force_value(&cf_value(x), qmax)
}

/// [`brute_force_count`] for a value given as a surd.
pub fn brute_force_value(x: &QuadraticSurd, qmax: u64) -> Vec<(BigInt, BigInt)> {
    let (a, b, c, d) = (x.a(), x.b(), x.c(), x.d());
    let root_bd = |q: &BigInt| -> BigInt {
        // floor(|b| q sqrt(d)) with the sign of b, rounded down
        let s = (b * b * q * q * d).sqrt();
        if b.is_negative() {
            let exact = &s * &s == b * b * q * q * d;
            if exact {
                -s
            } else {
                -s - 1
            }
        } else {
            s
        }
    };
    let mut out = Vec::new();
    for q in 1..=qmax {
        let q = BigInt::from(q);
        // floor(x q)
        let p0 = (a * &q + root_bd(&q)).div_floor(c);
        let three_q = &q * 3;
        for p in [p0.clone(), p0 + 1] {
            if !p.gcd(&q).is_one() {
                continue;
            }
            // -c < 3q((a q - p c) + b q sqrt(d)) < c
            let u = &three_q * (a * &q - &p * c);
            let v = &three_q * b * &q;
            if sign_of(&(&u + c), &v, d) == Ordering::Greater && sign_of(&(&u - c), &v, d) == Ordering::Less {
                out.push((p, q.clone()));
            }
        }
    }
    out
}

/// Gurwood's description of the tails without bad cuts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Balance {
    /// `x_1 = 1` and `x_1 x_2 ...` is upper balanced.
    UpperBalanced,
    /// `x_1 = 2` and `2 x_1 x_2 ...` is lower balanced.
    LowerBalancedAfter2,
    Neither,
}

/// Letters of the `1`/`2` digits in equal pairs, or `None`.
pub(crate) fn decode(digits: &[u8]) -> Option<Word> {
    if digits.len() % 2 == 1 {
        return None;
    }
    digits
        .chunks(2)
        .map(|p| match p {
            [2, 2] => Some(Letter::A),
            [1, 1] => Some(Letter::B),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .map(Word::new)
}

pub(crate) fn small_digits(ds: &[BigUint]) -> Vec<u8> {
    ds.iter().map(|d| u8::try_from(d).unwrap_or(u8::MAX)).collect()
}

/// `|w_1..w_k|_b <= |w_{l+1}..w_{l+k}|_b <= |w_1..w_k|_b + 1` for every window
/// inside the finite word.
pub fn lower_balanced_prefix(w: &Word) -> bool {
    let n = w.len();
    let mut pre = vec![0usize; n + 1];
    for (i, &l) in w.letters().iter().enumerate() {
        pre[i + 1] = pre[i] + usize::from(l == Letter::B);
    }
    (1..n).all(|k| (1..=n - k).all(|l| (pre[k]..=pre[k] + 1).contains(&(pre[l + k] - pre[l]))))
}

/// Which of the two balanced forms `x_1 x_2 ...` takes, checked over
/// `|pre| + 3|per|` digits and then some.  Requires `lambda_n(x) <= 3` for all `n`.
pub fn gurwood_balance_classify(x: &ContinuedFraction) -> Result<Balance, ClassifyError> {
    match count_solutions(x)? {
        SolutionCount { count: Count::Finite(0), .. } => {}
        s => {
            return Err(ClassifyError::HasBadCut { n: s.witnesses.first().map_or(s.limit_class.unwrap_or(0), |w| w.n) })
        }
    }
    let len = 2 * (x.pre().len() + 3 * x.per().len()) + 4;
    let digits = small_digits(&x.digits(len));
    let verdict = match digits[0] {
        1 => decode(&digits)
            .filter(|w| {
                // w upper balanced iff a w^+ lower balanced
                let shifted = Word::a().concat(&w.drop_first());
                lower_balanced_prefix(&shifted)
            })
            .map(|_| Balance::UpperBalanced),
        2 => decode(&[&[2], &digits[..len - 1]].concat())
            .filter(lower_balanced_prefix)
            .map(|_| Balance::LowerBalancedAfter2),
        _ => None,
    };
    Ok(verdict.unwrap_or(Balance::Neither))
}

/// `is_balanced` on the letter image of `x_1 x_2 ...` (or `2 x_1 x_2 ...`) over
/// three periods; the word-level counterpart of [`gurwood_balance_classify`].
pub fn balanced_image(x: &ContinuedFraction) -> Option<bool> {
    let len = 2 * (x.pre().len() + 3 * x.per().len()) + 4;
    let digits = small_digits(&x.digits(len));
    let w = if digits.first() == Some(&2) { decode(&[&[2], &digits[..len - 1]].concat()) } else { decode(&digits) };
    w.map(|w| is_balanced(&w))
}

/// Count, tail form and side condition together; the `classify` command output.
#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub count: Count,
    #[serde(rename = "N")]
    pub n: usize,
    pub witnesses: Vec<Witness>,
    pub shape: Option<Shape>,
    pub pair: Option<PairView>,
    pub side_condition: Option<bool>,
    pub sites: Vec<SideSite>,
}

pub fn classify(x: &ContinuedFraction) -> Result<ClassifyReport, ClassifyError> {
    let count = count_solutions(x)?;
    let n = count.last_index();
    let (shape, pair, side_condition, sites) = match classify_tail(x)? {
        Classified::Family(t) => (Some(t.shape), Some(t.pair), Some(t.side_condition_ok), t.sites),
        Classified::NotInFamily { .. } => (None, None, None, Vec::new()),
    };
    Ok(ClassifyReport { count: count.count, n, witnesses: count.witnesses, shape, pair, side_condition, sites })
}
