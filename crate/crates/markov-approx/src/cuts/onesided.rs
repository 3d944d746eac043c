use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use super::scan::{big, Quotients};
use super::{CutsError, Verdict};
use crate::qfield::{surd_cmp, QuadraticSurd, Rat};
use crate::words::AlphabetPair;

/// The one-sided infinite words built from a tree vertex `(alpha, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OneSidedContext {
    /// `... alpha alpha beta`.
    AlphaPowerBetaLeft,
    /// `... alpha beta alpha beta`.
    AlphaBetaPeriodicLeft,
    /// `alpha beta beta ...`.
    AlphaBetaPowerRight,
    /// `alpha beta alpha beta ...`.
    AlphaBetaPeriodicRight,
}

impl OneSidedContext {
    pub fn is_left(self) -> bool {
        matches!(self, Self::AlphaPowerBetaLeft | Self::AlphaBetaPeriodicLeft)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CutSite {
    /// Digits on the finite side of the cut: counted from the start of a right
    /// infinite word, from the end of a left infinite one.
    pub position: usize,
    pub verdict: Verdict,
    /// The cut value with the finite side taken as it stands.
    pub value: QuadraticSurd,
    /// Letter length of `theta` when the site reads `theta^T a|b theta` outward
    /// from the cut.
    pub theta_len: Option<usize>,
}

/// Matches `2, theta` on the right-word finite side (or `2, 1, 1, theta` on the
/// left-word one) against the mirrored start of the infinite side.
fn theta_form(finite: &[u8], infinite: &[u8], left: bool) -> Option<usize> {
    let (f_head, g_head): (&[u8], &[u8]) = if left { (&[2, 1, 1], &[2]) } else { (&[2], &[2, 1, 1]) };
    let theta = finite.strip_prefix(f_head)?;
    let rest = infinite.strip_prefix(g_head)?;
    (theta.len() % 2 == 0 && rest.len() >= theta.len() && rest[..theta.len()] == *theta).then_some(theta.len() / 2)
}

/// `(m00 m01 / m10 m11)` of the digits `x_i, ..., x_1`, grown by prepending.
struct Reversed {
    p: BigInt,
    p_: BigInt,
    q: BigInt,
    q_: BigInt,
}

impl Reversed {
    fn new() -> Self {
        Reversed { p: BigInt::one(), p_: BigInt::zero(), q: BigInt::zero(), q_: BigInt::one() }
    }

    fn prepend(&mut self, a: &BigInt) {
        let p = a * &self.p + &self.q;
        let p_ = a * &self.p_ + &self.q_;
        self.q = std::mem::replace(&mut self.p, p);
        self.q_ = std::mem::replace(&mut self.p_, p_);
    }

    /// `[x_i; ..., x_1, t]`.
    fn apply(&self, t: &QuadraticSurd) -> QuadraticSurd {
        let num = &(t * &QuadraticSurd::from(self.p.clone())) + &QuadraticSurd::from(self.p_.clone());
        let den = &(t * &QuadraticSurd::from(self.q.clone())) + &QuadraticSurd::from(self.q_.clone());
        &num / &den
    }

    /// `[x_i; ..., x_1]`.
    fn value(&self) -> QuadraticSurd {
        QuadraticSurd::from_rat(&Rat::new(self.p.clone(), self.q.clone()))
    }
}

/// `a^infinity = [2; 2, ...] = 1 + sqrt(2)` and `b^infinity = [1; 1, ...]`.
fn extensions() -> [QuadraticSurd; 2] {
    [QuadraticSurd::new(1, 1, 1, 2).expect("valid"), QuadraticSurd::new(1, 1, 2, 5).expect("valid")]
}

/// Classifies every cut with `1..=horizon` digits on the finite side, taking
/// the extremes `a^infinity` and `b^infinity` of the possible extensions.
pub fn one_sided_cuts(
    context: OneSidedContext,
    pair: &AlphabetPair,
    horizon: usize,
) -> Result<Vec<CutSite>, CutsError> {
    let (al, be) = (pair.alpha.digit_values(), pair.beta.digit_values());
    let needed = al.len() + be.len();
    if horizon < needed {
        return Err(CutsError::HorizonTooSmall { needed, got: horizon });
    }
    let rev = |v: &[BigUint]| v.iter().rev().cloned().collect::<Vec<_>>();
    let ab: Vec<BigUint> = al.iter().chain(be.iter()).cloned().collect();
    // Digits read from the finite end: rightward for right words, leftward
    // from the last digit for left words.
    let (pre, per) = match context {
        OneSidedContext::AlphaBetaPowerRight => (al.clone(), be.clone()),
        OneSidedContext::AlphaBetaPeriodicRight => (Vec::new(), ab.clone()),
        OneSidedContext::AlphaPowerBetaLeft => (rev(&be), rev(&al)),
        OneSidedContext::AlphaBetaPeriodicLeft => (Vec::new(), rev(&ab)),
    };
    let digit = |i: usize| -> &BigUint {
        if i < pre.len() {
            &pre[i]
        } else {
            &per[(i - pre.len()) % per.len()]
        }
    };
    let small: Vec<u8> = (0..2 * horizon + 3).map(|i| if digit(i).is_one() { 1 } else { 2 }).collect();
    let (rad, quotients) = Quotients::new(&pre, &per);
    let states: Vec<_> = quotients.take(horizon + 1).collect();
    let three = QuadraticSurd::from(3);
    let exts = extensions();
    let mut finite = Reversed::new();
    let mut out = Vec::with_capacity(horizon);
    for i in 1..=horizon {
        finite.prepend(&big(digit(i - 1)));
        let s = &states[i];
        // The infinite side: [y_{i+1}; ...] for right words, [0; y_{i+1}, ...] for left ones.
        let infinite = if context.is_left() {
            rad.surd(&-&s.p, &BigInt::one(), &s.r)
        } else {
            rad.surd(&s.p, &BigInt::one(), &s.q)
        };
        let sided = |t: Option<&QuadraticSurd>| {
            let v = t.map_or_else(|| finite.value(), |t| finite.apply(t));
            if context.is_left() {
                v
            } else {
                v.recip().expect("positive")
            }
        };
        let rest = &three - &infinite;
        let bad: Vec<bool> = exts.iter().map(|t| surd_cmp(&sided(Some(t)), &rest) == Ordering::Greater).collect();
        let verdict = match (bad[0], bad[1]) {
            (true, true) => Verdict::Bad,
            (false, false) => Verdict::Good,
            _ => Verdict::Indeterminate,
        };
        let value = sided(None).checked_add(&infinite).expect("rational plus surd");
        let theta_len = if verdict == Verdict::Indeterminate {
            let outward: Vec<u8> = small[..i].iter().rev().copied().collect();
            theta_form(&outward, &small[i..], context.is_left())
        } else {
            None
        };
        out.push(CutSite { position: i, verdict, value, theta_len });
    }
    Ok(out)
}

/// The indeterminate cuts among the first `horizon` positions.
pub fn find_indeterminate_cuts(
    context: OneSidedContext,
    pair: &AlphabetPair,
    horizon: usize,
) -> Result<Vec<CutSite>, CutsError> {
    Ok(one_sided_cuts(context, pair, horizon)?.into_iter().filter(|c| c.verdict == Verdict::Indeterminate).collect())
}
