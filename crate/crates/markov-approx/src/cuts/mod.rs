//! Exact values of cuts in eventually periodic digit sequences and their
//! good/bad/indeterminate classification.
//!
//! A cut splits a sequence into a left part read leftward and a right part
//! read rightward; its value is `[x_{+1}; x_{+2}, ...] + [0; x_{-1}, x_{-2}, ...]`.

mod onesided;
pub(crate) mod scan;

pub use onesided::{find_indeterminate_cuts, one_sided_cuts, CutSite, OneSidedContext};

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::qfield::{cf_value, word_matrix, ContinuedFraction, QfieldError, QuadraticSurd, Rat};
use crate::words::{is_balanced, Letter, Word};
use scan::{tolerance, Cut, Cuts, Exact, Quotients};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutsError {
    #[error("index {n} is beyond the {len} digits of a rational expansion")]
    IndexBeyondRational { n: usize, len: usize },
    #[error("the two sides lie in different quadratic fields")]
    IncompatibleFields,
    #[error("the right side of a cut must be infinite")]
    FiniteRight,
    #[error("expected an irrational (periodic) expansion")]
    Rational,
    #[error("horizon {got} is shorter than the {needed} digits of alpha*beta")]
    HorizonTooSmall { needed: usize, got: usize },
    #[error("empty word")]
    EmptyWord,
    #[error(transparent)]
    Qfield(#[from] QfieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Good,
    Bad,
    Indeterminate,
}

impl Verdict {
    /// Bad exactly when the value exceeds 3; equality counts as good.
    pub fn of_value(v: &QuadraticSurd) -> Verdict {
        if v > &QuadraticSurd::from(3) {
            Verdict::Bad
        } else {
            Verdict::Good
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutVerdict {
    pub kind: Verdict,
    /// Index of the first letter where the two sides disagree.
    pub witness: Option<usize>,
}

/// Digits read away from a cut: `pre` once, then `per` forever (finite if `per` is empty).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DigitTail {
    pub pre: Vec<BigUint>,
    pub per: Vec<BigUint>,
}

impl DigitTail {
    pub fn new(pre: Vec<BigUint>, per: Vec<BigUint>) -> Self {
        DigitTail { pre, per }
    }

    pub fn periodic(per: Vec<BigUint>) -> Self {
        DigitTail { pre: Vec::new(), per }
    }

    pub fn finite(pre: Vec<BigUint>) -> Self {
        DigitTail { pre, per: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.pre.is_empty() && self.per.is_empty()
    }

    /// `[y_1; y_2, ...]`.
    fn as_cf(&self) -> Result<Option<ContinuedFraction>, CutsError> {
        let cf = if let Some((first, rest)) = self.pre.split_first() {
            ContinuedFraction::new(BigInt::from(first.clone()), rest.to_vec(), self.per.clone())?
        } else if let Some(first) = self.per.first() {
            let mut per = self.per.clone();
            per.rotate_left(1);
            ContinuedFraction::new(BigInt::from(first.clone()), Vec::new(), per)?
        } else {
            return Ok(None);
        };
        Ok(Some(cf))
    }
}

/// A cut in a two-sided (or left-finite) sequence; `left` is read leftward from the cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiWord {
    pub left: DigitTail,
    pub right: DigitTail,
}

/// `lambda_n(x) = [0; x_{n-1}, ..., x_1] + [x_n; x_{n+1}, ...]`, ignoring `x_0`.
pub fn lambda_at(x: &ContinuedFraction, n: usize) -> Result<QuadraticSurd, CutsError> {
    let Some(tail) = x.tail(n.max(1)).filter(|_| n >= 1) else {
        return Err(CutsError::IndexBeyondRational { n, len: x.pre().len() });
    };
    let mut left = x.digits(n - 1);
    left.reverse();
    let eta = if left.is_empty() {
        QuadraticSurd::zero()
    } else {
        let m = word_matrix(&left)?;
        QuadraticSurd::from_rat(&Rat::new(BigInt::from(m.q), BigInt::from(m.p)))
    };
    Ok(&cf_value(&tail) + &eta)
}

/// `[x_{+1}; x_{+2}, ...] + [0; x_{-1}, x_{-2}, ...]`.
pub fn cut_value(w: &BiWord) -> Result<QuadraticSurd, CutsError> {
    if w.right.per.is_empty() {
        return Err(CutsError::FiniteRight);
    }
    let right = cf_value(&w.right.as_cf()?.expect("right side is infinite"));
    let Some(left) = w.left.as_cf()? else {
        return Ok(right);
    };
    let left = cf_value(&left).recip().expect("left digits are positive");
    right.checked_add(&left).ok_or(CutsError::IncompatibleFields)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundary {
    /// `E^T b | a F`.
    BA,
    /// `E^T a | b F`, the cut `E^T 2 | 2 b F` inside the letter `a`.
    AB,
}

/// Verdict for the cut `E^T b|aF` or `E^T a|bF` valid for every extension of `E` and `F`.
pub fn classify_word_cut(e: &Word, f: &Word, boundary: Boundary) -> CutVerdict {
    let pos = e.letters().iter().zip(f.letters()).position(|(x, y)| x != y);
    let kind = match pos {
        None => Verdict::Indeterminate,
        Some(i) => {
            let e_first = e.letters()[i] < f.letters()[i];
            match (boundary, e_first) {
                (Boundary::BA, true) | (Boundary::AB, false) => Verdict::Good,
                _ => Verdict::Bad,
            }
        }
    };
    CutVerdict { kind, witness: pos }
}

/// The largest cut value of `w^infinity` and where it is attained.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovCuts {
    pub value: QuadraticSurd,
    /// Digit offsets inside the minimal period of the cuts attaining the value.
    pub positions: Vec<usize>,
    pub period: usize,
}

/// Every cut of a purely periodic sequence equals `2 sqrt(D)/Q` for the state
/// `(P + sqrt(D))/Q` of the complete quotient right after it.
pub fn markov_cuts(w: &Word) -> Result<MarkovCuts, CutsError> {
    if w.is_empty() {
        return Err(CutsError::EmptyWord);
    }
    let per = ContinuedFraction::new(0, Vec::new(), w.digit_values())?.per().to_vec();
    let (rad, start) = scan::period_start(&per);
    let mut qs = Vec::with_capacity(per.len());
    let mut s = start;
    for a in &per {
        qs.push(s.q.clone());
        s = s.forward(&scan::big(a));
    }
    let min = qs.iter().min().expect("nonempty").clone();
    let positions = (0..qs.len()).filter(|&i| qs[i] == min).collect();
    let value = rad.surd(&BigInt::zero(), &BigInt::from(2), &min);
    Ok(MarkovCuts { value, positions, period: per.len() })
}

/// The Markov value of the bi-infinite periodic word `w^infinity`.
pub fn markov_value_periodic(w: &Word) -> Result<QuadraticSurd, CutsError> {
    Ok(markov_cuts(w)?.value)
}

/// `I(prefix)`: the numbers in `[0, 1]` whose expansion `[0; ...]` begins with `prefix`.
pub fn cylinder(prefix: &[BigUint]) -> Result<(Rat, Rat), CutsError> {
    let m = word_matrix(prefix)?;
    let end = Rat::new(BigInt::from(m.q.clone()), BigInt::from(m.p.clone()));
    let one = Rat::new(BigInt::from(&m.q + &m.q_), BigInt::from(&m.p + &m.p_));
    Ok(if end < one { (end, one) } else { (one, end) })
}

pub fn cylinder_size(prefix: &[BigUint]) -> Result<Rat, CutsError> {
    let (lo, hi) = cylinder(prefix)?;
    Ok(hi - lo)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub digit: u8,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BlockDecomposition {
    /// Runs of equal digits; all even except possibly a leading odd run of 2s.
    Valid {
        leading_odd_two: bool,
        blocks: Vec<Block>,
    },
    Failure {
        pos: usize,
    },
}

/// Splits digits over `{1, 2}` into even runs `1^e 2^f ...`, allowing a leading odd run of 2s.
pub fn even_blocks(s: &[BigUint]) -> BlockDecomposition {
    let mut small = Vec::with_capacity(s.len());
    for (pos, d) in s.iter().enumerate() {
        match u8::try_from(d) {
            Ok(x @ (1 | 2)) => small.push(x),
            _ => return BlockDecomposition::Failure { pos },
        }
    }
    let lead = small.iter().take_while(|&&d| d == 2).count();
    let start = lead % 2;
    for (i, pair) in small[start..].chunks(2).enumerate() {
        if pair.len() < 2 || pair[0] != pair[1] {
            return BlockDecomposition::Failure { pos: start + 2 * i + 1 };
        }
    }
    let mut blocks: Vec<Block> = Vec::new();
    for &d in &small {
        match blocks.last_mut() {
            Some(b) if b.digit == d => b.len += 1,
            _ => blocks.push(Block { digit: d, len: 1 }),
        }
    }
    BlockDecomposition::Valid { leading_odd_two: start == 1, blocks }
}

/// A factor `x theta^T x | y theta y` with `{x, y} = {a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BadFactor {
    /// Number of letters left of the cut.
    pub cut: usize,
    pub theta_len: usize,
}

pub fn bad_factor(w: &[Letter]) -> Option<BadFactor> {
    let n = w.len();
    for c in 1..n {
        let (x, y) = (w[c - 1], w[c]);
        if x == y {
            continue;
        }
        let mut k = 1;
        while c > k && c + k < n && w[c - 1 - k] == w[c + k] {
            k += 1;
        }
        if c > k && c + k < n && w[c - 1 - k] == x && w[c + k] == y {
            return Some(BadFactor { cut: c, theta_len: k - 1 });
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma31Report {
    pub n: usize,
    pub unbalanced: usize,
    pub extensions: usize,
    /// An unbalanced prefix extension of length `2n` without a bad factor.
    pub counterexample: Option<String>,
}

/// Every unbalanced word of length `n` followed by any `n` letters contains a bad factor.
pub fn lemma31_check(n: usize) -> Lemma31Report {
    assert!(n <= 12, "exhaustive check grows as 4^n");
    let word = |bits: u32, len: usize| -> Vec<Letter> {
        (0..len).map(|i| if bits >> i & 1 == 1 { Letter::B } else { Letter::A }).collect()
    };
    let mut report = Lemma31Report { n, unbalanced: 0, extensions: 0, counterexample: None };
    for bits in 0..1u32 << n {
        let w = word(bits, n);
        if is_balanced(&Word::new(w.clone())) {
            continue;
        }
        report.unbalanced += 1;
        for ext in 0..1u32 << n {
            let mut full = w.clone();
            full.extend(word(ext, n));
            report.extensions += 1;
            if bad_factor(&full).is_none() && report.counterexample.is_none() {
                report.counterexample = Some(Word::new(full).to_string());
            }
        }
    }
    report
}

/// `sup_n lambda_n(x)` with the index attaining it, or the residue class whose
/// limit it is.
#[derive(Debug, Clone, Serialize)]
pub struct SupLambda {
    pub value: QuadraticSurd,
    pub attained_at: Option<usize>,
    /// First index of the residue class whose cut values tend to `value`.
    pub limit_class: Option<usize>,
}

/// Exact supremum of `lambda_n(x)` over `n >= 1`.
///
/// Within a residue class `n + k*p` (past the preperiod) the left parts
/// `eta_{n+kp}` are the iterates of one Moebius contraction: monotone for even
/// `p`, two interleaved monotone runs for odd `p`.  So the class supremum is
/// the larger of its first two terms and its limit `2 sqrt(D)/Q`, and scanning
/// `|pre| + 4p` cuts covers every first term with room to spare.
pub fn sup_lambda(x: &ContinuedFraction) -> Result<SupLambda, CutsError> {
    if x.is_rational() {
        return Err(CutsError::Rational);
    }
    let (pre, per) = (x.pre(), x.per());
    let n0 = pre.len() + 4 * per.len();
    let (rad, quotients) = Quotients::new(pre, per);
    let cuts: Vec<Cut> = Cuts::new(pre, per, &rad, quotients).take(n0).collect();
    let limits: Vec<(usize, Exact, f64)> = cuts[pre.len()..pre.len() + per.len()]
        .iter()
        .map(|c| (c.n, Exact::limit(&c.state), rad.approx(&BigInt::zero(), 2, &c.state.q)))
        .collect();
    let top = cuts.iter().map(|c| c.approx).chain(limits.iter().map(|l| l.2)).fold(f64::MIN, f64::max);
    let floor = top - tolerance(top);
    let mut best: Option<(Exact, Option<usize>, Option<usize>)> = None;
    let candidates = cuts
        .iter()
        .filter(|c| c.approx >= floor)
        .map(|c| (c.exact(), Some(c.n), None))
        .chain(limits.into_iter().filter(|l| l.2 >= floor).map(|(n, e, _)| (e, None, Some(n))));
    for (e, at, class) in candidates {
        let better = match &best {
            None => true,
            Some((b, _, _)) => e.cmp(b, &rad.d) == std::cmp::Ordering::Greater,
        };
        if better {
            best = Some((e, at, class));
        }
    }
    let (e, attained_at, limit_class) = best.expect("at least one candidate");
    Ok(SupLambda { value: e.surd(&rad), attained_at, limit_class })
}

/// A convergent `p/q = p_{n-1}/q_{n-1}` of `[0; x_1, ...]` with `lambda_n > 3`.
#[derive(Debug, Clone, Serialize)]
pub struct BadCut {
    pub n: usize,
    #[serde(serialize_with = "crate::ser::display")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::ser::display")]
    pub q: BigInt,
    pub lambda: QuadraticSurd,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BadCuts {
    Finite(Vec<BadCut>),
    /// Some residue class tends to a value above 3.
    Infinite {
        limit_class: usize,
    },
}

fn is_bad(c: &Cut, d: &BigInt) -> bool {
    let tol = tolerance(3.0);
    if c.approx > 3.0 + tol {
        true
    } else if c.approx < 3.0 - tol {
        false
    } else {
        c.exact().cmp_int(3, d) == std::cmp::Ordering::Greater
    }
}

fn bad_cut(c: &Cut, rad: &scan::Radicand) -> BadCut {
    BadCut { n: c.n, p: c.pm1.clone(), q: c.qm1.clone(), lambda: c.exact().surd(rad) }
}

/// All cuts of `x` with value above 3, ignoring `x_0`.
///
/// The cut limits `2 sqrt(D)/Q_j` are irrational, so each differs from 3.  A
/// limit above 3 gives infinitely many bad cuts; otherwise every class is
/// eventually below 3, and once two consecutive members of a class are good
/// (one of each parity run) all later ones are.
pub fn bad_cuts(x: &ContinuedFraction) -> Result<BadCuts, CutsError> {
    if x.is_rational() {
        return Err(CutsError::Rational);
    }
    let (pre, per) = (x.pre(), x.per());
    let (rad, quotients) = Quotients::new(pre, per);
    let four_d = &rad.d * 4;
    let mut s = scan::period_start(per).1;
    for (j, a) in per.iter().enumerate() {
        if four_d > &s.q * &s.q * 9 {
            return Ok(BadCuts::Infinite { limit_class: pre.len() + 1 + j });
        }
        s = s.forward(&scan::big(a));
    }
    let mut good_run = vec![0u8; per.len()];
    let mut out = Vec::new();
    for c in Cuts::new(pre, per, &rad, quotients) {
        let bad = is_bad(&c, &rad.d);
        if bad {
            out.push(bad_cut(&c, &rad));
        }
        if c.n > pre.len() {
            let class = (c.n - pre.len() - 1) % per.len();
            good_run[class] = if bad { 0 } else { good_run[class].saturating_add(1) };
            if c.n >= pre.len() + 2 * per.len() && good_run.iter().all(|&g| g >= 2) {
                break;
            }
        }
    }
    Ok(BadCuts::Finite(out))
}

/// The bad cuts whose convergent denominator is at most `qmax`.
pub fn bad_cuts_up_to(x: &ContinuedFraction, qmax: &BigInt) -> Result<Vec<BadCut>, CutsError> {
    if x.is_rational() {
        return Err(CutsError::Rational);
    }
    let (pre, per) = (x.pre(), x.per());
    let (rad, quotients) = Quotients::new(pre, per);
    Ok(Cuts::new(pre, per, &rad, quotients)
        .take_while(|c| &c.qm1 <= qmax)
        .filter(|c| is_bad(c, &rad.d))
        .map(|c| bad_cut(&c, &rad))
        .collect())
}

/// `lim_k lambda_{n + k p}` for each class, keyed by the first index `n` of the class.
pub fn class_limits(x: &ContinuedFraction) -> Result<Vec<(usize, QuadraticSurd)>, CutsError> {
    if x.is_rational() {
        return Err(CutsError::Rational);
    }
    let (rad, mut s) = scan::period_start(x.per());
    let mut out = Vec::new();
    for (j, a) in x.per().iter().enumerate() {
        out.push((x.pre().len() + 1 + j, Exact::limit(&s).surd(&rad)));
        s = s.forward(&scan::big(a));
    }
    Ok(out)
}
