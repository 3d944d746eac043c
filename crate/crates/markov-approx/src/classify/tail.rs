use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use super::{count_solutions, decode, small_digits, ClassifyError, Count};
use crate::qfield::{cf_value, word_matrix, ContinuedFraction, QuadraticSurd, Rat};
use crate::words::{apply_exterior, path_string, stern_brocot_path, AlphabetPair, Exterior, Word};

/// The normal forms of `x_{N+1} x_{N+2} ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `(beta^T)^infinity`.
    BetaPower,
    /// `beta^T (alpha^T)^infinity`.
    BetaThenAlphaPower,
    /// `2 alpha^+ alpha^infinity`.
    TwoAlphaPlusAlphaPower,
    /// `2 alpha^+ beta^infinity`.
    TwoAlphaPlusBetaPower,
    /// `lim beta_n^T` or `lim 2 alpha_n^+`; not eventually periodic.
    Sturmian,
}

impl Shape {
    pub const PERIODIC: [Shape; 4] =
        [Shape::BetaPower, Shape::BetaThenAlphaPower, Shape::TwoAlphaPlusAlphaPower, Shape::TwoAlphaPlusBetaPower];

    pub fn name(self) -> &'static str {
        match self {
            Shape::BetaPower => "beta_power",
            Shape::BetaThenAlphaPower => "beta_then_alpha_power",
            Shape::TwoAlphaPlusAlphaPower => "two_alpha_plus_alpha_power",
            Shape::TwoAlphaPlusBetaPower => "two_alpha_plus_beta_power",
            Shape::Sturmian => "sturmian",
        }
    }
}

impl std::str::FromStr for Shape {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [
            Shape::BetaPower,
            Shape::BetaThenAlphaPower,
            Shape::TwoAlphaPlusAlphaPower,
            Shape::TwoAlphaPlusBetaPower,
            Shape::Sturmian,
        ]
        .into_iter()
        .find(|sh| sh.name() == s)
        .ok_or_else(|| format!("unknown shape {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairView {
    pub alpha: String,
    pub beta: String,
    /// Exterior operators from `(a, b)`, as a `U`/`V` string.
    pub path: String,
}

impl From<&AlphabetPair> for PairView {
    fn from(p: &AlphabetPair) -> Self {
        PairView { alpha: p.alpha.to_string(), beta: p.beta.to_string(), path: path_string(&p.path) }
    }
}

/// A factorization `theta^T b|a theta R` of the tail (or of `2` followed by the
/// tail, as `theta^T a|b theta R`) and the side condition it imposes.
#[derive(Debug, Clone, Serialize)]
pub struct SideSite {
    /// Index `n` of the cut, `lambda_n(x) = [x_n; ...] + [0; x_{n-1}, ..., x_1]`.
    pub n: usize,
    /// Letter length of `theta`.
    pub theta_len: usize,
    /// `[0; R]`, or `[0; 2, R]` when the tail starts with 2.
    pub bound: QuadraticSurd,
    /// `[0; x_N, ..., x_1] < bound`.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailForm {
    #[serde(rename = "N")]
    pub n: usize,
    pub first_digit: u8,
    pub shape: Shape,
    pub pair: PairView,
    #[serde(skip)]
    pub alphabet: AlphabetPair,
    pub side_condition_ok: bool,
    pub sites: Vec<SideSite>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classified {
    Family(TailForm),
    /// Infinitely many solutions.
    NotInFamily {
        limit_class: usize,
    },
}

/// Digits `(pre, per)` of a periodic normal form; `None` for [`Shape::Sturmian`].
pub fn tail_digits(shape: Shape, pair: &AlphabetPair) -> Option<(Vec<BigUint>, Vec<BigUint>)> {
    let rev = |w: &Word| w.transpose().digit_values();
    let two_alpha_plus = || pair.alpha.digit_values()[1..].to_vec();
    Some(match shape {
        Shape::BetaPower => (Vec::new(), rev(&pair.beta)),
        Shape::BetaThenAlphaPower => (rev(&pair.beta), rev(&pair.alpha)),
        Shape::TwoAlphaPlusAlphaPower => (two_alpha_plus(), pair.alpha.digit_values()),
        Shape::TwoAlphaPlusBetaPower => (two_alpha_plus(), pair.beta.digit_values()),
        Shape::Sturmian => return None,
    })
}

/// The vertex whose Christoffel word is `w`.
fn vertex_of_word(w: &Word) -> Option<AlphabetPair> {
    let mu = w.count_b() as u64;
    let path = stern_brocot_path(mu, w.len() as u64 - mu).ok()?;
    let p = AlphabetPair::from_path(&path);
    (p.word() == *w).then_some(p)
}

fn vertex(alpha: &Word, beta: &Word) -> Option<AlphabetPair> {
    vertex_of_word(&alpha.concat(beta)).filter(|p| p.alpha == *alpha && p.beta == *beta)
}

/// The shallowest vertex with second letter `beta`.
fn vertex_with_beta(beta: &Word) -> Option<AlphabetPair> {
    if *beta == Word::b() {
        return Some(AlphabetPair::root());
    }
    vertex_of_word(beta).map(|p| apply_exterior(Exterior::Vbar, &p))
}

/// The shallowest vertex with first letter `alpha`.
fn vertex_with_alpha(alpha: &Word) -> Option<AlphabetPair> {
    if *alpha == Word::a() {
        return Some(AlphabetPair::root());
    }
    vertex_of_word(alpha).map(|p| apply_exterior(Exterior::Ubar, &p))
}

/// The digits `pre, per, per, ...` of a canonical tail.
struct Seq<'a> {
    pre: &'a [u8],
    per: &'a [u8],
}

impl Seq<'_> {
    fn at(&self, i: usize) -> u8 {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    fn range(&self, from: usize, to: usize) -> Vec<u8> {
        (from..to).map(|i| self.at(i)).collect()
    }

    /// Length of a period of whole letters.
    fn letter_period(&self) -> usize {
        if self.per.len() % 2 == 1 {
            2 * self.per.len()
        } else {
            self.per.len()
        }
    }
}

fn rev(v: Vec<u8>) -> Vec<u8> {
    v.into_iter().rev().collect()
}

/// Matches a canonical tail against the four periodic forms, returning the
/// shallowest vertex for the first matching shape.
///
/// Each form is read off the tail directly: the period fixes `alpha` or
/// `beta` up to rotation, and the split between preperiod and period is
/// shifted until both letters form a vertex.  Shifting by a whole period
/// corresponds to `Vbar` (for `beta^T (alpha^T)^inf`) or `Ubar` (for
/// `2 alpha^+ beta^inf`), which leave the tail unchanged, so the first match
/// is the shallowest.
fn match_form(s: &Seq) -> Option<(Shape, AlphabetPair)> {
    let l = s.letter_period();
    if s.at(0) == 1 {
        if s.pre.is_empty() {
            if let Some(p) = decode(&rev(s.range(0, l))).and_then(|w| vertex_with_beta(&w)) {
                return Some((Shape::BetaPower, p));
            }
        }
        for j in 0..l + 2 {
            let k = s.pre.len() + j;
            if k % 2 == 1 {
                continue;
            }
            let beta = decode(&rev(s.range(0, k)));
            let alpha = decode(&rev(s.range(k, k + l)));
            if let Some(p) = beta.zip(alpha).and_then(|(b, a)| vertex(&a, &b)) {
                return Some((Shape::BetaThenAlphaPower, p));
            }
        }
    } else {
        if s.pre.is_empty() {
            let mut digits = s.range(0, l);
            digits.rotate_right(1);
            if let Some(p) = decode(&digits).and_then(|w| vertex_with_alpha(&w)) {
                return Some((Shape::TwoAlphaPlusAlphaPower, p));
            }
        }
        for j in 0..l + 2 {
            let k = s.pre.len() + j;
            if k % 2 == 0 {
                continue;
            }
            let alpha = decode(&[&[2], &s.range(0, k)[..]].concat());
            let beta = decode(&s.range(k, k + l));
            if let Some(p) = alpha.zip(beta).and_then(|(a, b)| vertex(&a, &b)) {
                return Some((Shape::TwoAlphaPlusBetaPower, p));
            }
        }
    }
    None
}

/// `[0; x_N, ..., x_1]` for the prefix `x_1..x_N` (`N >= 1`).
fn reversed_prefix_value(prefix: &[BigUint]) -> QuadraticSurd {
    let mut r = prefix.to_vec();
    r.reverse();
    let m = word_matrix(&r).expect("nonempty positive digits");
    QuadraticSurd::from_rat(&Rat::new(BigInt::from(m.q), BigInt::from(m.p)))
}

/// `[0; lead, seq_from, seq_from+1, ...]`.
fn tail_value(lead: &[BigUint], pre: &[BigUint], per: &[BigUint], from: usize) -> QuadraticSurd {
    let (p, q): (Vec<BigUint>, Vec<BigUint>) = if from <= pre.len() {
        (pre[from..].to_vec(), per.to_vec())
    } else {
        let mut q = per.to_vec();
        q.rotate_left((from - pre.len()) % per.len());
        (Vec::new(), q)
    };
    let cf = ContinuedFraction::new(0, [lead, &p[..]].concat(), q).expect("positive digits");
    cf_value(&cf)
}

/// Every factorization `theta^T b|a theta R` of the tail `t` (first digit 1)
/// or `theta^T a|b theta R` of `2t` (first digit 2), with `theta` up to the
/// preperiod plus three letter periods, and the side condition at each.
///
/// `prefix` is `x_1..x_N`; `tail` is `x_{N+1}...` as preperiod and period.
pub fn side_sites(prefix: &[BigUint], pre: &[BigUint], per: &[BigUint]) -> Vec<SideSite> {
    let (pre8, per8) = (small_digits(pre), small_digits(per));
    let s = Seq { pre: &pre8, per: &per8 };
    let first = s.at(0);
    // the digits the factorization is read from: t, or 2t
    let shift = usize::from(first == 2);
    let at = |i: usize| if shift == 1 && i == 0 { 2 } else { s.at(i - shift) };
    let (left, right): ([u8; 2], [u8; 2]) = if first == 1 { ([1, 1], [2, 2]) } else { ([2, 2], [1, 1]) };
    let eta = (!prefix.is_empty()).then(|| reversed_prefix_value(prefix));
    let max_theta = (pre.len() + 3 * s.letter_period()) / 2 + 2;
    let two = [BigUint::from(2u32)];
    let mut out = Vec::new();
    for k in 0..=max_theta {
        let theta: Vec<u8> = (0..2 * k).rev().map(at).collect();
        let ok = (0..2).all(|i| at(2 * k + i) == left[i] && at(2 * k + 2 + i) == right[i])
            && (0..2 * k).all(|i| at(2 * k + 4 + i) == theta[i]);
        if !ok {
            continue;
        }
        let r_start = 4 * k + 4 - shift;
        let bound = if first == 1 { tail_value(&[], pre, per, r_start) } else { tail_value(&two, pre, per, r_start) };
        // cut after theta^T b, or after theta^T and the first 2 of a
        let n = prefix.len() + if first == 1 { 2 * k + 3 } else { 2 * k + 1 };
        let holds = eta.as_ref().map_or(true, |e| *e < bound);
        out.push(SideSite { n, theta_len: k, bound, holds });
    }
    out
}

fn is_constant_letter(pre: &[BigUint], per: &[BigUint]) -> bool {
    pre.is_empty() && per.len() == 1 && u8::try_from(&per[0]).is_ok_and(|d| d <= 2)
}

/// Normal form of the tail after the last solution.
pub fn classify_tail(x: &ContinuedFraction) -> Result<Classified, ClassifyError> {
    let count = count_solutions(x)?;
    if count.count == Count::Infinite {
        return Ok(Classified::NotInFamily { limit_class: count.limit_class.unwrap_or(0) });
    }
    let n = count.last_index();
    let t = x.tail(n + 1).expect("irrational");
    let tail = ContinuedFraction::new(0, [&[t.x0().magnitude().clone()], t.pre()].concat(), t.per().to_vec())
        .expect("positive digits");
    let (pre, per) = (tail.pre(), tail.per());
    let (pre8, per8) = (small_digits(pre), small_digits(per));
    let seq = Seq { pre: &pre8, per: &per8 };
    let (shape, pair) = match_form(&seq).ok_or_else(|| ClassifyError::NoNormalForm(tail.to_string()))?;
    let prefix = x.digits(n);
    let sites = if n >= 1 && !is_constant_letter(pre, per) { side_sites(&prefix, pre, per) } else { Vec::new() };
    Ok(Classified::Family(TailForm {
        n,
        first_digit: seq.at(0),
        shape,
        pair: PairView::from(&pair),
        alphabet: pair,
        side_condition_ok: sites.iter().all(|s| s.holds),
        sites,
    }))
}
