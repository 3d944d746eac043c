//! Markov triples and forms, the roots of the forms, and the points of the
//! Lagrange and `m~` spectra below 3.

mod equal_value;

pub use equal_value::{
    florek_harcos_check, florek_harcos_member, tilde_m, verify_equal_value, verify_equal_value_degenerate,
    EqualValueReport, ExpansionCase, RootMember, RootName, TildeM,
};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cuts::CutsError;
use crate::qfield::{surd_to_cf, word_matrix, ContinuedFraction, QuadraticSurd};
use crate::words::{AlphabetPair, Exterior, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectraError {
    #[error("word has Markov number {got}, the form has m = {expected}")]
    MismatchedPair { expected: BigUint, got: BigUint },
    #[error(transparent)]
    Cuts(#[from] CutsError),
}

/// Move in the triple tree rooted at `(1, 2, 5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `(x, y, z) -> (x, z, 3xz - y)`.
    Left,
    /// `(x, y, z) -> (y, z, 3yz - x)`.
    Right,
}

/// A solution `x <= y <= z` of `x^2 + y^2 + z^2 = 3xyz`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MarkovTriple {
    #[serde(serialize_with = "crate::ser::display")]
    pub x: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub y: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub z: BigUint,
    /// Moves from `(1, 2, 5)`; empty for `(1, 1, 1)` and `(1, 1, 2)` as well.
    pub path: Vec<Branch>,
}

impl MarkovTriple {
    fn new(x: u32, y: u32, z: u32) -> Self {
        MarkovTriple { x: x.into(), y: y.into(), z: z.into(), path: Vec::new() }
    }

    pub fn satisfies_equation(&self) -> bool {
        let (x, y, z) = (&self.x, &self.y, &self.z);
        x * x + y * y + z * z == BigUint::from(3u32) * x * y * z
    }

    pub fn child(&self, b: Branch) -> MarkovTriple {
        let three = BigUint::from(3u32);
        let (x, y, z) = match b {
            Branch::Left => (self.x.clone(), self.z.clone(), &three * &self.x * &self.z - &self.y),
            Branch::Right => (self.y.clone(), self.z.clone(), &three * &self.y * &self.z - &self.x),
        };
        let mut path = self.path.clone();
        path.push(b);
        MarkovTriple { x, y, z, path }
    }
}

/// Every triple with `z <= bound`, sorted by `z` and then lexicographically.
pub fn enum_triples(bound: &BigUint) -> Vec<MarkovTriple> {
    let mut out: Vec<MarkovTriple> =
        [MarkovTriple::new(1, 1, 1), MarkovTriple::new(1, 1, 2)].into_iter().filter(|t| &t.z <= bound).collect();
    let mut stack = vec![MarkovTriple::new(1, 2, 5)];
    while let Some(t) = stack.pop() {
        if &t.z > bound {
            continue;
        }
        stack.push(t.child(Branch::Right));
        stack.push(t.child(Branch::Left));
        out.push(t);
    }
    out.sort_by(|s, t| (&s.z, &s.x, &s.y).cmp(&(&t.z, &t.x, &t.y)));
    out
}

/// The triples at distance at most `depth` from `(1, 2, 5)`, in depth-first order.
pub fn triple_tree(depth: usize) -> Vec<MarkovTriple> {
    let mut out = Vec::new();
    let mut stack = vec![MarkovTriple::new(1, 2, 5)];
    while let Some(t) = stack.pop() {
        if t.path.len() < depth {
            stack.push(t.child(Branch::Right));
            stack.push(t.child(Branch::Left));
        }
        out.push(t);
    }
    out
}

/// Membership in the triple tree; walks down from `(1, 2, 5)` towards `m`.
pub fn is_markov_number(m: &BigUint) -> bool {
    enum_triples(m).last().is_some_and(|t| &t.z == m)
}

/// Lower-left entry of the matrix of the digit image of `w`.
pub fn markov_number_of_word(w: &Word) -> BigUint {
    word_matrix(&w.digit_values()).map(|m| m.q).unwrap_or_else(|_| BigUint::zero())
}

/// `(q(alpha), q(beta), q(alpha beta))` for a vertex of the Christoffel tree, unsorted.
pub fn triple_of_pair(p: &AlphabetPair) -> [BigUint; 3] {
    [markov_number_of_word(&p.alpha), markov_number_of_word(&p.beta), markov_number_of_word(&p.word())]
}

/// The unsorted triple at the end of `path`, computed by Markov moves alone:
/// `Ubar` replaces the first entry and `Vbar` the second.
pub fn triple_along_path(path: &[Exterior]) -> [BigUint; 3] {
    let three = BigUint::from(3u32);
    path.iter().fold([2u32.into(), 1u32.into(), 5u32.into()], |[x, y, z], op| match op {
        Exterior::Ubar => {
            let n = &three * &y * &z - &x;
            [z, y, n]
        }
        Exterior::Vbar => {
            let n = &three * &x * &z - &y;
            [x, z, n]
        }
    })
}

/// `m F = m X^2 + (3m - 2k) XY + (l - 3k) Y^2` with `k^2 + 1 = l m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MarkovForm {
    #[serde(serialize_with = "crate::ser::display")]
    pub m: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub k: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub l: BigUint,
}

impl MarkovForm {
    /// The coefficients of `m F` on `X^2`, `XY`, `Y^2`.
    pub fn coefficients(&self) -> [BigInt; 3] {
        let (m, k, l) = (BigInt::from(self.m.clone()), BigInt::from(self.k.clone()), BigInt::from(self.l.clone()));
        [m.clone(), &m * 3 - &k * 2, l - k * 3]
    }
}

fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let (a, m) = (BigInt::from(a.clone()), BigInt::from(m.clone()));
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&m).to_biguint().expect("reduced mod m")
}

/// `k = y/x mod m`, taken from the ordering of `(x, y)` that makes it smallest.
pub fn form_from_triple(t: &MarkovTriple) -> MarkovForm {
    let m = t.z.clone();
    if m.is_one() {
        return MarkovForm { m, k: BigUint::zero(), l: BigUint::one() };
    }
    let k1 = (&t.y * mod_inverse(&t.x, &m)) % &m;
    let k2 = &m - &k1;
    let k = k1.min(k2);
    let l = (&k * &k + 1u32) / &m;
    MarkovForm { m, k, l }
}

fn sqrt_disc(m: &BigUint) -> (BigInt, BigInt) {
    let m = BigInt::from(m.clone());
    let disc = &m * &m * 9 - 4;
    (m, disc)
}

/// `theta = k/m - 3 + Delta` and `Theta = k/m - Delta` with
/// `Delta = (3 + sqrt(9 - 4/m^2))/2`; `F = (X - theta Y)(X - Theta Y)`.
pub fn roots(f: &MarkovForm) -> (QuadraticSurd, QuadraticSurd) {
    let (m, disc) = sqrt_disc(&f.m);
    let k = BigInt::from(f.k.clone());
    let a: BigInt = &k * 2 - &m * 3;
    let c: BigInt = &m * 2;
    let root = |sign: i64| QuadraticSurd::new(a.clone(), sign, c.clone(), disc.clone()).expect("positive radicand");
    (root(1), root(-1))
}

/// `sqrt(9 - 4/m^2)`.
pub fn lagrange_point(m: &BigUint) -> QuadraticSurd {
    let (m, disc) = sqrt_disc(m);
    QuadraticSurd::new(0, 1, m, disc).expect("positive radicand")
}

/// `(3 + sqrt(9 - 4/m^2))/2`.
pub fn tilde_point(m: &BigUint) -> QuadraticSurd {
    let (m, disc) = sqrt_disc(m);
    QuadraticSurd::new(&m * 3, 1, &m * 2, disc).expect("positive radicand")
}

/// Continued fractions of `theta` and of `Theta + 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootExpansions {
    pub theta: ContinuedFraction,
    pub theta_upper_plus_3: ContinuedFraction,
}

/// Root expansions read off the Christoffel word `w` of the form.
///
/// For `w = a b^{r_1} ... a b^{r_nu} = a theta' b`:
/// `theta = [0; 2, (b^{r_1}, a, ..., b^{r_nu}, a)]` and
/// `Theta + 3 = [0; 2, (theta', a, b)]`.  The letters `a` and `b` (`m = 2, 1`)
/// are expanded from the surds directly.
pub fn root_cf(f: &MarkovForm, w: &Word) -> Result<RootExpansions, SpectraError> {
    let got = markov_number_of_word(w);
    if got != f.m {
        return Err(SpectraError::MismatchedPair { expected: f.m.clone(), got });
    }
    if w.len() == 1 {
        let (theta, big) = roots(f);
        return Ok(RootExpansions {
            theta: surd_to_cf(&theta),
            theta_upper_plus_3: surd_to_cf(&(&big + &QuadraticSurd::from(3))),
        });
    }
    let two = vec![BigUint::from(2u32)];
    let rotated = w.drop_first().concat(&Word::a());
    let inner = w.slice(1..w.len() - 1).concat(&Word::new(vec![Letter::A, Letter::B]));
    Ok(RootExpansions {
        theta: ContinuedFraction::new(0, two.clone(), rotated.digit_values()).map_err(CutsError::from)?,
        theta_upper_plus_3: ContinuedFraction::new(0, two, inner.digit_values()).map_err(CutsError::from)?,
    })
}

/// One row of the spectrum table.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    #[serde(serialize_with = "crate::ser::display")]
    pub m: BigUint,
    #[serde(flatten)]
    pub triple: MarkovTriple,
    #[serde(serialize_with = "crate::ser::display")]
    pub k: BigUint,
    #[serde(serialize_with = "crate::ser::display")]
    pub l: BigUint,
    pub lagrange_point: QuadraticSurd,
    pub tilde_point: QuadraticSurd,
}

/// Rows for every triple with `z <= max_m`, in `enum_triples` order.
pub fn spectrum(max_m: &BigUint) -> Vec<SpectrumRow> {
    enum_triples(max_m)
        .into_iter()
        .map(|t| {
            let f = form_from_triple(&t);
            SpectrumRow {
                m: f.m.clone(),
                lagrange_point: lagrange_point(&f.m),
                tilde_point: tilde_point(&f.m),
                k: f.k,
                l: f.l,
                triple: t,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
