use num_bigint::{BigInt, BigUint};
use num_traits::One;
use serde::Serialize;

use super::{enum_triples, form_from_triple, markov_number_of_word, roots, tilde_point, MarkovForm, SpectraError};
use crate::cuts::{lambda_at, markov_value_periodic, sup_lambda, CutsError, SupLambda};
use crate::qfield::{purely_periodic_value, ContinuedFraction, QuadraticSurd, Rat};
use crate::words::{AlphabetPair, Word};

pub type TildeM = SupLambda;

/// `m~(x) = sup_n lambda_n(x)`, exactly; `x_0` plays no role.
pub fn tilde_m(x: &ContinuedFraction) -> Result<TildeM, CutsError> {
    sup_lambda(x)
}

/// One of the four tails with the same `m~` value.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionCase {
    pub name: &'static str,
    pub x: ContinuedFraction,
    pub value: QuadraticSurd,
    pub attained_at: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EqualValueReport {
    pub alpha: String,
    pub beta: String,
    #[serde(serialize_with = "crate::ser::display")]
    pub q: BigUint,
    /// `(3 + sqrt(9 q^2 - 4)/q)/2`.
    pub expected: QuadraticSurd,
    pub cases: Vec<ExpansionCase>,
    /// `m~(u^b v (uv)^infinity)` is the cut right after `u^b v`, of value
    /// `[(a theta b)] + [0; b, theta, b]`.
    pub first_position_ok: bool,
    /// `m~(((uv)^T)^infinity)` is the cut inside the last `a` of the first period.
    pub second_position_ok: bool,
    /// The expected value equals `(3 + markov_value_periodic(uv))/2`.
    pub markov_value_ok: bool,
    pub pass: bool,
}

fn digits(w: &Word) -> Vec<BigUint> {
    w.digit_values()
}

fn rev(mut v: Vec<BigUint>) -> Vec<BigUint> {
    v.reverse();
    v
}

fn cf(pre: Vec<BigUint>, per: Vec<BigUint>) -> Result<ContinuedFraction, SpectraError> {
    Ok(ContinuedFraction::new(0, pre, per).map_err(CutsError::from)?)
}

fn case(name: &'static str, x: ContinuedFraction) -> Result<ExpansionCase, SpectraError> {
    let s = tilde_m(&x)?;
    Ok(ExpansionCase { name, x, value: s.value, attained_at: s.attained_at })
}

/// `[0; w]` for a nonempty finite digit word.
fn finite_value(w: &[BigUint]) -> QuadraticSurd {
    let m = crate::qfield::word_matrix(w).expect("nonempty positive digits");
    QuadraticSurd::from_rat(&Rat::new(BigInt::from(m.q), BigInt::from(m.p)))
}

/// Checks that the four tails `((uv)^T)^inf`, `v^T((uv)^T)^inf`, `2u^+(uv)^inf`,
/// `2u^+v(uv)^inf` all have `m~ = (3 + sqrt(9q^2 - 4)/q)/2` with `q = q(uv)`.
pub fn verify_equal_value(pair: &AlphabetPair) -> Result<EqualValueReport, SpectraError> {
    let (u, v) = (&pair.alpha, &pair.beta);
    let uv = pair.word();
    let q = markov_number_of_word(&uv);
    let expected = tilde_point(&q);
    let per = digits(&uv);
    let u_plus: Vec<BigUint> = digits(u)[1..].to_vec();
    let cases = vec![
        case("(uv)^T periodic", cf(Vec::new(), rev(per.clone()))?)?,
        case("v^T then (uv)^T periodic", cf(rev(digits(v)), rev(per.clone()))?)?,
        case("2u^+ then uv periodic", cf(u_plus.clone(), per.clone())?)?,
        case("2u^+ v then uv periodic", cf([u_plus, digits(v)].concat(), per.clone())?)?,
    ];
    let n = per.len() + 1;
    let at_first = lambda_at(&cases[1].x, n)?;
    let formula = &purely_periodic_value(&per).map_err(CutsError::from)? + &finite_value(&digits(&uv.with_first_b()));
    let first_position_ok = at_first == expected && formula == expected;
    let second_position_ok = lambda_at(&cases[0].x, per.len())? == expected;
    let mu = markov_value_periodic(&uv)?;
    let markov_value_ok = &(&mu + &QuadraticSurd::from(3)) / &QuadraticSurd::from(2) == expected;
    let pass = cases.iter().all(|c| c.value == expected) && first_position_ok && second_position_ok && markov_value_ok;
    Ok(EqualValueReport {
        alpha: u.to_string(),
        beta: v.to_string(),
        q,
        expected,
        cases,
        first_position_ok,
        second_position_ok,
        markov_value_ok,
        pass,
    })
}

/// The tails outside the tree: `b^inf`, `2 b^inf` with `m~ = (3 + sqrt5)/2`
/// and `a^inf`, `b a^inf` with `m~ = (3 + sqrt8)/2`.
pub fn verify_equal_value_degenerate() -> Result<Vec<(ExpansionCase, QuadraticSurd)>, SpectraError> {
    let d = |v: &[u64]| crate::qfield::digits_from(v);
    let one = tilde_point(&BigUint::one());
    let two = tilde_point(&BigUint::from(2u32));
    Ok(vec![
        (case("b periodic", cf(Vec::new(), d(&[1]))?)?, one.clone()),
        (case("2 then b periodic", cf(d(&[2]), d(&[1]))?)?, one),
        (case("a periodic", cf(Vec::new(), d(&[2]))?)?, two.clone()),
        (case("b then a periodic", cf(d(&[1, 1]), d(&[2]))?)?, two),
    ])
}

/// `m~(x) < 3`.
pub fn florek_harcos_check(x: &ContinuedFraction) -> Result<bool, CutsError> {
    Ok(tilde_m(x)?.value < QuadraticSurd::from(3))
}

/// How `x` is written as `k + s * root` for a Markov form root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootMember {
    pub form: MarkovForm,
    #[serde(serialize_with = "crate::ser::display")]
    pub k: BigInt,
    /// `+1` or `-1`.
    pub sign: i8,
    pub root: RootName,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootName {
    /// `theta`, in `(0, 1)` for `m >= 2`.
    Theta,
    /// `Theta`, in `(-3, -2)`.
    CapitalTheta,
}

/// Searches the forms with `m <= max_m` for `x = k +- theta` or `x = k +- Theta`.
pub fn florek_harcos_member(x: &QuadraticSurd, max_m: &BigUint) -> Option<RootMember> {
    for t in enum_triples(max_m) {
        let form = form_from_triple(&t);
        let (small, big) = roots(&form);
        for (root, name) in [(small, RootName::Theta), (big, RootName::CapitalTheta)] {
            for sign in [1i8, -1] {
                let shifted = if sign == 1 { x.checked_add(&-&root) } else { x.checked_add(&root) };
                let Some(k) = shifted.and_then(|s| s.to_rat()).filter(|r| r.is_integer()) else {
                    continue;
                };
                return Some(RootMember { form, k: k.to_integer(), sign, root: name });
            }
        }
    }
    None
}
