use std::collections::BTreeSet;

use super::*;
use crate::qfield::{cf_value, surd_to_cf};
use crate::words::tree_nodes;

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn surd(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
    QuadraticSurd::new(a, b, c, d).unwrap()
}

fn triple(x: u64, y: u64, z: u64) -> MarkovTriple {
    MarkovTriple { x: big(x), y: big(y), z: big(z), path: Vec::new() }
}

fn xyz(t: &MarkovTriple) -> (u64, u64, u64) {
    let f = |v: &BigUint| u64::try_from(v).unwrap();
    (f(&t.x), f(&t.y), f(&t.z))
}

#[test]
fn triples_up_to_bounds() {
    let got: Vec<_> = enum_triples(&big(5)).iter().map(xyz).collect();
    assert_eq!(got, vec![(1, 1, 1), (1, 1, 2), (1, 2, 5)]);
    let got: Vec<_> = enum_triples(&big(34)).iter().map(xyz).collect();
    assert_eq!(got, vec![(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29), (1, 13, 34)]);
    assert!(enum_triples(&big(0)).is_empty());
}

#[test]
fn markov_numbers_below_1000() {
    let ts = enum_triples(&big(1000));
    assert!(ts.iter().all(MarkovTriple::satisfies_equation));
    let zs: Vec<u64> = ts.iter().map(|t| xyz(t).2).collect();
    assert_eq!(zs, vec![1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433, 610, 985]);
    assert!(is_markov_number(&big(433)));
    assert!(!is_markov_number(&big(434)));
}

#[test]
fn forms() {
    let f = form_from_triple(&triple(1, 1, 2));
    assert_eq!((f.m.clone(), f.k.clone(), f.l.clone()), (big(2), big(1), big(1)));
    assert_eq!(f.coefficients().map(|c| c.to_string()), ["2", "4", "-2"]);
    let f = form_from_triple(&triple(1, 2, 5));
    assert_eq!((f.k.clone(), f.l.clone()), (big(2), big(1)));
    assert_eq!(f.coefficients().map(|c| c.to_string()), ["5", "11", "-5"]);
    let f = form_from_triple(&triple(1, 1, 1));
    assert_eq!((f.k, f.l), (big(0), big(1)));
    let f = form_from_triple(&triple(1, 5, 13));
    assert_eq!((f.k, f.l), (big(5), big(2)));
}

#[test]
fn forms_are_consistent() {
    for t in enum_triples(&big(1_000_000)) {
        let f = form_from_triple(&t);
        assert_eq!(&f.k * &f.k + 1u32, &f.l * &f.m);
        assert!(&f.k * 2u32 <= f.m);
        if !f.m.is_one() {
            // k = y/x or -x/y mod m for one ordering of (x, y)
            let (x, y) = (&t.x, &t.y);
            let k = &f.k;
            let a = (k * x) % &f.m == y % &f.m || (k * y) % &f.m == x % &f.m;
            assert!(a, "{t:?}");
        }
        let (theta, cap) = roots(&f);
        let m = QuadraticSurd::from(BigInt::from(f.m.clone()));
        let [c2, c1, c0] = f.coefficients().map(QuadraticSurd::from);
        assert_eq!(&m * &(&(-&theta) - &cap), c1);
        assert_eq!(&m * &(&theta * &cap), c0);
        assert_eq!(c2, m);
        assert_eq!(cap.conjugate(), theta);
        if f.m > big(1) {
            assert!(theta > QuadraticSurd::zero() && theta < QuadraticSurd::from(1));
            assert!(cap > QuadraticSurd::from(-3) && cap < QuadraticSurd::from(-2));
        }
    }
}

#[test]
fn root_values() {
    let f = form_from_triple(&triple(1, 1, 2));
    assert_eq!(roots(&f), (surd(-1, 1, 1, 2), surd(-1, -1, 1, 2)));
    let f = form_from_triple(&triple(1, 2, 5));
    assert_eq!(roots(&f), (surd(-11, 1, 10, 221), surd(-11, -1, 10, 221)));
    let (theta, _) = roots(&form_from_triple(&triple(1, 1, 1)));
    assert_eq!(theta, surd(-3, 1, 2, 5));
}

#[test]
fn spectrum_points() {
    assert_eq!(lagrange_point(&big(1)), surd(0, 1, 1, 5));
    assert_eq!(lagrange_point(&big(2)), surd(0, 1, 1, 8));
    assert_eq!(lagrange_point(&big(5)), surd(0, 1, 5, 221));
    assert_eq!(tilde_point(&big(1)), surd(3, 1, 2, 5));
    assert_eq!(tilde_point(&big(2)), surd(3, 2, 2, 2));
    assert_eq!(tilde_point(&big(5)), surd(15, 1, 10, 221));
    let rows = spectrum(&big(5));
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2].tilde_point, surd(15, 1, 10, 221));
}

#[test]
fn spectra_are_homothetic() {
    let three = QuadraticSurd::from(3);
    let two = QuadraticSurd::from(2);
    for t in enum_triples(&big(1_000_000)) {
        assert_eq!(lagrange_point(&t.z), &(&two * &tilde_point(&t.z)) - &three);
    }
}

#[test]
fn word_markov_numbers() {
    let w = |s: &str| s.parse::<Word>().unwrap();
    assert_eq!(markov_number_of_word(&w("b")), big(1));
    assert_eq!(markov_number_of_word(&w("a")), big(2));
    assert_eq!(markov_number_of_word(&w("ab")), big(5));
    assert_eq!(markov_number_of_word(&w("abb")), big(13));
    assert_eq!(markov_number_of_word(&w("aab")), big(29));
}

#[test]
fn word_tree_matches_triple_tree() {
    let depth = 7;
    let mut from_words = BTreeSet::new();
    for p in tree_nodes(depth) {
        let t = triple_of_pair(&p);
        assert_eq!(t, triple_along_path(&p.path));
        let mut s = t.to_vec();
        s.sort();
        let mt = MarkovTriple { x: s[0].clone(), y: s[1].clone(), z: s[2].clone(), path: Vec::new() };
        assert!(mt.satisfies_equation(), "{p:?}");
        from_words.insert(s);
    }
    let from_triples: BTreeSet<_> = triple_tree(depth).into_iter().map(|t| vec![t.x, t.y, t.z]).collect();
    assert_eq!(from_words, from_triples);
}

#[test]
fn root_expansions() {
    let w = |s: &str| s.parse::<Word>().unwrap();
    let f = form_from_triple(&triple(1, 1, 2));
    let r = root_cf(&f, &w("a")).unwrap();
    assert_eq!(r.theta.to_string(), "[0; (2)]");
    assert_eq!(cf_value(&r.theta), surd(-1, 1, 1, 2));
    let f = form_from_triple(&triple(1, 2, 5));
    let r = root_cf(&f, &w("ab")).unwrap();
    // [0; 2, (1, 1, 2, 2)] with the period rotated into the preperiod
    assert_eq!(r.theta.to_string(), "[0; (2, 1, 1, 2)]");
    assert_eq!(cf_value(&r.theta), surd(-11, 1, 10, 221));
    assert_eq!(cf_value(&r.theta_upper_plus_3), surd(19, -1, 10, 221));
    assert!(matches!(root_cf(&f, &w("aab")), Err(SpectraError::MismatchedPair { .. })));
    let f = form_from_triple(&triple(1, 1, 1));
    let r = root_cf(&f, &w("b")).unwrap();
    assert_eq!(r.theta, surd_to_cf(&surd(-3, 1, 2, 5)));
}

#[test]
fn root_expansions_along_tree() {
    let three = QuadraticSurd::from(3);
    for p in tree_nodes(6) {
        let [x, y, z] = triple_of_pair(&p);
        let mut s = [x, y, z.clone()];
        s.sort();
        let t = MarkovTriple { x: s[0].clone(), y: s[1].clone(), z: s[2].clone(), path: Vec::new() };
        let f = form_from_triple(&t);
        let (theta, cap) = roots(&f);
        let r = root_cf(&f, &p.word()).unwrap();
        assert_eq!(cf_value(&r.theta), theta, "{p:?}");
        assert_eq!(cf_value(&r.theta_upper_plus_3), &cap + &three, "{p:?}");
    }
}

#[test]
fn tilde_values() {
    let cf = |s: &str| s.parse::<ContinuedFraction>().unwrap();
    let t = tilde_m(&cf("[0; (1)]")).unwrap();
    assert_eq!((t.value, t.attained_at), (surd(3, 1, 2, 5), Some(2)));
    let t = tilde_m(&cf("[0; (2)]")).unwrap();
    assert_eq!((t.value, t.attained_at), (surd(3, 2, 2, 2), Some(2)));
    let two_minus = surd_to_cf(&surd(2, -1, 1, 2));
    assert_eq!(tilde_m(&two_minus).unwrap().value, surd(3, 2, 2, 2));
}

#[test]
fn equal_values() {
    let r = verify_equal_value(&AlphabetPair::root()).unwrap();
    assert_eq!(r.expected, surd(15, 1, 10, 221));
    assert!(r.pass, "{r:?}");
    let r = verify_equal_value(&AlphabetPair::from_path(&[Exterior::Ubar])).unwrap();
    assert_eq!(r.q, big(13));
    assert_eq!(r.expected, QuadraticSurd::new(39, 1, 26, 9 * 169 - 4).unwrap());
    assert!(r.pass, "{r:?}");
    let r = verify_equal_value(&AlphabetPair::from_path(&[Exterior::Vbar])).unwrap();
    assert_eq!(r.q, big(29));
    assert!(r.pass, "{r:?}");
    for (c, want) in verify_equal_value_degenerate().unwrap() {
        assert_eq!(c.value, want, "{}", c.name);
    }
}

#[test]
fn equal_values_along_tree() {
    for p in tree_nodes(6) {
        let r = verify_equal_value(&p).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn florek_harcos() {
    let cf = |s: &str| s.parse::<ContinuedFraction>().unwrap();
    let x = surd(-1, 1, 1, 2);
    assert!(florek_harcos_check(&surd_to_cf(&x)).unwrap());
    let m = florek_harcos_member(&x, &big(10)).unwrap();
    assert_eq!((m.form.m.clone(), m.k.clone(), m.sign, m.root), (big(2), BigInt::from(0), 1, RootName::Theta));
    let x = surd(2, -1, 1, 2);
    assert!(florek_harcos_check(&surd_to_cf(&x)).unwrap());
    let m = florek_harcos_member(&x, &big(10)).unwrap();
    assert_eq!((m.k.clone(), m.sign), (BigInt::from(1), -1));
    let x = cf("[0; (1, 2)]");
    assert!(!florek_harcos_check(&x).unwrap());
    assert_eq!(florek_harcos_member(&cf_value(&x), &big(1000)), None);
}
