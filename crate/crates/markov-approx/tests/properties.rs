use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

use markov_approx::classify::{
    balanced_image, brute_force_count, classify_tail, count_solutions, gurwood_balance_classify, Balance, Classified,
    Count,
};
use markov_approx::cuts::{cut_value, lambda_at, BiWord, DigitTail};
use markov_approx::qfield::{
    cf_value, convergents, digits_from, galois_conjugate, purely_periodic_value, surd_cmp, surd_to_cf,
    ContinuedFraction, QuadraticSurd,
};
use markov_approx::spectra::{enum_triples, form_from_triple, lagrange_point, roots, tilde_point};
use markov_approx::words::{
    christoffel, is_balanced, mechanical_prefix, stern_brocot_path, AlphabetPair, Letter, MechanicalVariant, Word,
};

fn digits(max_len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=4, 0..=max_len)
}

/// Eventually periodic expansions with small digits.
fn periodic_cf() -> impl Strategy<Value = ContinuedFraction> {
    (-3i64..=3, digits(5), prop::collection::vec(1u64..=4, 1..=6))
        .prop_map(|(x0, pre, per)| ContinuedFraction::from_digits(x0, &pre, &per).unwrap())
}

fn rat(p: &BigInt, q: &BigInt) -> QuadraticSurd {
    QuadraticSurd::from(&BigRational::new(p.clone(), q.clone()))
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len)
        .prop_map(|bs| Word::new(bs.into_iter().map(|b| if b { Letter::B } else { Letter::A }).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cf_round_trip(x in periodic_cf()) {
        prop_assert_eq!(surd_to_cf(&cf_value(&x)), x.clone());
        prop_assert_eq!(x.to_string().parse::<ContinuedFraction>().unwrap(), x);
    }

    #[test]
    fn literal_prints_canonically(x0 in -3i64..=3, pre in digits(5), per in prop::collection::vec(1u64..=4, 1..=6)) {
        let body: Vec<String> = pre.iter().map(u64::to_string).collect();
        let period: Vec<String> = per.iter().map(u64::to_string).collect();
        let mut items = body;
        items.push(format!("({})", period.join(",")));
        let text = format!("[ {x0} ;{} ]", items.join(" , "));
        let parsed: ContinuedFraction = text.parse().unwrap();
        prop_assert_eq!(parsed.to_string(), ContinuedFraction::from_digits(x0, &pre, &per).unwrap().to_string());
    }

    #[test]
    fn convergent_determinants(x in periodic_cf()) {
        let cs = convergents(&x, 14);
        for k in 1..cs.len() {
            let (p, q) = (cs[k].numer(), cs[k].denom());
            let (p1, q1) = (cs[k - 1].numer(), cs[k - 1].denom());
            let want = if k % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
            prop_assert_eq!(q * p1 - p * q1, want);
        }
    }

    #[test]
    fn error_is_one_over_lambda_q_squared(x in periodic_cf()) {
        let value = cf_value(&x);
        for (n, c) in convergents(&x, 13).iter().enumerate() {
            let (p, q) = (c.numer(), c.denom());
            let lambda = lambda_at(&x, n + 1).unwrap();
            let scaled = (&value - &rat(p, &BigInt::from(1)) * &rat(&BigInt::from(1), q)) * lambda * rat(&(q * q), &BigInt::from(1));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(scaled, QuadraticSurd::from(sign));
        }
    }

    #[test]
    fn galois_reverses_periods(w in prop::collection::vec(1u64..=5, 1..=8)) {
        let v = purely_periodic_value(&digits_from(&w)).unwrap();
        let mut r = w.clone();
        r.reverse();
        let reversed = purely_periodic_value(&digits_from(&r)).unwrap();
        prop_assert_eq!(-galois_conjugate(&v).recip().unwrap(), reversed);
    }

    #[test]
    fn rational_order(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let s = rat(&BigInt::from(a), &BigInt::from(b));
        let t = rat(&BigInt::from(c), &BigInt::from(d));
        prop_assert_eq!(surd_cmp(&s, &t), (a * d).cmp(&(c * b)));
    }

    #[test]
    fn surd_order_is_total(x in periodic_cf(), y in periodic_cf(), z in periodic_cf()) {
        let (x, y, z) = (cf_value(&x), cf_value(&y), cf_value(&z));
        prop_assert_eq!(surd_cmp(&x, &y), surd_cmp(&y, &x).reverse());
        if surd_cmp(&x, &y) != Ordering::Greater && surd_cmp(&y, &z) != Ordering::Greater {
            prop_assert_ne!(surd_cmp(&x, &z), Ordering::Greater);
        }
    }

    #[test]
    fn christoffel_matches_stern_brocot(mu in 1u64..=19, nu in 1u64..=19) {
        prop_assume!(num_integer::gcd(mu, nu) == 1 && mu + nu <= 20);
        let p = AlphabetPair::from_path(&stern_brocot_path(mu, nu).unwrap());
        prop_assert_eq!(christoffel(mu, nu).unwrap(), p.word());
    }

    #[test]
    fn mechanical_words_are_balanced(x in periodic_cf(), n in 1usize..=60, skew in prop::bool::ANY) {
        let xi = cf_value(&x.fractional());
        let variant = if skew { MechanicalVariant::Skew } else { MechanicalVariant::Floor };
        prop_assert!(is_balanced(&mechanical_prefix(&xi, variant, n).unwrap()));
    }

    #[test]
    fn christoffel_words_are_lower_balanced(mu in 1u64..=8, nu in 1u64..=8) {
        prop_assume!(num_integer::gcd(mu, nu) == 1);
        let w = christoffel(mu, nu).unwrap().repeat(4);
        prop_assert!(markov_approx::classify::lower_balanced_prefix(&w));
    }

    #[test]
    fn lambda_is_a_cut_value(x in periodic_cf(), n in 1usize..=12) {
        let mut left = x.digits(n - 1);
        left.reverse();
        let tail = x.tail(n).unwrap();
        let mut first = vec![tail.x0().to_biguint().unwrap()];
        first.extend(tail.pre().iter().cloned());
        let w = BiWord { left: DigitTail::finite(left), right: DigitTail::new(first, tail.per().to_vec()) };
        prop_assert_eq!(cut_value(&w).unwrap(), lambda_at(&x, n).unwrap());
    }

    #[test]
    fn witnesses_lie_before_the_tail(x in periodic_cf()) {
        let c = count_solutions(&x).unwrap();
        if let Classified::Family(t) = classify_tail(&x).unwrap() {
            prop_assert!(c.witnesses.iter().all(|w| w.n <= t.n), "{} witnesses {:?} N {}", x, c.witnesses, t.n);
        }
    }

    #[test]
    fn legendre_containment(x in periodic_cf()) {
        let cs = convergents(&x, 40);
        for (p, q) in brute_force_count(&x, 2000) {
            prop_assert!(cs.contains(&BigRational::new(p, q)));
        }
    }

    #[test]
    fn gurwood_agrees_with_balance(w in word(8), lead in prop::bool::ANY) {
        // tails with no bad cut: periodic a/b words, read from a 1 or a 2
        let ds: Vec<u64> = w.digits().iter().map(|&d| u64::from(d)).collect();
        let per = if lead { [&ds[1..], &ds[..1]].concat() } else { ds };
        let x = ContinuedFraction::from_digits(0, &[], &per).unwrap();
        if count_solutions(&x).unwrap().count == Count::Finite(0) {
            let g = gurwood_balance_classify(&x).unwrap();
            prop_assert_eq!(g != Balance::Neither, balanced_image(&x).unwrap_or(false), "{}", x);
        }
    }

    #[test]
    fn roots_expand_to_the_form(i in 0usize..300) {
        let ts = enum_triples(&BigUint::from(1_000_000u32));
        let f = form_from_triple(&ts[i % ts.len()]);
        let (theta, cap) = roots(&f);
        let m = QuadraticSurd::from(BigInt::from(f.m.clone()));
        let [c0, c1, c2] = f.coefficients();
        prop_assert_eq!(m.clone(), QuadraticSurd::from(c0));
        prop_assert_eq!(-(&m * &(&theta + &cap)), QuadraticSurd::from(c1));
        prop_assert_eq!(&m * &(&theta * &cap), QuadraticSurd::from(c2));
    }

    #[test]
    fn spectra_are_homothetic(i in 0usize..300) {
        let ts = enum_triples(&BigUint::from(1_000_000u32));
        let m = &ts[i % ts.len()].z;
        prop_assert_eq!(lagrange_point(m), tilde_point(m) * QuadraticSurd::from(2) - QuadraticSurd::from(3));
    }
}
