//! End-to-end acceptance run: one PASS/FAIL line per criterion, all exact.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use markov_approx::classify::{brute_force_count, count_solutions, generate, solutions_up_to, Count, Shape, TailSpec};
use markov_approx::qfield::{digits_from, surd_to_cf, ContinuedFraction, QuadraticSurd};
use markov_approx::spectra::tilde_m;
use markov_approx::sweeps::{self, SweepReport};
use markov_approx::words::{mechanical_path, subword_complexity, tree_nodes, Exterior};

struct Outcome {
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

fn timed(limit_secs: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    Outcome { pass, detail, elapsed: start.elapsed(), limit: Duration::from_secs(limit_secs) }
}

fn summary(reports: &[SweepReport]) -> (bool, String) {
    let pass = reports.iter().all(|r| r.pass);
    let text = reports
        .iter()
        .map(|r| {
            let mut s = format!("{}<={}: {}/{} ok", r.name, r.bound, r.checked - r.failed, r.checked);
            if let Some(f) = r.failures.first() {
                s.push_str(&format!(" (first failure {f})"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    (pass, text)
}

fn surd(s: &str) -> QuadraticSurd {
    s.parse().unwrap()
}

fn cf(s: &str) -> ContinuedFraction {
    s.parse().unwrap()
}

fn criterion_1() -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_markov-approx"))
        .args(["spectrum", "--below", "3", "--max-m", "5", "--csv"])
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let expected = [
        ("1", "(0 + 1*sqrt(5))/1", "(3 + 1*sqrt(5))/2"),
        ("2", "(0 + 1*sqrt(8))/1", "(3 + 1*sqrt(8))/2"),
        ("5", "(0 + 1*sqrt(221))/5", "(15 + 1*sqrt(221))/10"),
    ];
    let ok = out.status.success()
        && rows.len() == expected.len()
        && rows
            .iter()
            .zip(expected)
            .all(|(r, (m, lp, tp))| r[0] == m && surd(r[6]) == surd(lp) && surd(r[7]) == surd(tp));
    (ok, format!("{} rows", rows.len()))
}

fn criterion_2() -> (bool, String) {
    let golden = tilde_m(&cf("[0; (1)]")).unwrap().value;
    let silver = tilde_m(&cf("[0; (2)]")).unwrap().value;
    let two_minus_root2 = surd_to_cf(&surd("(2 - 1*sqrt(2))/1"));
    let other = tilde_m(&two_minus_root2).unwrap().value;
    let ok = golden == surd("(3 + 1*sqrt(5))/2") && silver == surd("(3 + 2*sqrt(2))/2") && other == silver;
    (ok, format!("{golden}, {silver}, 2 - sqrt(2) = {two_minus_root2} gives {other}"))
}

/// A seeded corpus of eventually periodic expansions.
fn corpus() -> Vec<ContinuedFraction> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_231_107);
    (0..200)
        .map(|_| {
            let pre: Vec<u64> = (0..rng.gen_range(0..=5)).map(|_| rng.gen_range(1..=4)).collect();
            let per: Vec<u64> = (0..rng.gen_range(1..=6)).map(|_| rng.gen_range(1..=4)).collect();
            ContinuedFraction::from_digits(0, &pre, &per).unwrap()
        })
        .collect()
}

fn criterion_6() -> (bool, String) {
    const QMAX: u64 = 10_000;
    let mut bad = Vec::new();
    let (mut finite, mut infinite) = (0, 0);
    for x in corpus() {
        let exact: BTreeSet<(BigInt, BigInt)> =
            solutions_up_to(&x, QMAX).unwrap().into_iter().map(|w| (w.p, w.q)).collect();
        let brute: BTreeSet<(BigInt, BigInt)> = brute_force_count(&x, QMAX).into_iter().collect();
        let count = count_solutions(&x).unwrap();
        let consistent = match count.count {
            // every solution is a witness, and the witnesses below QMAX are all found
            Count::Finite(n) => {
                finite += 1;
                let listed: BTreeSet<_> = count
                    .witnesses
                    .iter()
                    .filter(|w| w.q <= BigInt::from(QMAX))
                    .map(|w| (w.p.clone(), w.q.clone()))
                    .collect();
                listed == brute && brute.len() <= n
            }
            // the oracle finds solutions past the preperiod, in the recurring class
            Count::Infinite => {
                infinite += 1;
                let class = count.limit_class.expect("infinite counts name a class");
                let late = solutions_up_to(&x, QMAX).unwrap().into_iter().filter(|w| w.n >= class).count();
                late > 0 && !brute.is_empty()
            }
        };
        if exact != brute || !consistent {
            bad.push(x.to_string());
        }
    }
    (bad.is_empty(), format!("{finite} finite, {infinite} infinite, mismatches {bad:?}"))
}

fn criterion_7() -> (bool, String) {
    let trip = sweeps::round_trip(6, 3);
    // digits >= 3 in the prefix: exactly N solutions
    let mut checked = 0;
    let mut bad = Vec::new();
    for p in tree_nodes(3) {
        for shape in Shape::PERIODIC {
            for n in 0..=5usize {
                for offset in 0..3u64 {
                    let prefix: Vec<u64> = (0..n as u64).map(|i| 3 + (i * 7 + offset) % 4).collect();
                    let spec = TailSpec::Periodic { shape, pair: p.clone() };
                    checked += 1;
                    match generate(n, &digits_from(&prefix), &spec, 0) {
                        Ok(g) if g.count.as_ref().map(|c| c.count) == Some(Count::Finite(n)) => {}
                        other => {
                            bad.push(format!("{shape:?} {prefix:?}: {:?}", other.map(|g| g.count.map(|c| c.count))))
                        }
                    }
                }
            }
        }
    }
    let (pass, text) = summary(&[trip]);
    (pass && bad.is_empty(), format!("{text}; count = N for {checked} generated inputs, failures {bad:?}"))
}

fn criterion_8() -> (bool, String) {
    summary(&[
        sweeps::lemma31(10),
        sweeps::relbtrenorm(12),
        sweeps::identities(10),
        sweeps::balanced_markov(8),
        sweeps::lexicographic(10),
        sweeps::indeterminate_counts(8),
        sweeps::lemma21(8),
    ])
}

fn criterion_9() -> (bool, String) {
    let golden = mechanical_path(&digits_from(&[1; 16]));
    let silver = mechanical_path(&digits_from(&[2; 12]));
    let mixed = mechanical_path(&digits_from(&[1, 1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 2, 1, 1, 2]));
    let cases: [(&str, Vec<Exterior>, u8); 3] = [("golden", golden, 1), ("silver", silver, 2), ("mixed", mixed, 2)];
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, path, first) in cases {
        let g = generate(0, &[], &TailSpec::Sturmian { path, first_digit: first }, 600).unwrap();
        let digits: Vec<u8> = g.digits.iter().map(|d| u8::try_from(d).unwrap()).collect();
        let ok = digits.len() >= 500 && (4..=20).all(|n| subword_complexity(&digits, n) == n + 3);
        pass &= ok;
        notes.push(format!("{name}: {} digits, p(4..=20) = n+3: {ok}", digits.len()));
    }
    (pass, notes.join("; "))
}

#[test]
fn acceptance() {
    let checks: Vec<(u32, Outcome)> = vec![
        (1, timed(1, criterion_1)),
        (2, timed(1, criterion_2)),
        (3, timed(300, || summary(&[sweeps::equal_value(12)]))),
        (4, timed(120, || summary(&[sweeps::markov_cut_positions(10)]))),
        (5, timed(60, || summary(&[sweeps::triples(10)]))),
        (6, timed(600, criterion_6)),
        (7, timed(300, criterion_7)),
        (8, timed(300 * 7, criterion_8)),
        (9, timed(60, criterion_9)),
    ];
    let mut all = true;
    for (n, o) in &checks {
        let in_time = o.elapsed <= o.limit;
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "criterion {n}: {} [{:.2?} of {:?}] {}",
            if pass { "PASS" } else { "FAIL" },
            o.elapsed,
            o.limit,
            o.detail
        );
    }
    assert!(all, "some acceptance criteria failed");
}
