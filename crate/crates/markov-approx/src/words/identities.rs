use serde::Serialize;

use super::{apply_inner, AlphabetPair, Inner, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

/// Per-identity results for one tree vertex.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub alpha: String,
    pub beta: String,
    pub results: Vec<(String, Outcome)>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|(_, o)| *o != Outcome::Fail)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.results.iter().filter(|(_, o)| *o == Outcome::Fail).map(|(n, _)| n.as_str()).collect()
    }
}

fn check(b: bool) -> Outcome {
    if b {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

/// `w = a theta b` with `theta` a palindrome.
fn central_palindrome(w: &Word) -> bool {
    w.len() >= 2
        && w.first() == Some(Letter::A)
        && w.last() == Some(Letter::B)
        && w.slice(1..w.len() - 1).is_palindrome()
}

/// `w = a theta' a b theta' b` with `theta'` a palindrome.
fn doubled_palindrome(w: &Word) -> bool {
    let n = w.len();
    if n < 4 || n % 2 == 1 || w.first() != Some(Letter::A) || w.last() != Some(Letter::B) {
        return false;
    }
    let inner = w.slice(1..n - 1);
    let t = (inner.len() - 2) / 2;
    let theta = inner.slice(0..t);
    inner.letters()[t] == Letter::A
        && inner.letters()[t + 1] == Letter::B
        && inner.slice(t + 2..inner.len()) == theta
        && theta.is_palindrome()
}

/// Checks the word identities satisfied by every tree vertex.
pub fn verify_identities(p: &AlphabetPair) -> IdentityReport {
    let (al, be) = (&p.alpha, &p.beta);
    let ab = al.concat(be);
    let mut results = vec![
        ("ab=b_a.a^b".to_string(), check(ab == be.with_last_a().concat(&al.with_first_b()))),
        ("a^b.b=b^T.a^b".to_string(), check(al.with_first_b().concat(be) == be.transpose().concat(&al.with_first_b()))),
        ("a.b_a=b_a.a^T".to_string(), check(al.concat(&be.with_last_a()) == be.with_last_a().concat(&al.transpose()))),
        ("(a^b)_a=a^T".to_string(), check(al.with_first_b().with_last_a() == al.transpose())),
    ];
    // For beta = b the letter swaps collide on the single letter.
    let beta_swap =
        if be.len() < 2 { Outcome::Skipped } else { check(be.with_first_b().with_last_a() == be.transpose()) };
    results.push(("(b^b)_a=b^T".to_string(), beta_swap));
    results.push(("ab=a.theta.b".to_string(), check(central_palindrome(&ab))));
    results.push(("aabb=a.t.ab.t.b".to_string(), check(doubled_palindrome(&al.concat(al).concat(be).concat(be)))));
    for (name, w) in [("alpha", al), ("beta", be)] {
        let u_lhs = Word::b().concat(&apply_inner(Inner::U, &w.transpose()));
        let u_rhs = apply_inner(Inner::U, w).transpose().concat(&Word::b());
        results.push((format!("bU(w^T)=U(w)^Tb[{name}]"), check(u_lhs == u_rhs)));
        let v_lhs = apply_inner(Inner::V, &w.transpose()).concat(&Word::a());
        let v_rhs = Word::a().concat(&apply_inner(Inner::V, w).transpose());
        results.push((format!("V(w^T)a=aV(w)^T[{name}]"), check(v_lhs == v_rhs)));
    }
    IdentityReport { alpha: al.to_string(), beta: be.to_string(), results }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{tree_nodes, Exterior};

    #[test]
    fn small_vertices() {
        for path in [vec![Exterior::Ubar], vec![Exterior::Vbar], vec![]] {
            let p = AlphabetPair::from_path(&path);
            let r = verify_identities(&p);
            assert!(r.all_pass(), "{} {}: {:?}", p.alpha, p.beta, r.failures());
        }
    }

    #[test]
    fn tree_sweep() {
        for p in tree_nodes(7) {
            let r = verify_identities(&p);
            assert!(r.all_pass(), "{} {}: {:?}", p.alpha, p.beta, r.failures());
        }
    }
}
