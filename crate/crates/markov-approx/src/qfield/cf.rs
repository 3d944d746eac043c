use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{periodic_parts, word_matrix, QfieldError, QuadraticSurd, Rat};

/// An eventually periodic continued fraction `[x0; pre..., (per...)]`.
///
/// Values are kept canonical: the period is minimal, the preperiod is as
/// short as possible, and a finite expansion never ends in a digit 1 unless
/// it is just `[x0]`.  Two fractions are therefore equal exactly when they
/// denote the same number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    x0: BigInt,
    pre: Vec<BigUint>,
    per: Vec<BigUint>,
}

impl ContinuedFraction {
    pub fn new(x0: impl Into<BigInt>, pre: Vec<BigUint>, per: Vec<BigUint>) -> Result<Self, QfieldError> {
        if pre.iter().chain(per.iter()).any(Zero::is_zero) {
            return Err(QfieldError::ZeroDigit);
        }
        let mut cf = ContinuedFraction { x0: x0.into(), pre, per };
        cf.canonicalize();
        Ok(cf)
    }

    /// Shorthand for small digits.
    pub fn from_digits(x0: i64, pre: &[u64], per: &[u64]) -> Result<Self, QfieldError> {
        Self::new(x0, super::digits_from(pre), super::digits_from(per))
    }

    fn canonicalize(&mut self) {
        let n = self.per.len();
        if n > 0 {
            if let Some(p) = (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| self.per[i] == self.per[i - p])) {
                self.per.truncate(p);
            }
            while let (Some(a), Some(b)) = (self.pre.last(), self.per.last()) {
                if a != b {
                    break;
                }
                self.pre.pop();
                self.per.rotate_right(1);
            }
        } else if self.pre.last().is_some_and(One::is_one) {
            self.pre.pop();
            match self.pre.last_mut() {
                Some(last) => *last += 1u32,
                None => self.x0 += 1,
            }
        }
    }

    pub fn x0(&self) -> &BigInt {
        &self.x0
    }
    pub fn pre(&self) -> &[BigUint] {
        &self.pre
    }
    pub fn per(&self) -> &[BigUint] {
        &self.per
    }

    pub fn is_rational(&self) -> bool {
        self.per.is_empty()
    }

    /// The same expansion with integer part 0.
    pub fn fractional(&self) -> Self {
        ContinuedFraction { x0: BigInt::zero(), pre: self.pre.clone(), per: self.per.clone() }
    }

    /// Partial quotient `x_i` for `i >= 1`, or `None` past the end of a finite expansion.
    pub fn digit(&self, i: usize) -> Option<&BigUint> {
        assert!(i >= 1, "digits are indexed from 1");
        let i = i - 1;
        if i < self.pre.len() {
            Some(&self.pre[i])
        } else if self.per.is_empty() {
            None
        } else {
            Some(&self.per[(i - self.pre.len()) % self.per.len()])
        }
    }

    /// The first `n` partial quotients after `x0` (fewer for a short rational).
    pub fn digits(&self, n: usize) -> Vec<BigUint> {
        (1..=n).map_while(|i| self.digit(i).cloned()).collect()
    }

    /// The complete quotient `[x_n; x_{n+1}, ...]` as a fraction, for `n >= 1`.
    pub fn tail(&self, n: usize) -> Option<Self> {
        let first = self.digit(n)?.clone();
        let skip = n; // digits x_1..x_n are consumed
        let (pre, per) = if skip <= self.pre.len() {
            (self.pre[skip..].to_vec(), self.per.clone())
        } else {
            let mut per = self.per.clone();
            let shift = (skip - self.pre.len()) % per.len();
            per.rotate_left(shift);
            (Vec::new(), per)
        };
        Some(ContinuedFraction::new(BigInt::from(first), pre, per).expect("digits are positive"))
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.x0)?;
        if self.pre.is_empty() && self.per.is_empty() {
            return write!(f, "]");
        }
        write!(f, "; ")?;
        let mut parts: Vec<String> = self.pre.iter().map(ToString::to_string).collect();
        if !self.per.is_empty() {
            let per: Vec<String> = self.per.iter().map(ToString::to_string).collect();
            parts.push(format!("({})", per.join(", ")));
        }
        write!(f, "{}]", parts.join(", "))
    }
}

impl FromStr for ContinuedFraction {
    type Err = QfieldError;

    /// Parses `[x0; d1, ..., dk, (p1, ..., pm)]`; whitespace is insignificant.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let err = |k: usize, msg: &str| QfieldError::Parse {
            pos: chars.get(k).map_or(s.len(), |&(p, _)| p),
            msg: msg.to_string(),
        };
        let mut k = 0;
        let expect = |k: &mut usize, c: char| -> Result<(), QfieldError> {
            if chars.get(*k).map(|&(_, x)| x) == Some(c) {
                *k += 1;
                Ok(())
            } else {
                Err(err(*k, &format!("expected '{c}'")))
            }
        };
        let number = |k: &mut usize, signed: bool| -> Result<BigInt, QfieldError> {
            let start = *k;
            let mut text = String::new();
            if signed && chars.get(*k).map(|&(_, c)| c) == Some('-') {
                text.push('-');
                *k += 1;
            }
            while let Some(&(_, c)) = chars.get(*k) {
                if !c.is_ascii_digit() {
                    break;
                }
                text.push(c);
                *k += 1;
            }
            text.parse().map_err(|_| err(start, "expected integer"))
        };
        let digit = |k: &mut usize| -> Result<BigUint, QfieldError> {
            let start = *k;
            let n = number(k, false)?;
            match n.to_biguint() {
                Some(d) if !d.is_zero() => Ok(d),
                _ => Err(err(start, "partial quotients must be positive")),
            }
        };
        expect(&mut k, '[')?;
        let x0 = number(&mut k, true)?;
        let mut pre = Vec::new();
        let mut per = Vec::new();
        if chars.get(k).map(|&(_, c)| c) == Some(';') {
            k += 1;
            loop {
                match chars.get(k).map(|&(_, c)| c) {
                    Some('(') => {
                        k += 1;
                        per.push(digit(&mut k)?);
                        while chars.get(k).map(|&(_, c)| c) == Some(',') {
                            k += 1;
                            per.push(digit(&mut k)?);
                        }
                        expect(&mut k, ')')?;
                        break;
                    }
                    Some(']') if pre.is_empty() => break,
                    _ => pre.push(digit(&mut k)?),
                }
                if chars.get(k).map(|&(_, c)| c) == Some(',') {
                    k += 1;
                } else {
                    break;
                }
            }
        }
        expect(&mut k, ']')?;
        if k != chars.len() {
            return Err(err(k, "trailing input"));
        }
        ContinuedFraction::new(x0, pre, per)
    }
}

/// The exact value of `x`.
pub fn cf_value(x: &ContinuedFraction) -> QuadraticSurd {
    let x0 = QuadraticSurd::from_integer(x.x0.clone());
    if x.per.is_empty() {
        if x.pre.is_empty() {
            return x0;
        }
        let m = word_matrix(&x.pre).expect("nonempty");
        // [0; pre] = q/p for the matrix of pre.
        let r = Rat::new(BigInt::from(m.q), BigInt::from(m.p));
        return &x0 + &QuadraticSurd::from_rat(&r);
    }
    let (u, w, disc) = periodic_parts(&x.per).expect("nonempty");
    let gamma = QuadraticSurd::normalized(u, BigInt::one(), w, disc);
    if x.pre.is_empty() {
        return &x0 + &gamma.recip().expect("periodic value is positive");
    }
    let m = word_matrix(&x.pre).expect("nonempty");
    // [pre; gamma] = (p gamma + p') / (q gamma + q'); x = x0 + 1/that.
    let p = QuadraticSurd::from_integer(BigInt::from(m.p));
    let p_ = QuadraticSurd::from_integer(BigInt::from(m.p_));
    let q = QuadraticSurd::from_integer(BigInt::from(m.q));
    let q_ = QuadraticSurd::from_integer(BigInt::from(m.q_));
    let num = &(&p * &gamma) + &p_;
    let den = &(&q * &gamma) + &q_;
    &x0 + &(&den / &num)
}

/// The canonical continued fraction of `s`.
pub fn surd_to_cf(s: &QuadraticSurd) -> ContinuedFraction {
    let x0 = s.floor();
    if s.is_rational() {
        let mut num = s.a().clone() - &x0 * s.c();
        let mut den = s.c().clone();
        let mut pre = Vec::new();
        // value - x0 = num/den in [0, 1)
        while !num.is_zero() {
            let (q, r) = den.div_rem(&num);
            pre.push(q.to_biguint().expect("positive quotient"));
            den = num;
            num = r;
        }
        return ContinuedFraction::new(x0, pre, Vec::new()).expect("positive digits");
    }
    // 1/(s - x0) written as (P + sqrt(D))/Q with Q | D - P^2.
    let frac = s - &QuadraticSurd::from_integer(x0.clone());
    let inv = frac.recip().expect("irrational");
    let (mut p, mut d, mut q) = if inv.b().is_positive() {
        (inv.a().clone(), inv.b() * inv.b() * inv.d(), inv.c().clone())
    } else {
        (-inv.a().clone(), inv.b() * inv.b() * inv.d(), -inv.c().clone())
    };
    if !(&d - &p * &p).is_multiple_of(&q) {
        let qa = q.abs();
        p *= &qa;
        d *= &q * &q;
        q *= &qa;
    }
    let root = d.sqrt();
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut digits: Vec<BigUint> = Vec::new();
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let per = digits.split_off(start);
            return ContinuedFraction::new(x0, digits, per).expect("positive digits");
        }
        seen.insert((p.clone(), q.clone()), digits.len());
        let a: BigInt = if q.is_positive() { (&p + &root).div_floor(&q) } else { (-&p - &root - 1i32).div_floor(&-&q) };
        let next_p = &a * &q - &p;
        let next_q = (&d - &next_p * &next_p) / &q;
        digits.push(a.to_biguint().expect("partial quotients are positive"));
        p = next_p;
        q = next_q;
    }
}

/// `p_0/q_0, ..., p_{n-1}/q_{n-1}`; shorter when a rational `x` runs out of digits.
pub fn convergents(x: &ContinuedFraction, n: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n);
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let (mut p, mut q) = (x.x0.clone(), BigInt::one());
    for k in 0..n {
        if k > 0 {
            let Some(a) = x.digit(k) else { break };
            let a = BigInt::from(a.clone());
            let np = &a * &p + &p1;
            let nq = &a * &q + &q1;
            p1 = std::mem::replace(&mut p, np);
            q1 = std::mem::replace(&mut q, nq);
        }
        out.push(Rat::new(p.clone(), q.clone()));
    }
    out
}

impl serde::Serialize for ContinuedFraction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(s: &str) -> ContinuedFraction {
        s.parse().unwrap()
    }

    fn surd(a: i64, b: i64, c: i64, d: i64) -> QuadraticSurd {
        QuadraticSurd::new(a, b, c, d).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(cf("[0; 1, (1, 1)]"), cf("[0; (1)]"));
        assert_eq!(cf("[0; 2, 1]"), cf("[0; 3]"));
        assert_eq!(cf("[4; 1]"), cf("[5]"));
        assert_eq!(cf("[0; 1, 2, (3, 2)]").to_string(), "[0; 1, (2, 3)]");
        assert_eq!(cf("[ -2 ; 3 , ( 1 ) ]").to_string(), "[-2; 3, (1)]");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match "[0; 1, (0)]".parse::<ContinuedFraction>() {
            Err(QfieldError::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
        assert!("[0; 1".parse::<ContinuedFraction>().is_err());
        assert!("[0; (1), 2]".parse::<ContinuedFraction>().is_err());
    }

    #[test]
    fn values() {
        assert_eq!(cf_value(&cf("[0; (1)]")), surd(-1, 1, 2, 5));
        let phi_inv = surd(-1, 1, 2, 5);
        let expect = (&QuadraticSurd::from(3) + &phi_inv).recip().unwrap();
        assert_eq!(cf_value(&cf("[0; 3, (1)]")), expect);
        assert_eq!(cf_value(&cf("[5]")), QuadraticSurd::from(5));
        assert_eq!(cf_value(&cf("[2; 3]")), surd(7, 0, 3, 0));
    }

    #[test]
    fn expansions() {
        assert_eq!(surd_to_cf(&surd(-1, 1, 1, 2)), cf("[0; (2)]"));
        assert_eq!(surd_to_cf(&surd(3, 1, 2, 5)), cf("[2; (1)]"));
        assert_eq!(surd_to_cf(&surd(7, 0, 3, 0)), cf("[2; 3]"));
        assert_eq!(surd_to_cf(&surd(-7, 0, 3, 0)), cf("[-3; 1, 2]"));
        assert_eq!(surd_to_cf(&surd(0, -1, 1, 2)), cf("[-2; 1, 1, (2)]"));
        assert_eq!(surd_to_cf(&surd(0, 1, 1, 10_001)), cf("[100; (200)]"));
    }

    #[test]
    fn convergent_lists() {
        let r = |p: i64, q: i64| Rat::new(p.into(), q.into());
        assert_eq!(convergents(&cf("[0; (1)]"), 5), vec![r(0, 1), r(1, 1), r(1, 2), r(2, 3), r(3, 5)]);
        assert_eq!(convergents(&cf("[0; (2)]"), 3), vec![r(0, 1), r(1, 2), r(2, 5)]);
        assert_eq!(convergents(&cf("[3; 7]"), 2), vec![r(3, 1), r(22, 7)]);
        assert_eq!(convergents(&cf("[3; 7]"), 5).len(), 2);
    }

    #[test]
    fn tails() {
        let x = cf("[0; 3, 4, (1, 2)]");
        assert_eq!(x.tail(1).unwrap(), cf("[3; 4, (1, 2)]"));
        assert_eq!(x.tail(3).unwrap(), cf("[1; (2, 1)]"));
        assert_eq!(x.tail(4).unwrap(), cf("[2; (1, 2)]"));
    }
}
