use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{QfieldError, Rat};

/// Largest trial divisor used when stripping square factors from a radicand.
const TRIAL_LIMIT: u32 = 20_000;

/// An exact element `(a + b*sqrt(d))/c` of a real quadratic field.
///
/// The representation is normalized: `c > 0`, `gcd(a, b, c) = 1`, rationals
/// carry `b = d = 0`, and irrationals carry a non-square `d >= 2` with every
/// square factor removed that trial division can find (all of them whenever
/// `d` is below about `8 * 10^12`).  Equality and ordering compare values, so
/// two representations of the same number in different radicands still
/// compare equal.
#[derive(Clone, Debug)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

fn primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if sieve[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        out
    })
}

/// Splits `d >= 1` as `s^2 * r`, removing every square factor found by trial
/// division up to `min(cbrt(r), TRIAL_LIMIT)` plus a final perfect-square test.
pub(crate) fn square_part(d: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut kept = BigUint::one();
    let mut r = d.clone();
    for &p in primes() {
        if BigUint::from(p).pow(3) > r {
            break;
        }
        let mut count = 0u32;
        while (&r % p).is_zero() {
            r /= p;
            count += 1;
        }
        s *= BigUint::from(p).pow(count / 2);
        if count % 2 == 1 {
            kept *= p;
        }
    }
    let t = r.sqrt();
    if &t * &t == r {
        s *= t;
        r = BigUint::one();
    }
    (s, kept * r)
}

/// Sign of `x + y*sqrt(d)` for `d >= 0`.
pub(crate) fn sign_of(x: &BigInt, y: &BigInt, d: &BigInt) -> Ordering {
    let sx = x.sign();
    let sy = if d.is_zero() { Sign::NoSign } else { y.sign() };
    match (sx, sy) {
        (_, Sign::NoSign) => x.cmp(&BigInt::zero()),
        (Sign::NoSign, _) => y.cmp(&BigInt::zero()),
        (a, b) if a == b => x.cmp(&BigInt::zero()),
        _ => {
            let lhs = x * x;
            let rhs = y * y * d;
            match lhs.cmp(&rhs) {
                Ordering::Greater => x.cmp(&BigInt::zero()),
                Ordering::Less => y.cmp(&BigInt::zero()),
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Sign of `x + y*sqrt(d1) + z*sqrt(d2)`.
fn sign_of3(x: &BigInt, y: &BigInt, d1: &BigInt, z: &BigInt, d2: &BigInt) -> Ordering {
    if d1 == d2 {
        return sign_of(x, &(y + z), d1);
    }
    if z.is_zero() || d2.is_zero() {
        return sign_of(x, y, d1);
    }
    if y.is_zero() || d1.is_zero() {
        return sign_of(x, z, d2);
    }
    let su = sign_of(x, y, d1);
    let sv = z.cmp(&BigInt::zero());
    if su == Ordering::Equal {
        return sv;
    }
    if su == sv {
        return su;
    }
    // Opposite signs: compare u^2 with v^2.
    let diff = sign_of(&(x * x + y * y * d1 - z * z * d2), &(BigInt::from(2) * x * y), d1);
    match diff {
        Ordering::Greater => su,
        Ordering::Less => sv,
        Ordering::Equal => Ordering::Equal,
    }
}

fn floor_div(a: &BigInt, c: &BigInt) -> BigInt {
    a.div_floor(c)
}

impl QuadraticSurd {
    /// Builds `(a + b*sqrt(d))/c` and normalizes it.
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, QfieldError> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(QfieldError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(QfieldError::NegativeRadicand);
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub(crate) fn normalized(a: BigInt, mut b: BigInt, c: BigInt, d: BigInt) -> Self {
        let mut a = a;
        let mut d = d;
        if b.is_zero() || d.is_zero() {
            b = BigInt::zero();
            d = BigInt::zero();
        } else {
            let (s, r) = square_part(&d.magnitude().clone());
            b *= BigInt::from(s);
            if r.is_one() {
                a += &b;
                b = BigInt::zero();
                d = BigInt::zero();
            } else {
                d = BigInt::from(r);
            }
        }
        Self::reduce(a, b, c, d)
    }

    /// Gcd and sign normalization for a radicand that is already reduced.
    fn reduce(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() && !g.is_zero() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadraticSurd { a, b, c, d }
    }

    /// Builds `(a + b*sqrt(d))/c` for a radicand already passed through `square_part`.
    pub(crate) fn from_reduced(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        if b.is_zero() || d.is_zero() {
            return Self::reduce(a, BigInt::zero(), c, BigInt::zero());
        }
        Self::reduce(a, b, c, d)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        QuadraticSurd { a: n.into(), b: BigInt::zero(), c: BigInt::one(), d: BigInt::zero() }
    }

    pub fn from_rat(r: &Rat) -> Self {
        Self::reduce(r.numer().clone(), BigInt::zero(), r.denom().clone(), BigInt::zero())
    }

    /// `sqrt(n)` for a non-negative integer `n`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self, QfieldError> {
        Self::new(0, 1, 1, n)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| Rat::new(self.a.clone(), self.c.clone()))
    }

    /// `(a - b*sqrt(d))/c`.
    pub fn conjugate(&self) -> Self {
        QuadraticSurd { a: self.a.clone(), b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }

    /// True when both values lie in a common quadratic field (or one is rational).
    pub fn same_field(&self, other: &Self) -> bool {
        self.common_radicand(other).is_some()
    }

    /// Rewrites both operands over one radicand: `(a1, b1, c1, a2, b2, c2, d)`.
    #[allow(clippy::type_complexity)]
    fn common_radicand(&self, other: &Self) -> Option<(BigInt, BigInt, BigInt, BigInt, BigInt, BigInt, BigInt)> {
        let (s, t) = (self, other);
        if t.is_rational() || s.d == t.d {
            let d = if s.is_rational() { t.d.clone() } else { s.d.clone() };
            return Some((s.a.clone(), s.b.clone(), s.c.clone(), t.a.clone(), t.b.clone(), t.c.clone(), d));
        }
        if s.is_rational() {
            return Some((s.a.clone(), s.b.clone(), s.c.clone(), t.a.clone(), t.b.clone(), t.c.clone(), t.d.clone()));
        }
        // sqrt(d2) = (k / d1) * sqrt(d1) when d1*d2 = k^2.
        let prod = &s.d * &t.d;
        let k = prod.sqrt();
        if &k * &k != prod {
            return None;
        }
        Some((s.a.clone(), s.b.clone(), s.c.clone(), &t.a * &s.d, &t.b * &k, &t.c * &s.d, s.d.clone()))
    }

    fn aligned(&self, other: &Self, op: &str) -> (BigInt, BigInt, BigInt, BigInt, BigInt, BigInt, BigInt) {
        self.common_radicand(other).unwrap_or_else(|| panic!("cannot {op} surds from different quadratic fields"))
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let (a1, b1, c1, a2, b2, c2, d) = self.common_radicand(other)?;
        Some(Self::reduce(&a1 * &c2 + &a2 * &c1, &b1 * &c2 + &b2 * &c1, &c1 * &c2, d).fix_rational())
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let (a1, b1, c1, a2, b2, c2, d) = self.common_radicand(other)?;
        let a = &a1 * &a2 + &b1 * &b2 * &d;
        let b = &a1 * &b2 + &a2 * &b1;
        Some(Self::reduce(a, b, &c1 * &c2, d).fix_rational())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.a.is_zero() && self.b.is_zero() {
            return None;
        }
        // c / (a + b r) = c (a - b r) / (a^2 - b^2 d)
        let den = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(Self::reduce(&self.c * &self.a, -(&self.c * &self.b), den, self.d.clone()).fix_rational())
    }

    fn fix_rational(mut self) -> Self {
        if self.b.is_zero() {
            self.d = BigInt::zero();
        }
        self
    }

    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b, &self.d)
    }

    /// Exact `floor` of the value.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return floor_div(&self.a, &self.c);
        }
        let n = &self.b * &self.b * &self.d;
        let s = n.sqrt();
        if self.b.is_positive() {
            floor_div(&(&self.a + &s), &self.c)
        } else {
            floor_div(&(&self.a - &s - 1), &self.c)
        }
    }

    /// Truncated decimal expansion with `digits` fractional digits (debug output only).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = Self::reduce(&self.a * &scale, &self.b * &scale, self.c.clone(), self.d.clone());
        let neg = scaled.signum() == Ordering::Less;
        let f = if neg { -(-&scaled).floor() } else { scaled.floor() };
        let mag = f.magnitude().to_string();
        let padded = format!("{:0>width$}", mag, width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Rough floating-point value, for diagnostics and filtering only.
    pub fn to_f64(&self) -> f64 {
        let c = self.c.to_f64().unwrap_or(f64::INFINITY);
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (a + b * d.sqrt()) / c
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QuadraticSurd {}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        surd_cmp(self, other)
    }
}

/// Exact sign of `s - t`, using integer arithmetic only.
pub fn surd_cmp(s: &QuadraticSurd, t: &QuadraticSurd) -> Ordering {
    if s.d == t.d || s.is_rational() || t.is_rational() {
        let d = if s.is_rational() { &t.d } else { &s.d };
        let x = &s.a * &t.c - &t.a * &s.c;
        let y = &s.b * &t.c - &t.b * &s.c;
        return sign_of(&x, &y, d);
    }
    let x = &s.a * &t.c - &t.a * &s.c;
    let y = &s.b * &t.c;
    let z = -(&t.b * &s.c);
    sign_of3(&x, &y, &s.d, &z, &t.d)
}

pub fn galois_conjugate(s: &QuadraticSurd) -> QuadraticSurd {
    s.conjugate()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: &QuadraticSurd) -> QuadraticSurd {
                let f: fn(&QuadraticSurd, &QuadraticSurd) -> QuadraticSurd = $body;
                f(self, rhs)
            }
        }
        impl $tr<QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: QuadraticSurd) -> QuadraticSurd {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&QuadraticSurd> for QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: &QuadraticSurd) -> QuadraticSurd {
                (&self).$method(rhs)
            }
        }
        impl $tr<QuadraticSurd> for &QuadraticSurd {
            type Output = QuadraticSurd;
            fn $method(self, rhs: QuadraticSurd) -> QuadraticSurd {
                self.$method(&rhs)
            }
        }
    };
}

// The operators panic when the operands live in different quadratic fields;
// use `checked_add` / `checked_mul` to test first.
forward_binop!(Add, add, |s, t| {
    let (a1, b1, c1, a2, b2, c2, d) = s.aligned(t, "add");
    QuadraticSurd::reduce(&a1 * &c2 + &a2 * &c1, &b1 * &c2 + &b2 * &c1, &c1 * &c2, d).fix_rational()
});
forward_binop!(Sub, sub, |s, t| s + &(-t));
forward_binop!(Mul, mul, |s, t| {
    let (a1, b1, c1, a2, b2, c2, d) = s.aligned(t, "multiply");
    let a = &a1 * &a2 + &b1 * &b2 * &d;
    let b = &a1 * &b2 + &a2 * &b1;
    QuadraticSurd::reduce(a, b, &c1 * &c2, d).fix_rational()
});
forward_binop!(Div, div, |s, t| s * &t.recip().expect("division by zero surd"));

impl Neg for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        QuadraticSurd { a: -&self.a, b: -&self.b, c: self.c.clone(), d: self.d.clone() }
    }
}

impl Neg for QuadraticSurd {
    type Output = QuadraticSurd;
    fn neg(self) -> QuadraticSurd {
        -&self
    }
}

impl From<i64> for QuadraticSurd {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for QuadraticSurd {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<&Rat> for QuadraticSurd {
    fn from(r: &Rat) -> Self {
        Self::from_rat(r)
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt({}))/{}", self.a, op, self.b.magnitude(), self.d, self.c)
    }
}

impl FromStr for QuadraticSurd {
    type Err = QfieldError;

    /// Parses `(a + b*sqrt(d))/c`; whitespace is insignificant and the sign
    /// between `a` and `b` may be `+` or `-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |pos: usize, msg: &str| QfieldError::Parse { pos, msg: msg.to_string() };
        let rest = t.strip_prefix('(').ok_or_else(|| err(0, "expected '('"))?;
        let mut i = 1;
        let int_end = |s: &str| {
            let bytes = s.as_bytes();
            let mut k = 0;
            if k < bytes.len() && bytes[k] == b'-' {
                k += 1;
            }
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            k
        };
        let k = int_end(rest);
        let a: BigInt = rest[..k].parse().map_err(|_| err(i, "expected integer"))?;
        i += k;
        let rest = &rest[k..];
        let (neg, rest) = match rest.as_bytes().first() {
            Some(b'+') => (false, &rest[1..]),
            Some(b'-') => (true, &rest[1..]),
            _ => return Err(err(i, "expected '+' or '-'")),
        };
        i += 1;
        let k = int_end(rest);
        let mut b: BigInt = rest[..k].parse().map_err(|_| err(i, "expected integer"))?;
        if neg {
            b = -b;
        }
        i += k;
        let rest = rest[k..].strip_prefix("*sqrt(").ok_or_else(|| err(i, "expected '*sqrt('"))?;
        i += 6;
        let k = rest.bytes().take_while(u8::is_ascii_digit).count();
        let d: BigInt = rest[..k].parse().map_err(|_| err(i, "expected radicand"))?;
        i += k;
        let rest = rest[k..].strip_prefix("))/").ok_or_else(|| err(i, "expected '))/'"))?;
        i += 3;
        let c: BigInt = rest.parse().map_err(|_| err(i, "expected denominator"))?;
        if c.is_zero() {
            return Err(err(i, "zero denominator"));
        }
        QuadraticSurd::new(a, b, c, d)
    }
}

impl serde::Serialize for QuadraticSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
