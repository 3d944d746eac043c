//! Complete quotients `gamma_n = (P_n + sqrt(D))/Q_n` of an eventually periodic
//! expansion, all over the raw radicand of its period, and the lambda scans
//! built on them.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qfield::{periodic_parts, sign_of, square_part, QuadraticSurd};

/// `gamma = (p + sqrt(D))/q` together with `r = (D - p^2)/q`.
#[derive(Clone, Debug)]
pub(crate) struct State {
    pub p: BigInt,
    pub q: BigInt,
    pub r: BigInt,
}

impl State {
    /// `1/(gamma - a)`.
    pub fn forward(&self, a: &BigInt) -> State {
        let p = a * &self.q - &self.p;
        let q = &self.r + a * (&self.p - &p);
        State { p, q, r: self.q.clone() }
    }

    /// `a + 1/gamma`.
    pub fn backward(&self, a: &BigInt) -> State {
        let p = a * &self.r - &self.p;
        let r = &self.q - a * (&p - &self.p);
        State { p, q: self.r.clone(), r }
    }
}

/// The shared radicand with what is needed for floats and normalized surds.
#[derive(Debug)]
pub(crate) struct Radicand {
    pub d: BigInt,
    shift: u64,
    scaled_root: BigInt,
    split: OnceLock<(BigInt, BigInt)>,
}

impl Radicand {
    pub fn new(d: BigInt) -> Self {
        let shift = 64u64.saturating_sub(d.bits() / 2);
        let scaled_root = (&d << (2 * shift)).sqrt();
        Radicand { d, shift, scaled_root, split: OnceLock::new() }
    }

    /// `(x + y*sqrt(D))/z` as a normalized surd.
    pub fn surd(&self, x: &BigInt, y: &BigInt, z: &BigInt) -> QuadraticSurd {
        let (s, r) = self.split.get_or_init(|| {
            let (s, r) = square_part(self.d.magnitude());
            (BigInt::from(s), BigInt::from(r))
        });
        if r.is_one() {
            return QuadraticSurd::from_reduced(x + y * s, BigInt::zero(), z.clone(), BigInt::zero());
        }
        QuadraticSurd::from_reduced(x.clone(), y * s, z.clone(), r.clone())
    }

    /// `(p + k*sqrt(D))/q` in floating point.
    pub fn approx(&self, p: &BigInt, k: u32, q: &BigInt) -> f64 {
        let num = (p << self.shift) + &self.scaled_root * k;
        ratio_f64(&num, &(q << self.shift))
    }
}

pub(crate) fn ratio_f64(a: &BigInt, b: &BigInt) -> f64 {
    let shift = a.bits().max(b.bits()).saturating_sub(100);
    let (a, b) = if shift > 0 { (a >> shift, b >> shift) } else { (a.clone(), b.clone()) };
    a.to_f64().unwrap_or(f64::NAN) / b.to_f64().unwrap_or(f64::NAN)
}

/// `(x + y*sqrt(D))/z` with `z > 0`, over a radicand held elsewhere.
#[derive(Clone, Debug)]
pub(crate) struct Exact {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl Exact {
    fn new(x: BigInt, y: BigInt, z: BigInt) -> Self {
        if z.is_negative() {
            Exact { x: -x, y: -y, z: -z }
        } else {
            Exact { x, y, z }
        }
    }

    /// `gamma + num/den`.
    pub fn lambda(s: &State, num: &BigInt, den: &BigInt) -> Self {
        Exact::new(den * &s.p + num * &s.q, den.clone(), den * &s.q)
    }

    /// `gamma - conj(gamma) = 2 sqrt(D)/q`, the limit of the cuts sharing `gamma`.
    pub fn limit(s: &State) -> Self {
        Exact::new(BigInt::zero(), BigInt::from(2), s.q.clone())
    }

    pub fn cmp(&self, other: &Exact, d: &BigInt) -> Ordering {
        sign_of(&(&self.x * &other.z - &other.x * &self.z), &(&self.y * &other.z - &other.y * &self.z), d)
    }

    pub fn cmp_int(&self, k: i64, d: &BigInt) -> Ordering {
        sign_of(&(&self.x - &self.z * k), &self.y, d)
    }

    pub fn surd(&self, rad: &Radicand) -> QuadraticSurd {
        rad.surd(&self.x, &self.y, &self.z)
    }
}

pub(crate) fn big(d: &BigUint) -> BigInt {
    BigInt::from(d.clone())
}

/// State of the purely periodic `[per; per; ...]` and its radicand.
pub(crate) fn period_start(per: &[BigUint]) -> (Radicand, State) {
    let (u, w, disc) = periodic_parts(per).expect("period is nonempty with positive digits");
    let r = (&disc - &u * &u) / &w;
    (Radicand::new(disc), State { p: u, q: w, r })
}

/// States of `[y_n; y_{n+1}, ...]` for `n = 1, 2, ...` of the sequence `pre, per, per, ...`.
pub(crate) struct Quotients {
    pre_states: std::vec::IntoIter<State>,
    cur: State,
    per: Vec<BigInt>,
    idx: usize,
}

impl Quotients {
    pub fn new(pre: &[BigUint], per: &[BigUint]) -> (Radicand, Self) {
        let (rad, start) = period_start(per);
        let mut pre_states = Vec::with_capacity(pre.len());
        let mut s = start.clone();
        for a in pre.iter().rev() {
            s = s.backward(&big(a));
            pre_states.push(s.clone());
        }
        pre_states.reverse();
        let per = per.iter().map(big).collect();
        (rad, Quotients { pre_states: pre_states.into_iter(), cur: start, per, idx: 0 })
    }
}

impl Iterator for Quotients {
    type Item = State;
    fn next(&mut self) -> Option<State> {
        if let Some(s) = self.pre_states.next() {
            return Some(s);
        }
        let next = self.cur.forward(&self.per[self.idx]);
        self.idx = (self.idx + 1) % self.per.len();
        Some(std::mem::replace(&mut self.cur, next))
    }
}

/// One cut `lambda_n = gamma_n + q_{n-2}/q_{n-1}` of a one-sided expansion `[0; x_1, x_2, ...]`.
#[derive(Clone, Debug)]
pub(crate) struct Cut {
    pub n: usize,
    pub state: State,
    /// `p_{n-1}, q_{n-2}, q_{n-1}` of `[0; x_1, ...]`.
    pub pm1: BigInt,
    pub qm2: BigInt,
    pub qm1: BigInt,
    pub approx: f64,
}

impl Cut {
    pub fn exact(&self) -> Exact {
        Exact::lambda(&self.state, &self.qm2, &self.qm1)
    }
}

/// Streams every cut of `[0; pre, (per)]` in order.
pub(crate) struct Cuts<'a> {
    quotients: Quotients,
    rad: &'a Radicand,
    digits: Box<dyn Iterator<Item = BigInt> + 'a>,
    n: usize,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl<'a> Cuts<'a> {
    pub fn new(pre: &'a [BigUint], per: &'a [BigUint], rad: &'a Radicand, quotients: Quotients) -> Self {
        let digits = Box::new(pre.iter().chain(per.iter().cycle()).map(big));
        Cuts { quotients, rad, digits, n: 0, p: (BigInt::one(), BigInt::zero()), q: (BigInt::zero(), BigInt::one()) }
    }
}

impl Iterator for Cuts<'_> {
    type Item = Cut;
    fn next(&mut self) -> Option<Cut> {
        if self.n > 0 {
            let a = self.digits.next()?;
            let p = &a * &self.p.1 + &self.p.0;
            let q = &a * &self.q.1 + &self.q.0;
            self.p.0 = std::mem::replace(&mut self.p.1, p);
            self.q.0 = std::mem::replace(&mut self.q.1, q);
        }
        self.n += 1;
        let state = self.quotients.next()?;
        let approx = self.rad.approx(&state.p, 1, &state.q) + ratio_f64(&self.q.0, &self.q.1);
        Some(Cut { n: self.n, state, pm1: self.p.1.clone(), qm2: self.q.0.clone(), qm1: self.q.1.clone(), approx })
    }
}

/// Relative slack under which float comparisons are rechecked exactly.
pub(crate) fn tolerance(scale: f64) -> f64 {
    1e-9 * scale.abs().max(1.0)
}
