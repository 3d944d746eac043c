//! Words over `{a, b}`, the Christoffel tree and its renormalization operators.
//!
//! A word is stored letter by letter; its digit image (`a = 2,2`, `b = 1,1`)
//! is computed on demand.

mod identities;
mod mechanical;

pub use identities::{verify_identities, IdentityReport, Outcome};
pub use mechanical::{mechanical_path, mechanical_prefix, MechanicalVariant};

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordsError {
    #[error("({0}, {1}) is not a coprime pair of a positive denominator")]
    NotCoprime(u64, u64),
    #[error("slope must lie in [0, 1]")]
    OutOfRange,
    #[error("only {stable} letters are determined by this path")]
    Unstable { stable: usize },
    #[error("digits do not split into 22/11 blocks (position {pos})")]
    NonDecomposable { pos: usize },
    #[error("invalid letter at position {pos}")]
    InvalidLetter { pos: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn digit(self) -> u8 {
        match self {
            Letter::A => 2,
            Letter::B => 1,
        }
    }

    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }
}

/// A finite word over `{a, b}`.  The derived order is lexicographic with `a < b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn a() -> Self {
        Word(vec![Letter::A])
    }

    pub fn b() -> Self {
        Word(vec![Letter::B])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    /// `w^T`, the reversal.
    pub fn transpose(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// `w^+`: drop the first letter.
    pub fn drop_first(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    /// `w^-`: drop the last letter.
    pub fn drop_last(&self) -> Word {
        let n = self.0.len().saturating_sub(1);
        Word(self.0[..n].to_vec())
    }

    /// `w_a`: the last letter replaced by `a`.
    pub fn with_last_a(&self) -> Word {
        let mut v = self.0.clone();
        if let Some(l) = v.last_mut() {
            *l = Letter::A;
        }
        Word(v)
    }

    /// `w^b`: the first letter replaced by `b`.
    pub fn with_first_b(&self) -> Word {
        let mut v = self.0.clone();
        if let Some(l) = v.first_mut() {
            *l = Letter::B;
        }
        Word(v)
    }

    pub fn count_b(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::B).count()
    }

    pub fn is_palindrome(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    /// The digit image: `a -> 2,2`, `b -> 1,1`.
    pub fn digits(&self) -> Vec<u8> {
        self.0.iter().flat_map(|l| [l.digit(), l.digit()]).collect()
    }

    /// The digit image as continued-fraction digits.
    pub fn digit_values(&self) -> Vec<BigUint> {
        self.digits().into_iter().map(BigUint::from).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(if *l == Letter::A { "a" } else { "b" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordsError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .enumerate()
            .map(|(pos, c)| match c {
                'a' => Ok(Letter::A),
                'b' => Ok(Letter::B),
                _ => Err(WordsError::InvalidLetter { pos }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Word", 2)?;
        st.serialize_field("letters", &self.to_string())?;
        st.serialize_field("digits", &self.digits())?;
        st.end()
    }
}

/// Nielsen substitutions acting letter by letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Inner {
    U,
    V,
}

/// Exterior operators acting on alphabet pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Exterior {
    Ubar,
    Vbar,
}

impl Exterior {
    pub fn inner(self) -> Inner {
        match self {
            Exterior::Ubar => Inner::U,
            Exterior::Vbar => Inner::V,
        }
    }
}

/// Parses a path written as a string over `U`/`V` (e.g. `"UVUV"`).
pub fn parse_path(s: &str) -> Result<Vec<Exterior>, WordsError> {
    s.chars()
        .enumerate()
        .map(|(pos, c)| match c {
            'U' | 'u' => Ok(Exterior::Ubar),
            'V' | 'v' => Ok(Exterior::Vbar),
            _ => Err(WordsError::InvalidLetter { pos }),
        })
        .collect()
}

pub fn path_string(path: &[Exterior]) -> String {
    path.iter().map(|e| if *e == Exterior::Ubar { 'U' } else { 'V' }).collect()
}

/// `U: a -> ab, b -> b`; `V: a -> a, b -> ab`.
pub fn apply_inner(op: Inner, w: &Word) -> Word {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &l in w.letters() {
        match (op, l) {
            (Inner::U, Letter::A) => out.extend([Letter::A, Letter::B]),
            (Inner::V, Letter::B) => out.extend([Letter::A, Letter::B]),
            (_, l) => out.push(l),
        }
    }
    Word(out)
}

/// A vertex `(alpha, beta)` of the Christoffel tree with its path from `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphabetPair {
    pub alpha: Word,
    pub beta: Word,
    pub path: Vec<Exterior>,
}

impl AlphabetPair {
    pub fn root() -> Self {
        AlphabetPair { alpha: Word::a(), beta: Word::b(), path: Vec::new() }
    }

    pub fn from_path(path: &[Exterior]) -> Self {
        path.iter().fold(Self::root(), |p, &op| apply_exterior(op, &p))
    }

    /// `alpha * beta`, the Christoffel word of the vertex.
    pub fn word(&self) -> Word {
        self.alpha.concat(&self.beta)
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }
}

/// `Ubar: (alpha, beta) -> (alpha beta, beta)`; `Vbar: (alpha, beta) -> (alpha, alpha beta)`.
pub fn apply_exterior(op: Exterior, p: &AlphabetPair) -> AlphabetPair {
    let ab = p.word();
    let mut path = p.path.clone();
    path.push(op);
    match op {
        Exterior::Ubar => AlphabetPair { alpha: ab, beta: p.beta.clone(), path },
        Exterior::Vbar => AlphabetPair { alpha: p.alpha.clone(), beta: ab, path },
    }
}

/// The pair obtained by applying the inner operators of `path` in reverse
/// order to `(a, b)`.
pub fn inner_pair(path: &[Exterior]) -> (Word, Word) {
    path.iter()
        .rev()
        .fold((Word::a(), Word::b()), |(x, y), op| (apply_inner(op.inner(), &x), apply_inner(op.inner(), &y)))
}

/// Depth-first walk over all tree vertices of depth at most `max_depth`.
pub struct TreeWalk {
    stack: Vec<AlphabetPair>,
    max_depth: usize,
}

impl Iterator for TreeWalk {
    type Item = AlphabetPair;
    fn next(&mut self) -> Option<AlphabetPair> {
        let node = self.stack.pop()?;
        if node.depth() < self.max_depth {
            self.stack.push(apply_exterior(Exterior::Vbar, &node));
            self.stack.push(apply_exterior(Exterior::Ubar, &node));
        }
        Some(node)
    }
}

pub fn tree_nodes(max_depth: usize) -> TreeWalk {
    TreeWalk { stack: vec![AlphabetPair::root()], max_depth }
}

/// Lower Christoffel word with `mu` letters `b` and `nu` letters `a`.
pub fn christoffel(mu: u64, nu: u64) -> Result<Word, WordsError> {
    if nu == 0 || mu.gcd(&nu) != 1 {
        return Err(WordsError::NotCoprime(mu, nu));
    }
    let mut v = Vec::new();
    for i in 1..=nu {
        let r = (i as u128 * mu as u128) / nu as u128 - ((i - 1) as u128 * mu as u128) / nu as u128;
        v.push(Letter::A);
        v.extend(std::iter::repeat(Letter::B).take(r as usize));
    }
    Ok(Word(v))
}

/// The tree path whose Christoffel word has slope `mu/nu` (b-count over a-count).
pub fn stern_brocot_path(mu: u64, nu: u64) -> Result<Vec<Exterior>, WordsError> {
    if mu == 0 || nu == 0 || mu.gcd(&nu) != 1 {
        return Err(WordsError::NotCoprime(mu, nu));
    }
    let (mut left, mut right) = ((0u128, 1u128), (1u128, 0u128));
    let target = (mu as u128, nu as u128);
    let mut path = Vec::new();
    loop {
        let mid = (left.0 + right.0, left.1 + right.1);
        if mid == target {
            return Ok(path);
        }
        if target.0 * mid.1 > mid.0 * target.1 {
            path.push(Exterior::Ubar);
            left = mid;
        } else {
            path.push(Exterior::Vbar);
            right = mid;
        }
    }
}

/// True iff any two factors of equal length differ by at most one in their `b` count.
pub fn is_balanced(w: &Word) -> bool {
    let n = w.len();
    let mut prefix = vec![0usize; n + 1];
    for (i, &l) in w.letters().iter().enumerate() {
        prefix[i + 1] = prefix[i] + usize::from(l == Letter::B);
    }
    (1..n).all(|k| {
        let counts = (0..=n - k).map(|i| prefix[i + k] - prefix[i]);
        let (lo, hi) = counts.fold((usize::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        hi - lo <= 1
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Alpha,
    Beta,
}

/// First `n` letters of `lim alpha_k` or last `n` letters of `lim beta_k` along `path`.
///
/// Every `alpha_k` is a prefix of `alpha_{k+1}` and every `beta_k` a suffix of
/// `beta_{k+1}`, so the letters of the final pair are already the limit's.
pub fn limit_prefix(path: &[Exterior], side: Side, n: usize) -> Result<Word, WordsError> {
    let p = AlphabetPair::from_path(path);
    match side {
        Side::Alpha if p.alpha.len() >= n => Ok(p.alpha.slice(0..n)),
        Side::Beta if p.beta.len() >= n => Ok(p.beta.slice(p.beta.len() - n..p.beta.len())),
        Side::Alpha => Err(WordsError::Unstable { stable: p.alpha.len() }),
        Side::Beta => Err(WordsError::Unstable { stable: p.beta.len() }),
    }
}

/// Reads digits as `22`/`11` blocks, stripping one leading lone `2` if needed.
///
/// Returns whether a leading `2` was stripped.
pub fn word_of_digits(s: &[BigUint]) -> Result<(bool, Word), WordsError> {
    let small: Vec<u8> = s
        .iter()
        .enumerate()
        .map(|(pos, d)| match u8::try_from(d) {
            Ok(x @ (1 | 2)) => Ok(x),
            _ => Err(WordsError::NonDecomposable { pos }),
        })
        .collect::<Result<_, _>>()?;
    let lead = small.iter().take_while(|&&d| d == 2).count();
    let stripped = lead % 2 == 1;
    let start = usize::from(stripped);
    let body = &small[start..];
    let mut v = Vec::with_capacity(body.len() / 2);
    for (i, pair) in body.chunks(2).enumerate() {
        if pair.len() < 2 || pair[0] != pair[1] {
            return Err(WordsError::NonDecomposable { pos: start + 2 * i + 1 });
        }
        v.push(if pair[0] == 2 { Letter::A } else { Letter::B });
    }
    Ok((stripped, Word(v)))
}

/// Number of distinct length-`n` factors of a digit sequence.
pub fn subword_complexity(digits: &[u8], n: usize) -> usize {
    if n == 0 || n > digits.len() {
        return usize::from(n == 0);
    }
    digits.windows(n).collect::<HashSet<_>>().len()
}
