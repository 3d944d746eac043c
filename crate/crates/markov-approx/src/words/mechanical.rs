use std::cmp::Ordering;

use num_bigint::BigUint;

use super::{Exterior, Letter, Word, WordsError};
use crate::qfield::QuadraticSurd;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MechanicalVariant {
    /// `chi(w_k) = floor(k xi) - floor((k-1) xi)`.
    Floor,
    /// `w_1 = a`, then `chi(w_k) = floor(-(k-1) xi) - floor(-k xi)`.
    Skew,
}

/// The first `n` letters of the mechanical word of slope `xi` (`chi(a) = 0`, `chi(b) = 1`).
pub fn mechanical_prefix(xi: &QuadraticSurd, variant: MechanicalVariant, n: usize) -> Result<Word, WordsError> {
    if xi.signum() == Ordering::Less || xi > &QuadraticSurd::from(1) {
        return Err(WordsError::OutOfRange);
    }
    let floor_at = |k: i64| (&QuadraticSurd::from(k) * xi).floor();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n as i64 {
        let step = match variant {
            MechanicalVariant::Floor => floor_at(k) - floor_at(k - 1),
            MechanicalVariant::Skew if k == 1 => 0.into(),
            MechanicalVariant::Skew => floor_at(-(k - 1)) - floor_at(-k),
        };
        out.push(if step == 0.into() { Letter::A } else { Letter::B });
    }
    Ok(Word::new(out))
}

/// The exterior path whose `alpha` limit is the mechanical word of slope
/// `[0; d_1, d_2, ...]`: `Vbar^(d_1 - 1)`, then `Ubar^(d_2)`, `Vbar^(d_3)`, ...
pub fn mechanical_path(cf_digits: &[BigUint]) -> Vec<Exterior> {
    let mut path = Vec::new();
    for (i, d) in cf_digits.iter().enumerate() {
        let d = usize::try_from(d).expect("digit fits in memory");
        let (op, count) = match i {
            0 => (Exterior::Vbar, d.saturating_sub(1)),
            _ if i % 2 == 1 => (Exterior::Ubar, d),
            _ => (Exterior::Vbar, d),
        };
        path.extend(std::iter::repeat(op).take(count));
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{surd_to_cf, Rat};
    use crate::words::{is_balanced, limit_prefix, Side};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn rational_slopes() {
        let half = QuadraticSurd::from_rat(&Rat::new(1.into(), 2.into()));
        assert_eq!(mechanical_prefix(&half, MechanicalVariant::Floor, 6).unwrap(), w("ababab"));
        assert_eq!(mechanical_prefix(&QuadraticSurd::zero(), MechanicalVariant::Floor, 4).unwrap(), w("aaaa"));
        assert_eq!(
            mechanical_prefix(&QuadraticSurd::from(2), MechanicalVariant::Floor, 4),
            Err(WordsError::OutOfRange)
        );
    }

    #[test]
    fn golden_slope() {
        // floor(k * 0.6180339887...) for k = 0..8 is 0,0,1,1,2,3,3,4,4.
        let xi = QuadraticSurd::new(-1, 1, 2, 5).unwrap();
        assert_eq!(mechanical_prefix(&xi, MechanicalVariant::Floor, 8).unwrap(), w("ababbaba"));
        let skew = mechanical_prefix(&xi, MechanicalVariant::Skew, 8).unwrap();
        assert_eq!(skew, w("ababbaba"));
    }

    #[test]
    fn path_matches_floor_word() {
        for (a, b, c, d) in [(3, -1, 2, 5), (-1, 1, 2, 5), (0, 1, 3, 2), (-1, 1, 1, 2), (5, -1, 7, 11)] {
            let xi = QuadraticSurd::new(a, b, c, d).unwrap();
            let cf = surd_to_cf(&xi);
            // Word lengths grow exponentially along the path; stop once 30 letters are fixed.
            let path = (1..)
                .map(|k| mechanical_path(&cf.digits(k)))
                .find(|p| crate::words::AlphabetPair::from_path(p).alpha.len() >= 30)
                .unwrap();
            let limit = limit_prefix(&path, Side::Alpha, 30).unwrap();
            let direct = mechanical_prefix(&xi, MechanicalVariant::Floor, 30).unwrap();
            assert_eq!(limit, direct, "{xi}");
            assert!(is_balanced(&direct));
        }
    }
}
