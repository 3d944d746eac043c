//! Exact machinery for the inequality `|x - p/q| < 1/(3q^2)`.

pub mod classify;
pub mod cuts;
pub mod qfield;
pub mod spectra;
pub mod sweeps;
pub mod words;

pub(crate) mod ser {
    /// Serializes through `Display`, keeping big integers exact in JSON.
    pub fn display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }
}

// The book's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/surds.md")]
    mod surds {}
    #[doc = include_str!("../../../book/src/words.md")]
    mod words {}
    #[doc = include_str!("../../../book/src/cuts.md")]
    mod cuts {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/classify.md")]
    mod classify {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
