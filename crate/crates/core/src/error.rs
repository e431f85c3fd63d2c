use std::path::PathBuf;

use crate::{Metric, Variant};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("need {needed} distinct symbols but the collection only has {available}")]
    InsufficientSymbols { needed: usize, available: usize },

    #[error("mixed letter set of {count} would overlap: only {available} distinct symbols")]
    OverlappingMixedSet { count: usize, available: usize },

    #[error("{variant} scheme needs {expected} letters, got {actual}")]
    LetterCount {
        variant: Variant,
        expected: usize,
        actual: usize,
    },

    #[error("letter {0:#04x} appears more than once in the letter set")]
    DuplicateLetter(u8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("hamming distance needs equal lengths (got {left} and {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("{variant} fingerprints cannot filter for {metric} distance")]
    UnsupportedMetric { variant: Variant, metric: Metric },

    #[error("{0} is empty")]
    Empty(&'static str),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
