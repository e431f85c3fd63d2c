//! Lightweight 16-bit fingerprints for approximate keyword matching.
//!
//! Every word of a dictionary gets a fingerprint recording which of a small
//! set of letters it contains (or how often, or where they first occur).
//! At query time the pattern's fingerprint is compared with each word's
//! using one xor and one table lookup; if half the differing bits, rounded
//! up, already exceed `k`, the word is rejected without looking at its
//! bytes. Only the remaining candidates are verified with a bounded
//! Hamming or Levenshtein computation.
//!
//! ```
//! use fprint_core::{build_dictionary, Metric, Scheme, Variant};
//!
//! let scheme = Scheme::english(Variant::Occurrence).unwrap();
//! let dict = build_dictionary(["run", "ran", "sun", "fax"], scheme);
//! let result = dict.query(b"ran", 1, Metric::Hamming, true).unwrap();
//! assert_eq!(result.matches, vec![0, 1]);
//! ```

pub mod bench;
pub mod dictionary;
pub mod distance;
mod error;
pub mod fingerprint;
pub mod letters;
pub mod oracle;
pub mod workload;

pub use dictionary::{
    build_dictionary, FingerprintedDictionary, QueryOptions, QueryResult, QueryStats,
};
pub use distance::{hamming_bounded, levenshtein_bounded, Bounded, Metric};
pub use error::{Error, Result};
pub use fingerprint::{ComparisonTables, Fingerprint, Scheme, Variant, WIDTH_BITS};
pub use letters::{
    compute_frequencies, english_default_letters, select_letters, LetterSet, LetterStrategy,
    SymbolFrequencyTable,
};
