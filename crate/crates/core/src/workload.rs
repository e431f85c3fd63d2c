//! Word lists, synthetic corpora and query sampling.

use std::collections::BTreeMap;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Splits newline-separated raw bytes into words. A trailing `\r` is
/// dropped and empty lines are skipped.
pub fn parse_wordlist(bytes: &[u8]) -> Vec<Vec<u8>> {
    bytes
        .split(|&c| c == b'\n')
        .map(|line| line.strip_suffix(b"\r").unwrap_or(line))
        .filter(|line| !line.is_empty())
        .map(<[u8]>::to_vec)
        .collect()
}

pub fn read_wordlist(path: impl AsRef<Path>) -> Result<Vec<Vec<u8>>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(parse_wordlist(&bytes))
}

/// Keeps only the words of exactly `len` bytes.
pub fn filter_length(words: Vec<Vec<u8>>, len: usize) -> Vec<Vec<u8>> {
    words.into_iter().filter(|w| w.len() == len).collect()
}

/// Draws `ceil(total_bytes / word_length)` words of `word_length` symbols,
/// each symbol independently from `frequencies` (weights need not sum to
/// one).
pub fn generate_synthetic(
    total_bytes: usize,
    word_length: usize,
    frequencies: &[(u8, f64)],
    seed: u64,
) -> Result<Vec<Vec<u8>>> {
    if word_length == 0 {
        return Err(Error::InvalidParameter(
            "word length must be at least 1".into(),
        ));
    }
    let dist = WeightedIndex::new(frequencies.iter().map(|&(_, w)| w))
        .map_err(|e| Error::InvalidParameter(format!("letter frequencies: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = total_bytes.div_ceil(word_length);
    Ok((0..count)
        .map(|_| {
            (0..word_length)
                .map(|_| frequencies[dist.sample(&mut rng)].0)
                .collect()
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusStats {
    pub word_count: usize,
    pub total_bytes: usize,
    /// Word length -> number of words.
    pub histogram: BTreeMap<usize, usize>,
    /// Most frequent length; ties go to the shorter one.
    pub mode_length: usize,
}

pub fn corpus_stats<W: AsRef<[u8]>>(words: &[W]) -> Result<CorpusStats> {
    if words.is_empty() {
        return Err(Error::Empty("word list"));
    }
    let mut histogram = BTreeMap::new();
    let mut total_bytes = 0;
    for w in words {
        let len = w.as_ref().len();
        *histogram.entry(len).or_insert(0) += 1;
        total_bytes += len;
    }
    // max_by_key keeps the last maximum, so walk lengths in descending order.
    let mode_length = histogram
        .iter()
        .rev()
        .max_by_key(|&(_, &n)| n)
        .map(|(&len, _)| len)
        .expect("non-empty histogram");
    Ok(CorpusStats {
        word_count: words.len(),
        total_bytes,
        histogram,
        mode_length,
    })
}

/// Up to `max_errors` substitutions per query, each applied with
/// `probability`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Distortion {
    pub max_errors: usize,
    pub probability: f64,
}

impl Distortion {
    pub const NONE: Distortion = Distortion {
        max_errors: 0,
        probability: 0.5,
    };

    pub fn new(max_errors: usize) -> Self {
        Distortion {
            max_errors,
            probability: 0.5,
        }
    }
}

impl Default for Distortion {
    fn default() -> Self {
        Self::NONE
    }
}

/// Samples `n` words uniformly with replacement and distorts each one.
/// A distortion picks a uniformly random position and a uniformly random
/// replacement from the symbols that occur in `words`; substitutions keep
/// the query length unchanged.
pub fn sample_queries<W: AsRef<[u8]>>(
    words: &[W],
    n: usize,
    distortion: Distortion,
    seed: u64,
) -> Result<Vec<Vec<u8>>> {
    if words.is_empty() {
        return Err(Error::Empty("dictionary"));
    }
    if !(0.0..=1.0).contains(&distortion.probability) {
        return Err(Error::InvalidParameter(format!(
            "distortion probability {} is not in [0, 1]",
            distortion.probability
        )));
    }
    let mut present = [false; 256];
    for w in words {
        for &c in w.as_ref() {
            present[c as usize] = true;
        }
    }
    let alphabet: Vec<u8> = (0..=255u8).filter(|&c| present[c as usize]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = Vec::with_capacity(n);
    for _ in 0..n {
        let mut q = words[rng.random_range(0..words.len())].as_ref().to_vec();
        for _ in 0..distortion.max_errors {
            if q.is_empty() || !rng.random_bool(distortion.probability) {
                continue;
            }
            let pos = rng.random_range(0..q.len());
            q[pos] = alphabet[rng.random_range(0..alphabet.len())];
        }
        queries.push(q);
    }
    Ok(queries)
}
