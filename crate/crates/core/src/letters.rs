//! Symbol statistics and the letter subsets that parameterize fingerprints.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// English letters with their relative frequency in percent, most frequent
/// first (Lewand, *Cryptological Mathematics*, p. 36).
pub const ENGLISH_FREQUENCIES: [(u8, f64); 26] = [
    (b'e', 12.702),
    (b't', 9.056),
    (b'a', 8.167),
    (b'o', 7.507),
    (b'i', 6.966),
    (b'n', 6.749),
    (b's', 6.327),
    (b'h', 6.094),
    (b'r', 5.987),
    (b'd', 4.253),
    (b'l', 4.025),
    (b'c', 2.782),
    (b'u', 2.758),
    (b'm', 2.406),
    (b'w', 2.360),
    (b'f', 2.228),
    (b'g', 2.015),
    (b'y', 1.974),
    (b'p', 1.929),
    (b'b', 1.492),
    (b'v', 0.978),
    (b'k', 0.772),
    (b'j', 0.153),
    (b'x', 0.150),
    (b'q', 0.095),
    (b'z', 0.074),
];

/// The built-in descending-frequency ordering of `a..=z`.
pub fn english_default_letters() -> [u8; 26] {
    ENGLISH_FREQUENCIES.map(|(c, _)| c)
}

/// Occurrence count of every byte value in a corpus.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolFrequencyTable {
    counts: [u64; 256],
    total: u64,
}

impl Default for SymbolFrequencyTable {
    fn default() -> Self {
        Self {
            counts: [0; 256],
            total: 0,
        }
    }
}

impl fmt::Debug for SymbolFrequencyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let present: Vec<_> = self
            .present()
            .map(|c| (c as char, self.counts[c as usize]))
            .collect();
        f.debug_struct("SymbolFrequencyTable")
            .field("total", &self.total)
            .field("counts", &present)
            .finish()
    }
}

impl SymbolFrequencyTable {
    /// Counts every byte of `corpus`.
    pub fn compute(corpus: &[u8]) -> Self {
        let mut table = Self::default();
        table.add(corpus);
        table
    }

    /// Counts the concatenation of `words`, without separators.
    pub fn from_words<I, W>(words: I) -> Self
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u8]>,
    {
        let mut table = Self::default();
        for w in words {
            table.add(w.as_ref());
        }
        table
    }

    /// A table whose counts are the English letter frequencies scaled to
    /// thousandths of a percent.
    pub fn english() -> Self {
        let mut table = Self::default();
        for (c, pct) in ENGLISH_FREQUENCIES {
            let n = (pct * 1000.0).round() as u64;
            table.counts[c as usize] = n;
            table.total += n;
        }
        table
    }

    pub fn add(&mut self, bytes: &[u8]) {
        for &c in bytes {
            self.counts[c as usize] += 1;
        }
        self.total += bytes.len() as u64;
    }

    pub fn count(&self, symbol: u8) -> u64 {
        self.counts[symbol as usize]
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct symbols that occur at least once.
    pub fn alphabet_size(&self) -> usize {
        self.counts.iter().filter(|&&n| n > 0).count()
    }

    fn present(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=255u8).filter(move |&c| self.counts[c as usize] > 0)
    }

    /// Symbols that occur, most frequent first; ties go to the smaller byte.
    pub fn ranked(&self) -> Vec<u8> {
        let mut symbols: Vec<u8> = self.present().collect();
        symbols.sort_by(|&a, &b| {
            self.counts[b as usize]
                .cmp(&self.counts[a as usize])
                .then(a.cmp(&b))
        });
        symbols
    }
}

/// Computes the symbol frequencies of a raw corpus.
pub fn compute_frequencies(corpus: &[u8]) -> SymbolFrequencyTable {
    SymbolFrequencyTable::compute(corpus)
}

/// Which end of the frequency ranking a letter set is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LetterStrategy {
    Common,
    Mixed,
    Rare,
}

impl LetterStrategy {
    pub const ALL: [LetterStrategy; 3] = [Self::Common, Self::Mixed, Self::Rare];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Common => "common",
            Self::Mixed => "mixed",
            Self::Rare => "rare",
        }
    }
}

impl fmt::Display for LetterStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LetterStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "common" => Ok(Self::Common),
            "mixed" => Ok(Self::Mixed),
            "rare" => Ok(Self::Rare),
            other => Err(Error::InvalidParameter(format!(
                "unknown letter strategy `{other}` (expected common, mixed or rare)"
            ))),
        }
    }
}

const NO_SLOT: u8 = u8::MAX;

/// An ordered subset of the alphabet. The position of a symbol in the set is
/// its slot, which decides where it lands in a fingerprint.
#[derive(Clone, PartialEq, Eq)]
pub struct LetterSet {
    symbols: Vec<u8>,
    slot_of: [u8; 256],
}

impl LetterSet {
    pub fn new(symbols: impl Into<Vec<u8>>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.len() >= NO_SLOT as usize {
            return Err(Error::InvalidParameter(format!(
                "letter set of {} symbols is too large",
                symbols.len()
            )));
        }
        let mut slot_of = [NO_SLOT; 256];
        for (slot, &c) in symbols.iter().enumerate() {
            if slot_of[c as usize] != NO_SLOT {
                return Err(Error::DuplicateLetter(c));
            }
            slot_of[c as usize] = slot as u8;
        }
        Ok(Self { symbols, slot_of })
    }

    /// The first `count` letters of the built-in English ordering.
    pub fn english(count: usize) -> Result<Self> {
        let letters = english_default_letters();
        if count > letters.len() {
            return Err(Error::InsufficientSymbols {
                needed: count,
                available: letters.len(),
            });
        }
        Self::new(&letters[..count])
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn slot(&self, symbol: u8) -> Option<usize> {
        match self.slot_of[symbol as usize] {
            NO_SLOT => None,
            q => Some(q as usize),
        }
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.slot_of[symbol as usize] != NO_SLOT
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LetterSet(\"{self}\")")
    }
}

/// One line, symbols in slot order. Bytes outside printable ASCII (and the
/// backslash) are written as `\xNN`.
impl fmt::Display for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.symbols {
            if c.is_ascii_graphic() && c != b'\\' {
                write!(f, "{}", c as char)?;
            } else {
                write!(f, "\\x{c:02x}")?;
            }
        }
        Ok(())
    }
}

/// Picks `count` symbols from `freq` according to `strategy`.
///
/// Common takes the most frequent symbols in descending order. Rare walks
/// the same ranking from the other end, so the two never overlap while the
/// table has at least `2 * count` symbols. Mixed is the first `ceil(count/2)`
/// common symbols followed by the first `floor(count/2)` rare ones.
pub fn select_letters(
    freq: &SymbolFrequencyTable,
    count: usize,
    strategy: LetterStrategy,
) -> Result<LetterSet> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "letter count must be positive".into(),
        ));
    }
    let ranked = freq.ranked();
    let available = ranked.len();
    if available < count {
        return Err(match strategy {
            LetterStrategy::Mixed => Error::OverlappingMixedSet { count, available },
            _ => Error::InsufficientSymbols {
                needed: count,
                available,
            },
        });
    }
    let symbols: Vec<u8> = match strategy {
        LetterStrategy::Common => ranked[..count].to_vec(),
        LetterStrategy::Rare => ranked.iter().rev().take(count).copied().collect(),
        LetterStrategy::Mixed => {
            let common = count.div_ceil(2);
            let rare = count / 2;
            ranked[..common]
                .iter()
                .chain(ranked.iter().rev().take(rare))
                .copied()
                .collect()
        }
    };
    LetterSet::new(symbols)
}
