//! 16-bit fingerprints and their constant-time comparison.
//!
//! A fingerprint summarizes which letters of a [`LetterSet`] occur in a
//! string (and, depending on the [`Variant`], where or how often). Two
//! fingerprints are compared with one xor and one table lookup; half the
//! resulting distance, rounded up, is a lower bound on the number of edits
//! separating the strings.
//!
//! Slot 0 of the letter set occupies the most significant field, so the
//! binary rendering reads left to right in slot order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::Metric;
use crate::error::{Error, Result};
use crate::letters::{select_letters, LetterSet, LetterStrategy, SymbolFrequencyTable};

/// Width of every fingerprint.
pub const WIDTH_BITS: u32 = 16;

const TABLE_LEN: usize = 1 << WIDTH_BITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// One bit per letter: does it occur at all.
    Occurrence,
    /// Two bits per letter: does it occur in the first half, in the second.
    OccurrenceHalved,
    /// A saturating counter of `bits` bits per letter.
    Count { bits: u8 },
    /// The first position of each letter in `bits` bits; leftover bits are
    /// occurrence bits for further letters.
    Position { bits: u8 },
}

impl Variant {
    pub const DEFAULT_COUNT_BITS: u8 = 2;
    pub const DEFAULT_POSITION_BITS: u8 = 3;

    /// The four variants with their default parameters.
    pub const ALL: [Variant; 4] = [
        Variant::Occurrence,
        Variant::OccurrenceHalved,
        Variant::Count {
            bits: Self::DEFAULT_COUNT_BITS,
        },
        Variant::Position {
            bits: Self::DEFAULT_POSITION_BITS,
        },
    ];

    pub const fn count() -> Self {
        Variant::Count {
            bits: Self::DEFAULT_COUNT_BITS,
        }
    }

    pub const fn position() -> Self {
        Variant::Position {
            bits: Self::DEFAULT_POSITION_BITS,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Occurrence => "occurrence",
            Variant::OccurrenceHalved => "occurrence-halved",
            Variant::Count { .. } => "count",
            Variant::Position { .. } => "position",
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Variant::Count { bits } if bits == 0 || !WIDTH_BITS.is_multiple_of(bits as u32) => {
                Err(Error::InvalidParameter(format!(
                    "bits per count must divide {WIDTH_BITS}, got {bits}"
                )))
            }
            Variant::Position { bits } if bits == 0 || bits as u32 > WIDTH_BITS => {
                Err(Error::InvalidParameter(format!(
                    "bits per position must be in 1..={WIDTH_BITS}, got {bits}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Number of position fields and of trailing occurrence bits.
    fn position_split(bits: u8) -> (usize, usize) {
        let fields = (WIDTH_BITS / bits as u32) as usize;
        (fields, WIDTH_BITS as usize - fields * bits as usize)
    }

    /// How many letters a scheme of this variant holds.
    pub fn letter_count(self) -> usize {
        match self {
            Variant::Occurrence => WIDTH_BITS as usize,
            Variant::OccurrenceHalved => WIDTH_BITS as usize / 2,
            Variant::Count { bits } => WIDTH_BITS as usize / bits.max(1) as usize,
            Variant::Position { bits } => {
                let (fields, rest) = Self::position_split(bits.max(1));
                fields + rest
            }
        }
    }

    pub fn supports(self, metric: Metric) -> bool {
        match self {
            Variant::Occurrence | Variant::Count { .. } => true,
            Variant::OccurrenceHalved | Variant::Position { .. } => metric == Metric::Hamming,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts the full names and the short forms `occ`, `occh`, `pos`. Count
/// and position take an optional parameter: `count:4`, `pos:5`.
impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (name, param) = match lower.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (lower.as_str(), None),
        };
        let bits = |default: u8| -> Result<u8> {
            param.map_or(Ok(default), |p| {
                p.parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad bit count `{p}`")))
            })
        };
        let variant = match name {
            "occurrence" | "occ" if param.is_none() => Variant::Occurrence,
            "occurrence-halved" | "halved" | "occh" if param.is_none() => Variant::OccurrenceHalved,
            "count" => Variant::Count {
                bits: bits(Self::DEFAULT_COUNT_BITS)?,
            },
            "position" | "pos" => Variant::Position {
                bits: bits(Self::DEFAULT_POSITION_BITS)?,
            },
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown fingerprint variant `{s}`"
                )))
            }
        };
        variant.validate()?;
        Ok(variant)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fingerprint(u16);

impl Fingerprint {
    pub const fn from_bits(bits: u16) -> Self {
        Fingerprint(bits)
    }

    pub const fn bits(self) -> u16 {
        self.0
    }
}

impl std::ops::BitXor for Fingerprint {
    type Output = u16;

    fn bitxor(self, rhs: Self) -> u16 {
        self.0 ^ rhs.0
    }
}

/// A fingerprint variant bound to its letter set, with the per-symbol masks
/// used during construction.
#[derive(Clone)]
pub struct Scheme {
    variant: Variant,
    letters: LetterSet,
    // Occurrence: the letter's bit. Halved: its first-half bit. Count: the
    // lowest bit of its counter. Position: its trailing occurrence bit.
    primary: [u16; 256],
    // Halved: second-half bit. Count: the whole counter field.
    secondary: [u16; 256],
    // Position: (letter, shift of its field).
    position_fields: Vec<(u8, u32)>,
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scheme")
            .field("variant", &self.variant)
            .field("letters", &self.letters)
            .finish()
    }
}

impl Scheme {
    pub fn new(variant: Variant, letters: LetterSet) -> Result<Self> {
        variant.validate()?;
        let expected = variant.letter_count();
        if letters.len() != expected {
            return Err(Error::LetterCount {
                variant,
                expected,
                actual: letters.len(),
            });
        }

        let mut primary = [0u16; 256];
        let mut secondary = [0u16; 256];
        let mut position_fields = Vec::new();
        let top = |shift: u32| WIDTH_BITS - shift;
        for (slot, &c) in letters.symbols().iter().enumerate() {
            let slot = slot as u32;
            let c = c as usize;
            match variant {
                Variant::Occurrence => primary[c] = 1 << top(slot + 1),
                Variant::OccurrenceHalved => {
                    primary[c] = 1 << top(2 * slot + 1);
                    secondary[c] = 1 << top(2 * slot + 2);
                }
                Variant::Count { bits } => {
                    let b = bits as u32;
                    let shift = top(b * (slot + 1));
                    primary[c] = 1 << shift;
                    secondary[c] = (((1u32 << b) - 1) << shift) as u16;
                }
                Variant::Position { bits } => {
                    let (fields, rest) = Variant::position_split(bits);
                    if (slot as usize) < fields {
                        position_fields.push((c as u8, top(bits as u32 * (slot + 1))));
                    } else {
                        let j = slot as usize - fields;
                        primary[c] = 1 << (rest - 1 - j);
                    }
                }
            }
        }

        Ok(Scheme {
            variant,
            letters,
            primary,
            secondary,
            position_fields,
        })
    }

    /// Selects the letters for `variant` from a frequency table.
    pub fn from_frequencies(
        variant: Variant,
        freq: &SymbolFrequencyTable,
        strategy: LetterStrategy,
    ) -> Result<Self> {
        variant.validate()?;
        let letters = select_letters(freq, variant.letter_count(), strategy)?;
        Self::new(variant, letters)
    }

    /// The variant over the most common English letters.
    pub fn english(variant: Variant) -> Result<Self> {
        variant.validate()?;
        Self::new(variant, LetterSet::english(variant.letter_count())?)
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn letters(&self) -> &LetterSet {
        &self.letters
    }

    /// Fingerprint size in bytes.
    pub fn fingerprint_bytes(&self) -> usize {
        WIDTH_BITS as usize / 8
    }

    pub fn supports(&self, metric: Metric) -> bool {
        self.variant.supports(metric)
    }

    pub fn build(&self, s: &[u8]) -> Fingerprint {
        match self.variant {
            Variant::Occurrence => self.build_occurrence(s),
            Variant::OccurrenceHalved => self.build_occurrence_halved(s),
            Variant::Count { .. } => self.build_count(s),
            Variant::Position { bits } => self.build_position(s, bits),
        }
    }

    fn build_occurrence(&self, s: &[u8]) -> Fingerprint {
        let mut fp = 0u16;
        for &c in s {
            fp |= self.primary[c as usize];
        }
        Fingerprint(fp)
    }

    fn build_occurrence_halved(&self, s: &[u8]) -> Fingerprint {
        let (first, second) = s.split_at(s.len() / 2);
        let mut fp = 0u16;
        for &c in first {
            fp |= self.primary[c as usize];
        }
        for &c in second {
            fp |= self.secondary[c as usize];
        }
        Fingerprint(fp)
    }

    fn build_count(&self, s: &[u8]) -> Fingerprint {
        let mut fp = 0u16;
        for &c in s {
            let field = self.secondary[c as usize];
            // Symbols outside the set have an empty field and never increment.
            if fp & field != field {
                fp = fp.wrapping_add(self.primary[c as usize]);
            }
        }
        Fingerprint(fp)
    }

    fn build_position(&self, s: &[u8], bits: u8) -> Fingerprint {
        let saturated = (1u32 << bits) - 1;
        // Anything at or past the saturated index encodes the same as absent.
        let prefix = &s[..s.len().min(saturated as usize)];
        let mut fp = 0u32;
        for &(c, shift) in &self.position_fields {
            let pos = prefix
                .iter()
                .position(|&x| x == c)
                .map_or(saturated, |p| p as u32);
            fp |= pos << shift;
        }
        let mut tail = 0u16;
        for &c in s {
            tail |= self.primary[c as usize];
        }
        Fingerprint(fp as u16 | tail)
    }

    /// (shift, width) of every field in slot order.
    pub(crate) fn fields(&self) -> Vec<(u32, u32)> {
        let slots = self.variant.letter_count() as u32;
        match self.variant {
            Variant::Occurrence => (0..slots).map(|q| (WIDTH_BITS - q - 1, 1)).collect(),
            Variant::OccurrenceHalved => (0..slots).map(|q| (WIDTH_BITS - 2 * q - 2, 2)).collect(),
            Variant::Count { bits } => {
                let b = bits as u32;
                (0..slots).map(|q| (WIDTH_BITS - b * (q + 1), b)).collect()
            }
            Variant::Position { bits } => {
                let (fields, rest) = Variant::position_split(bits);
                let p = bits as u32;
                (0..fields as u32)
                    .map(|q| (WIDTH_BITS - p * (q + 1), p))
                    .chain((0..rest as u32).rev().map(|shift| (shift, 1)))
                    .collect()
            }
        }
    }

    /// Binary rendering, slot 0 leftmost. Multi-bit fields are separated by
    /// spaces; occurrence fingerprints are printed as one run of 16 digits.
    pub fn render(&self, fp: Fingerprint) -> String {
        let sep = if self.variant == Variant::Occurrence {
            ""
        } else {
            " "
        };
        self.fields()
            .into_iter()
            .map(|(shift, width)| {
                let value = (fp.0 as u32 >> shift) & ((1 << width) - 1);
                format!("{value:0w$b}", w = width as usize)
            })
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// Lookup tables for comparing fingerprints of one scheme.
#[derive(Clone)]
pub struct ComparisonTables {
    popcount16: Box<[u8; TABLE_LEN]>,
    ceil_half: [u8; WIDTH_BITS as usize + 1],
    // Count and position: number of differing fields.
    field_mismatch: Option<Box<[u8; TABLE_LEN]>>,
}

impl fmt::Debug for ComparisonTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComparisonTables")
            .field("field_mismatch", &self.field_mismatch.is_some())
            .finish_non_exhaustive()
    }
}

fn zeroed_table() -> Box<[u8; TABLE_LEN]> {
    vec![0u8; TABLE_LEN]
        .into_boxed_slice()
        .try_into()
        .expect("table length")
}

impl ComparisonTables {
    pub fn new(scheme: &Scheme) -> Self {
        let mut popcount16 = zeroed_table();
        // popcount(x) = popcount(x >> 1) + (x & 1); entries below x are filled.
        for x in 1..TABLE_LEN {
            popcount16[x] = popcount16[x >> 1] + (x & 1) as u8;
        }

        let mut ceil_half = [0u8; WIDTH_BITS as usize + 1];
        for (d, v) in ceil_half.iter_mut().enumerate() {
            *v = d.div_ceil(2) as u8;
        }

        let field_mismatch = match scheme.variant() {
            Variant::Count { .. } | Variant::Position { .. } => {
                let fields: Vec<(u32, u32)> = scheme
                    .fields()
                    .into_iter()
                    .map(|(shift, width)| (shift, (1 << width) - 1))
                    .collect();
                let mut table = zeroed_table();
                for (x, v) in table.iter_mut().enumerate() {
                    let x = x as u32;
                    *v = fields.iter().filter(|&&(s, m)| (x >> s) & m != 0).count() as u8;
                }
                Some(table)
            }
            _ => None,
        };

        ComparisonTables {
            popcount16,
            ceil_half,
            field_mismatch,
        }
    }

    pub fn popcount16(&self) -> &[u8; TABLE_LEN] {
        &self.popcount16
    }

    pub fn ceil_half(&self) -> &[u8; WIDTH_BITS as usize + 1] {
        &self.ceil_half
    }

    /// Differing fields per xor value, for count and position schemes. A
    /// position field is a p-gram or a trailing occurrence bit.
    pub fn field_mismatch(&self) -> Option<&[u8; TABLE_LEN]> {
        self.field_mismatch.as_deref()
    }

    /// The table mapping an xor of two fingerprints to their distance.
    #[inline]
    pub fn distance_table(&self) -> &[u8; TABLE_LEN] {
        self.field_mismatch.as_deref().unwrap_or(&self.popcount16)
    }

    /// F_D: mismatching bits for occurrence fingerprints, mismatching fields
    /// for count and position fingerprints.
    #[inline]
    pub fn distance(&self, a: Fingerprint, b: Fingerprint) -> u32 {
        self.distance_table()[(a ^ b) as usize] as u32
    }

    /// The least number of edits compatible with fingerprint distance `fd`.
    #[inline]
    pub fn lower_bound(&self, fd: u32) -> u32 {
        self.ceil_half[fd as usize] as u32
    }

    /// True when the fingerprints alone prove the strings are more than `k`
    /// edits apart.
    #[inline]
    pub fn can_reject(&self, a: Fingerprint, b: Fingerprint, k: usize) -> bool {
        self.lower_bound(self.distance(a, b)) as usize > k
    }
}
