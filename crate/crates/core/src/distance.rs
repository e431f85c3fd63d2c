//! Bounded verifiers: early-exit Hamming and banded Levenshtein.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Hamming,
    Levenshtein,
}

impl Metric {
    pub const ALL: [Metric; 2] = [Metric::Hamming, Metric::Levenshtein];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Hamming => "hamming",
            Metric::Levenshtein => "levenshtein",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamming" | "ham" => Ok(Metric::Hamming),
            "levenshtein" | "lev" | "edit" => Ok(Metric::Levenshtein),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

/// Outcome of a distance computation capped at `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bounded {
    /// The exact distance, which is at most `k`.
    Within(usize),
    Exceeds,
}

impl Bounded {
    pub fn is_within(self) -> bool {
        matches!(self, Bounded::Within(_))
    }

    pub fn distance(self) -> Option<usize> {
        match self {
            Bounded::Within(d) => Some(d),
            Bounded::Exceeds => None,
        }
    }
}

/// Counts mismatches left to right and stops at the `k + 1`-th.
pub fn hamming_bounded(a: &[u8], b: &[u8], k: usize) -> Result<Bounded> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(hamming_bounded_unchecked(a, b, k))
}

/// [`hamming_bounded`] for callers that already know the lengths agree.
/// Extra bytes of the longer input are ignored.
#[inline]
pub fn hamming_bounded_unchecked(a: &[u8], b: &[u8], k: usize) -> Bounded {
    let mut mismatches = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            mismatches += 1;
            if mismatches > k {
                return Bounded::Exceeds;
            }
        }
    }
    Bounded::Within(mismatches)
}

const INF: u32 = u32::MAX / 2;

// Bands up to this many cells are kept on the stack.
const STACK_BAND: usize = 32;

/// Levenshtein distance restricted to the diagonals `|i - j| <= k`, keeping
/// only the previous and current row of the band.
pub fn levenshtein_bounded(a: &[u8], b: &[u8], k: usize) -> Bounded {
    let (n, m) = (a.len(), b.len());
    if n.abs_diff(m) > k {
        return Bounded::Exceeds;
    }
    if k == 0 {
        return if a == b {
            Bounded::Within(0)
        } else {
            Bounded::Exceeds
        };
    }
    // A band wider than both strings covers the whole matrix.
    let k = k.min(n.max(m));
    let width = 2 * k + 1;
    // One extra INF cell past the band on each row.
    if width < STACK_BAND {
        let mut rows = [INF; 2 * STACK_BAND];
        let (prev, cur) = rows.split_at_mut(STACK_BAND);
        banded(a, b, k, prev, cur)
    } else {
        let mut prev = vec![INF; width + 1];
        let mut cur = vec![INF; width + 1];
        banded(a, b, k, &mut prev, &mut cur)
    }
}

// Cell (i, j) lives at band index d = j - i + k. Its diagonal predecessor
// (i-1, j-1) is prev[d], the cell above (i-1, j) is prev[d+1], and the cell
// to the left (i, j-1) is cur[d-1].
fn banded(a: &[u8], b: &[u8], k: usize, prev: &mut [u32], cur: &mut [u32]) -> Bounded {
    let (n, m) = (a.len(), b.len());
    let width = 2 * k + 1;
    let mut prev = &mut prev[..=width];
    let mut cur = &mut cur[..=width];

    for (d, cell) in prev.iter_mut().enumerate().take(width) {
        // Row 0: j = d - k.
        *cell = match d.checked_sub(k) {
            Some(j) if j <= m => j as u32,
            _ => INF,
        };
    }
    prev[width] = INF;
    cur[width] = INF;

    for i in 1..=n {
        let ai = a[i - 1];
        let mut row_min = INF;
        for d in 0..width {
            let j = (i + d).wrapping_sub(k);
            let value = if i + d < k || j > m {
                INF
            } else if j == 0 {
                i as u32
            } else {
                let sub = prev[d] + (ai != b[j - 1]) as u32;
                let del = prev[d + 1] + 1;
                let ins = if d > 0 { cur[d - 1] + 1 } else { INF };
                sub.min(del).min(ins)
            };
            cur[d] = value.min(INF);
            row_min = row_min.min(cur[d]);
        }
        if row_min as usize > k {
            return Bounded::Exceeds;
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    let result = prev[m + k - n] as usize;
    if result <= k {
        Bounded::Within(result)
    } else {
        Bounded::Exceeds
    }
}

/// Dispatches to the bounded verifier for `metric`.
pub fn bounded_distance(metric: Metric, a: &[u8], b: &[u8], k: usize) -> Result<Bounded> {
    match metric {
        Metric::Hamming => hamming_bounded(a, b, k),
        Metric::Levenshtein => Ok(levenshtein_bounded(a, b, k)),
    }
}
