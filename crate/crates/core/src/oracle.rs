//! Slow reference implementations. They share no code with the fast paths
//! and exist to cross-check them, in tests and from the CLI.

use crate::distance::Metric;
use crate::error::{Error, Result};
use crate::fingerprint::{Fingerprint, Scheme, Variant};

/// Full O(|a|·|b|) Levenshtein dynamic program.
pub fn levenshtein_full(a: &[u8], b: &[u8]) -> usize {
    let mut matrix = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in matrix[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            matrix[i][j] = (matrix[i - 1][j - 1] + cost)
                .min(matrix[i - 1][j] + 1)
                .min(matrix[i][j - 1] + 1);
        }
    }
    matrix[a.len()][b.len()]
}

/// Mismatch count over the whole string, no early exit.
pub fn hamming_full(a: &[u8], b: &[u8]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok((0..a.len()).filter(|&i| a[i] != b[i]).count())
}

/// Indices of every word within `k` of `pattern`, verified one by one.
pub fn naive_scan<W: AsRef<[u8]>>(
    words: &[W],
    pattern: &[u8],
    k: usize,
    metric: Metric,
) -> Vec<usize> {
    words
        .iter()
        .enumerate()
        .filter(|(_, w)| {
            let w = w.as_ref();
            match metric {
                Metric::Hamming => hamming_full(w, pattern).is_ok_and(|d| d <= k),
                Metric::Levenshtein => levenshtein_full(w, pattern) <= k,
            }
        })
        .map(|(i, _)| i)
        .collect()
}

/// Fingerprint distance computed field by field from the scheme's layout,
/// without lookup tables.
pub fn fingerprint_distance_reference(a: Fingerprint, b: Fingerprint, scheme: &Scheme) -> u32 {
    let x = a.bits() ^ b.bits();
    match scheme.variant() {
        Variant::Count { .. } | Variant::Position { .. } => scheme
            .fields()
            .into_iter()
            .filter(|&(shift, width)| (x as u32 >> shift) & ((1 << width) - 1) != 0)
            .count() as u32,
        _ => (0..16).filter(|bit| x >> bit & 1 == 1).count() as u32,
    }
}
