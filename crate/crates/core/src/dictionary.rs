//! A word collection with one fingerprint per word, queried by
//! filter-then-verify.

use std::collections::BTreeMap;
use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::distance::{hamming_bounded_unchecked, levenshtein_bounded, Bounded, Metric};
use crate::error::{Error, Result};
use crate::fingerprint::{ComparisonTables, Fingerprint, Scheme};

/// Per-query filter bookkeeping.
///
/// `compared == rejected_by_length + rejected_by_fingerprint + verified`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    pub compared: u64,
    pub rejected_by_length: u64,
    pub rejected_by_fingerprint: u64,
    pub verified: u64,
    pub matches: u64,
}

impl QueryStats {
    /// Fraction of length-compatible words the fingerprint rejected, or
    /// `None` when no word reached the fingerprint stage.
    pub fn rejection_rate(&self) -> Option<f64> {
        let candidates = self.compared - self.rejected_by_length;
        (candidates > 0).then(|| self.rejected_by_fingerprint as f64 / candidates as f64)
    }

    pub fn is_consistent(&self) -> bool {
        self.compared == self.rejected_by_length + self.rejected_by_fingerprint + self.verified
            && self.matches <= self.verified
    }
}

impl AddAssign for QueryStats {
    fn add_assign(&mut self, rhs: Self) {
        self.compared += rhs.compared;
        self.rejected_by_length += rhs.rejected_by_length;
        self.rejected_by_fingerprint += rhs.rejected_by_fingerprint;
        self.verified += rhs.verified;
        self.matches += rhs.matches;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOptions {
    pub k: usize,
    pub metric: Metric,
    pub use_filter: bool,
    /// Skip words whose length differs from the pattern's by more than `k`.
    /// Hamming queries always do this.
    pub length_filter: bool,
}

impl QueryOptions {
    pub fn new(k: usize, metric: Metric) -> Self {
        QueryOptions {
            k,
            metric,
            use_filter: true,
            length_filter: false,
        }
    }

    pub fn use_filter(mut self, on: bool) -> Self {
        self.use_filter = on;
        self
    }

    pub fn length_filter(mut self, on: bool) -> Self {
        self.length_filter = on;
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryResult {
    /// Matching word indices in input order.
    pub matches: Vec<usize>,
    pub stats: QueryStats,
}

// Words of one length, packed back to back.
#[derive(Debug, Clone)]
struct LengthGroup {
    len: usize,
    data: Vec<u8>,
    fingerprints: Vec<Fingerprint>,
    ids: Vec<u32>,
}

impl LengthGroup {
    #[inline]
    fn word(&self, slot: usize) -> &[u8] {
        &self.data[slot * self.len..(slot + 1) * self.len]
    }
}

#[derive(Debug, Clone)]
pub struct FingerprintedDictionary {
    scheme: Scheme,
    tables: ComparisonTables,
    groups: Vec<LengthGroup>,
    // Input index -> (group, slot).
    locations: Vec<(u32, u32)>,
    total_bytes: usize,
}

impl FingerprintedDictionary {
    /// Fingerprints every word and builds the comparison tables.
    pub fn build<I, W>(words: I, scheme: Scheme) -> Self
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u8]>,
    {
        let tables = ComparisonTables::new(&scheme);
        let mut group_of_len: BTreeMap<usize, usize> = BTreeMap::new();
        let mut groups: Vec<LengthGroup> = Vec::new();
        let mut locations = Vec::new();
        let mut total_bytes = 0;

        for (id, word) in words.into_iter().enumerate() {
            let word = word.as_ref();
            let g = *group_of_len.entry(word.len()).or_insert_with(|| {
                groups.push(LengthGroup {
                    len: word.len(),
                    data: Vec::new(),
                    fingerprints: Vec::new(),
                    ids: Vec::new(),
                });
                groups.len() - 1
            });
            let group = &mut groups[g];
            locations.push((g as u32, group.ids.len() as u32));
            group.data.extend_from_slice(word);
            group.fingerprints.push(scheme.build(word));
            group.ids.push(id as u32);
            total_bytes += word.len();
        }

        FingerprintedDictionary {
            scheme,
            tables,
            groups,
            locations,
            total_bytes,
        }
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn tables(&self) -> &ComparisonTables {
        &self.tables
    }

    /// Bytes of word data, excluding fingerprints and tables.
    pub fn total_bytes(&self) -> usize {
        self.total_bytes
    }

    /// Bytes spent on fingerprints.
    pub fn fingerprint_bytes(&self) -> usize {
        self.len() * self.scheme.fingerprint_bytes()
    }

    pub fn word(&self, index: usize) -> &[u8] {
        let (g, slot) = self.locations[index];
        self.groups[g as usize].word(slot as usize)
    }

    pub fn fingerprint(&self, index: usize) -> Fingerprint {
        let (g, slot) = self.locations[index];
        self.groups[g as usize].fingerprints[slot as usize]
    }

    /// Words in input order.
    pub fn words(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        (0..self.len()).map(|i| self.word(i))
    }

    /// Convenience wrapper around [`query_with`](Self::query_with) without
    /// the Levenshtein length pre-filter.
    pub fn query(
        &self,
        pattern: &[u8],
        k: usize,
        metric: Metric,
        use_filter: bool,
    ) -> Result<QueryResult> {
        self.query_with(
            pattern,
            &QueryOptions::new(k, metric).use_filter(use_filter),
        )
    }

    /// Finds every word within `opts.k` of `pattern`. The pattern is
    /// fingerprinted once and compared against each candidate; words the
    /// fingerprint cannot rule out are verified explicitly. The match set
    /// does not depend on `opts.use_filter`.
    pub fn query_with(&self, pattern: &[u8], opts: &QueryOptions) -> Result<QueryResult> {
        if opts.use_filter && !self.scheme.supports(opts.metric) {
            return Err(Error::UnsupportedMetric {
                variant: self.scheme.variant(),
                metric: opts.metric,
            });
        }
        let query_fp = opts.use_filter.then(|| self.scheme.build(pattern));
        let mut result = QueryResult::default();
        result.stats.compared = self.len() as u64;

        let length_ok = |len: usize| match opts.metric {
            Metric::Hamming => len == pattern.len(),
            Metric::Levenshtein => !opts.length_filter || len.abs_diff(pattern.len()) <= opts.k,
        };
        let mut scanned_groups = 0;
        for group in &self.groups {
            if length_ok(group.len) {
                self.scan_group(group, pattern, query_fp, opts, &mut result);
                scanned_groups += 1;
            } else {
                result.stats.rejected_by_length += group.ids.len() as u64;
            }
        }
        if scanned_groups > 1 {
            result.matches.sort_unstable();
        }
        Ok(result)
    }

    fn scan_group(
        &self,
        group: &LengthGroup,
        pattern: &[u8],
        query_fp: Option<Fingerprint>,
        opts: &QueryOptions,
        out: &mut QueryResult,
    ) {
        let k = opts.k;
        let distance = self.tables.distance_table();
        let ceil_half = self.tables.ceil_half();
        for (slot, &fp) in group.fingerprints.iter().enumerate() {
            if let Some(q) = query_fp {
                let fd = distance[(q ^ fp) as usize];
                if ceil_half[fd as usize] as usize > k {
                    out.stats.rejected_by_fingerprint += 1;
                    continue;
                }
            }
            out.stats.verified += 1;
            let word = group.word(slot);
            let outcome = match opts.metric {
                Metric::Hamming => hamming_bounded_unchecked(word, pattern, k),
                Metric::Levenshtein => levenshtein_bounded(word, pattern, k),
            };
            if let Bounded::Within(_) = outcome {
                out.stats.matches += 1;
                out.matches.push(group.ids[slot] as usize);
            }
        }
    }
}

/// Builds a [`FingerprintedDictionary`] of `words` under `scheme`.
pub fn build_dictionary<I, W>(words: I, scheme: Scheme) -> FingerprintedDictionary
where
    I: IntoIterator<Item = W>,
    W: AsRef<[u8]>,
{
    FingerprintedDictionary::build(words, scheme)
}
