//! Timed comparison of the naive and fingerprint-filtered query paths.
//!
//! A run builds the dictionary (timing construction, lookup tables
//! included), then scans every query against it `iterations` times along
//! both paths. Times are reported per compared word pair.

use std::hint::black_box;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::dictionary::{FingerprintedDictionary, QueryOptions, QueryResult, QueryStats};
use crate::distance::Metric;
use crate::error::{Error, Result};
use crate::fingerprint::{Scheme, Variant};
use crate::letters::{select_letters, LetterStrategy, SymbolFrequencyTable, ENGLISH_FREQUENCIES};
use crate::workload::{
    filter_length, generate_synthetic, read_wordlist, sample_queries, Distortion,
};

pub const DEFAULT_QUERIES: usize = 1000;
pub const DEFAULT_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Dataset {
    /// A newline-separated word list.
    File { path: PathBuf },
    /// Words drawn from the English letter frequencies.
    Synthetic {
        total_bytes: usize,
        word_length: usize,
    },
}

impl Dataset {
    pub fn name(&self) -> String {
        match self {
            Dataset::File { path } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            Dataset::Synthetic { .. } => "synthetic-eng".to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub dataset: Dataset,
    /// Keep only words (and file-supplied queries) of this length.
    pub word_length: Option<usize>,
    pub metric: Metric,
    pub k: usize,
    pub variant: Variant,
    pub strategy: LetterStrategy,
    pub queries: usize,
    pub iterations: usize,
    pub distortion: Distortion,
    pub seed: u64,
    /// Levenshtein length pre-filter.
    pub length_filter: bool,
    /// Read queries from this file instead of sampling the dictionary.
    pub queries_file: Option<PathBuf>,
}

impl BenchConfig {
    pub fn new(dataset: Dataset) -> Self {
        BenchConfig {
            dataset,
            word_length: None,
            metric: Metric::Hamming,
            k: 1,
            variant: Variant::Occurrence,
            strategy: LetterStrategy::Common,
            queries: DEFAULT_QUERIES,
            iterations: DEFAULT_ITERATIONS,
            distortion: Distortion::NONE,
            seed: 0,
            length_filter: false,
            queries_file: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.queries == 0 && self.queries_file.is_none() {
            return Err(Error::InvalidParameter("need at least one query".into()));
        }
        if self.iterations == 0 {
            return Err(Error::InvalidParameter(
                "need at least one iteration".into(),
            ));
        }
        if !self.variant.supports(self.metric) {
            return Err(Error::UnsupportedMetric {
                variant: self.variant,
                metric: self.metric,
            });
        }
        Ok(())
    }
}

/// Where and on what the benchmark ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub os: &'static str,
    pub arch: &'static str,
    pub threads_available: usize,
    pub version: &'static str,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            threads_available: std::thread::available_parallelism().map_or(1, |n| n.get()),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub dataset: String,
    pub variant: Variant,
    pub strategy: LetterStrategy,
    pub letters: String,
    pub metric: Metric,
    pub k: usize,
    pub word_length: Option<usize>,
    pub words: usize,
    pub queries: usize,
    pub iterations: usize,
    /// Length-compatible (query, word) pairs in one pass over the queries.
    pub pairs: u64,
    /// Mean naive time per pair, in nanoseconds.
    pub naive_ns: f64,
    /// Mean fingerprint-path time per pair, in nanoseconds.
    pub filtered_ns: f64,
    pub speedup: f64,
    pub rejection_pct: f64,
    pub construction_mbps: f64,
    pub naive_matches: u64,
    pub filtered_matches: u64,
    /// Every query returned the same match list along both paths.
    pub paths_agree: bool,
    /// Filter statistics of one pass of the fingerprint path.
    pub stats: QueryStats,
    pub environment: Environment,
}

impl BenchReport {
    pub const CSV_HEADER: [&'static str; 12] = [
        "dataset",
        "variant",
        "strategy",
        "metric",
        "k",
        "word_length",
        "T_n_ns",
        "T_f_ns",
        "speedup",
        "rejection_pct",
        "construction_mbps",
        "matches",
    ];

    pub fn csv_record(&self) -> [String; 12] {
        [
            self.dataset.clone(),
            self.variant.to_string(),
            self.strategy.to_string(),
            self.metric.to_string(),
            self.k.to_string(),
            self.word_length.map(|l| l.to_string()).unwrap_or_default(),
            format!("{:.3}", self.naive_ns),
            format!("{:.3}", self.filtered_ns),
            format!("{:.3}", self.speedup),
            format!("{:.2}", self.rejection_pct),
            format!("{:.2}", self.construction_mbps),
            self.filtered_matches.to_string(),
        ]
    }
}

/// Dictionary words and queries loaded for one or more benchmark cells.
#[derive(Debug, Clone)]
pub struct Workload {
    pub name: String,
    pub word_length: Option<usize>,
    pub words: Vec<Vec<u8>>,
    pub queries: Vec<Vec<u8>>,
    pub frequencies: SymbolFrequencyTable,
}

// Keeps the query stream independent of the synthetic corpus stream.
const QUERY_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

impl Workload {
    pub fn prepare(config: &BenchConfig) -> Result<Self> {
        let mut words = match &config.dataset {
            Dataset::File { path } => read_wordlist(path)?,
            Dataset::Synthetic {
                total_bytes,
                word_length,
            } => generate_synthetic(
                *total_bytes,
                *word_length,
                &ENGLISH_FREQUENCIES,
                config.seed,
            )?,
        };
        if let Some(len) = config.word_length {
            words = filter_length(words, len);
        }
        if words.is_empty() {
            return Err(Error::Empty("dictionary"));
        }
        let queries = match &config.queries_file {
            Some(path) => {
                let mut queries = read_wordlist(path)?;
                if let Some(len) = config.word_length {
                    queries = filter_length(queries, len);
                }
                if queries.is_empty() {
                    return Err(Error::Empty("query file"));
                }
                queries
            }
            None => sample_queries(
                &words,
                config.queries,
                config.distortion,
                config.seed ^ QUERY_SEED_SALT,
            )?,
        };
        let frequencies = SymbolFrequencyTable::from_words(&words);
        Ok(Workload {
            name: config.dataset.name(),
            word_length: config.word_length,
            words,
            queries,
            frequencies,
        })
    }

    pub fn total_bytes(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Runs the cell described by `config`'s variant, strategy, metric and
    /// k. The dataset fields of `config` are ignored.
    pub fn run(&self, config: &BenchConfig) -> Result<BenchReport> {
        config.validate()?;
        let letters = select_letters(
            &self.frequencies,
            config.variant.letter_count(),
            config.strategy,
        )?;

        let mut build_time = Duration::ZERO;
        let mut dict = None;
        for _ in 0..config.iterations {
            let start = Instant::now();
            let scheme = Scheme::new(config.variant, letters.clone())?;
            let built = FingerprintedDictionary::build(&self.words, scheme);
            build_time += start.elapsed();
            dict = Some(black_box(built));
        }
        let dict = dict.expect("at least one iteration");
        let build_secs = build_time.as_secs_f64() / config.iterations as f64;
        let construction_mbps = dict.total_bytes() as f64 / build_secs / 1e6;

        let base = QueryOptions::new(config.k, config.metric).length_filter(config.length_filter);
        let naive_opts = base.use_filter(false);
        let filtered_opts = base.use_filter(true);

        // Untimed pass: correctness cross-check and filter statistics.
        let mut stats = QueryStats::default();
        let mut naive_matches = 0;
        let mut paths_agree = true;
        let mut pairs = 0;
        for q in &self.queries {
            let naive = dict.query_with(q, &naive_opts)?;
            let filtered = dict.query_with(q, &filtered_opts)?;
            naive_matches += naive.stats.matches;
            paths_agree &= naive.matches == filtered.matches;
            pairs += filtered.stats.compared - filtered.stats.rejected_by_length;
            stats += filtered.stats;
        }

        let mut naive_time = Duration::ZERO;
        let mut filtered_time = Duration::ZERO;
        for _ in 0..config.iterations {
            naive_time += time_pass(&dict, &self.queries, &naive_opts)?;
            filtered_time += time_pass(&dict, &self.queries, &filtered_opts)?;
        }
        let total_pairs = (pairs * config.iterations as u64) as f64;
        let naive_ns = naive_time.as_nanos() as f64 / total_pairs;
        let filtered_ns = filtered_time.as_nanos() as f64 / total_pairs;

        Ok(BenchReport {
            dataset: self.name.clone(),
            variant: config.variant,
            strategy: config.strategy,
            letters: dict.scheme().letters().to_string(),
            metric: config.metric,
            k: config.k,
            word_length: self.word_length,
            words: dict.len(),
            queries: self.queries.len(),
            iterations: config.iterations,
            pairs,
            naive_ns,
            filtered_ns,
            speedup: naive_ns / filtered_ns,
            rejection_pct: stats.rejection_rate().map_or(f64::NAN, |r| 100.0 * r),
            construction_mbps,
            naive_matches,
            filtered_matches: stats.matches,
            paths_agree,
            stats,
            environment: Environment::current(),
        })
    }
}

fn time_pass(
    dict: &FingerprintedDictionary,
    queries: &[Vec<u8>],
    opts: &QueryOptions,
) -> Result<Duration> {
    let start = Instant::now();
    for q in queries {
        let result: QueryResult = dict.query_with(black_box(q), opts)?;
        black_box(result);
    }
    Ok(start.elapsed())
}

/// Loads the dataset and runs one benchmark cell.
pub fn run_benchmark(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    Workload::prepare(config)?.run(config)
}

/// Parameters for the comparison-time-versus-word-size sweep over
/// synthetic English data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub sizes: Vec<usize>,
    pub variants: Vec<Variant>,
    pub strategies: Vec<LetterStrategy>,
    pub total_bytes: usize,
    pub metric: Metric,
    pub k: usize,
    pub queries: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sizes: (6..=30).collect(),
            variants: vec![Variant::Occurrence, Variant::count(), Variant::position()],
            strategies: LetterStrategy::ALL.to_vec(),
            total_bytes: 1_000_000,
            metric: Metric::Hamming,
            k: 1,
            queries: 100,
            iterations: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub word_size: usize,
    pub variant: Variant,
    pub strategy: LetterStrategy,
    pub naive_ns: f64,
    pub filtered_ns: f64,
    pub speedup: f64,
    pub rejection_pct: f64,
}

impl SweepRow {
    pub const CSV_HEADER: [&'static str; 7] = [
        "word_size",
        "variant",
        "strategy",
        "T_n_ns",
        "T_f_ns",
        "speedup",
        "rejection_pct",
    ];

    pub fn csv_record(&self) -> [String; 7] {
        [
            self.word_size.to_string(),
            self.variant.to_string(),
            self.strategy.to_string(),
            format!("{:.3}", self.naive_ns),
            format!("{:.3}", self.filtered_ns),
            format!("{:.3}", self.speedup),
            format!("{:.2}", self.rejection_pct),
        ]
    }
}

/// One row per (word size, variant, strategy). Each word size gets its own
/// synthetic corpus and query set, shared by all cells of that size.
pub fn emit_figure_data(sweep: &SweepConfig) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &size in &sweep.sizes {
        let mut config = BenchConfig::new(Dataset::Synthetic {
            total_bytes: sweep.total_bytes,
            word_length: size,
        });
        config.metric = sweep.metric;
        config.k = sweep.k;
        config.queries = sweep.queries;
        config.iterations = sweep.iterations;
        config.seed = sweep.seed;
        let workload = Workload::prepare(&config)?;
        for &variant in &sweep.variants {
            for &strategy in &sweep.strategies {
                config.variant = variant;
                config.strategy = strategy;
                let report = workload.run(&config)?;
                rows.push(SweepRow {
                    word_size: size,
                    variant,
                    strategy,
                    naive_ns: report.naive_ns,
                    filtered_ns: report.filtered_ns,
                    speedup: report.speedup,
                    rejection_pct: report.rejection_pct,
                });
            }
        }
    }
    Ok(rows)
}
