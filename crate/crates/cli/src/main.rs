mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fprint_core::bench::{
    emit_figure_data, BenchConfig, BenchReport, Dataset, SweepConfig, Workload, DEFAULT_ITERATIONS,
    DEFAULT_QUERIES,
};
use fprint_core::letters::ENGLISH_FREQUENCIES;
use fprint_core::oracle::naive_scan;
use fprint_core::workload::{corpus_stats, generate_synthetic, read_wordlist, Distortion};
use fprint_core::{LetterStrategy, Metric, QueryOptions, Variant};

use crate::output::Format;

/// Fingerprint-filtered approximate keyword matching: corpus tools and
/// benchmarks.
#[derive(Debug, Parser)]
#[command(name = "fprint", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Word count, byte size and length histogram of a word list.
    Stats {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write a synthetic corpus drawn from English letter frequencies.
    Gen {
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000_000)]
        bytes: usize,
        #[arg(long)]
        word_length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time naive against fingerprint-filtered queries.
    Bench(BenchArgs),
    /// Produce comparison time against word size on synthetic data.
    Sweep(SweepArgs),
    /// Cross-check filtered queries against the reference scan.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
struct DatasetArgs {
    /// Newline-separated word list.
    #[arg(long, conflicts_with = "synthetic")]
    dict: Option<PathBuf>,
    /// Generate this many bytes of synthetic English words instead.
    #[arg(long, requires = "word_length")]
    synthetic: Option<usize>,
    /// Keep only words of this length (the generated length for synthetic
    /// data).
    #[arg(long)]
    word_length: Option<usize>,
}

impl DatasetArgs {
    fn dataset(&self) -> anyhow::Result<Dataset> {
        match (&self.dict, self.synthetic, self.word_length) {
            (Some(path), _, _) => Ok(Dataset::File { path: path.clone() }),
            (None, Some(total_bytes), Some(word_length)) => Ok(Dataset::Synthetic {
                total_bytes,
                word_length,
            }),
            _ => bail!("pass --dict or --synthetic with --word-length"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MetricArg {
    Hamming,
    Levenshtein,
    Both,
}

impl MetricArg {
    fn metrics(self) -> Vec<Metric> {
        match self {
            MetricArg::Hamming => vec![Metric::Hamming],
            MetricArg::Levenshtein => vec![Metric::Levenshtein],
            MetricArg::Both => Metric::ALL.to_vec(),
        }
    }
}

/// `all` or a comma-separated list.
fn parse_variants(s: &str) -> anyhow::Result<Vec<Variant>> {
    if s == "all" {
        return Ok(Variant::ALL.to_vec());
    }
    s.split(',')
        .map(|v| v.trim().parse().map_err(Into::into))
        .collect()
}

fn parse_strategies(s: &str) -> anyhow::Result<Vec<LetterStrategy>> {
    if s == "all" {
        return Ok(LetterStrategy::ALL.to_vec());
    }
    s.split(',')
        .map(|v| v.trim().parse().map_err(Into::into))
        .collect()
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, value_enum, default_value_t = MetricArg::Hamming)]
    metric: MetricArg,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// occurrence, occurrence-halved, count[:bits], position[:bits], a
    /// comma-separated list, or `all`.
    #[arg(long, default_value = "occurrence")]
    scheme: String,
    /// common, mixed, rare, a comma-separated list, or `all`.
    #[arg(long, default_value = "common")]
    letters: String,
    #[arg(long, default_value_t = DEFAULT_QUERIES)]
    queries: usize,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iterations: usize,
    /// Maximum substitutions per query, each applied with probability 0.5.
    #[arg(long, default_value_t = 0)]
    distort: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip words whose length differs from the query's by more than k
    /// (Levenshtein only; Hamming always requires equal lengths).
    #[arg(long)]
    length_filter: bool,
    /// Use these queries instead of sampling the dictionary.
    #[arg(long)]
    queries_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Word sizes as `from-to` or a comma-separated list.
    #[arg(long, default_value = "6-30")]
    sizes: String,
    #[arg(long, default_value = "occurrence,count,position")]
    scheme: String,
    #[arg(long, default_value = "all")]
    letters: String,
    /// Bytes of synthetic data per word size.
    #[arg(long, default_value_t = 1_000_000)]
    bytes: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 3)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    data: DatasetArgs,
    #[arg(long, value_enum, default_value_t = MetricArg::Both)]
    metric: MetricArg,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "all")]
    scheme: String,
    #[arg(long, default_value = "all")]
    letters: String,
    #[arg(long, default_value_t = 100)]
    queries: usize,
    #[arg(long, default_value_t = 1)]
    distort: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    length_filter: bool,
}

fn parse_sizes(s: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((from, to)) = s.split_once('-') {
        let from: usize = from.trim().parse().context("bad size range")?;
        let to: usize = to.trim().parse().context("bad size range")?;
        if from == 0 || from > to {
            bail!("bad size range `{s}`");
        }
        return Ok((from..=to).collect());
    }
    s.split(',')
        .map(|v| v.trim().parse().context("bad word size"))
        .collect()
}

/// Every (variant, strategy, metric) cell. Unsupported combinations are
/// dropped when more than one cell was asked for.
fn cells(
    variants: &[Variant],
    strategies: &[LetterStrategy],
    metrics: &[Metric],
) -> anyhow::Result<Vec<(Variant, LetterStrategy, Metric)>> {
    let all: Vec<_> = metrics
        .iter()
        .flat_map(|&m| {
            variants
                .iter()
                .flat_map(move |&v| strategies.iter().map(move |&s| (v, s, m)))
        })
        .collect();
    let single = all.len() == 1;
    let supported: Vec<_> = all.into_iter().filter(|&(v, _, m)| v.supports(m)).collect();
    if supported.is_empty() {
        if single {
            let (v, _, m) = (variants[0], strategies[0], metrics[0]);
            bail!("{v} fingerprints cannot filter for {m} distance");
        }
        bail!("no supported (scheme, metric) combination selected");
    }
    Ok(supported)
}

fn bench(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let mut config = BenchConfig::new(args.data.dataset()?);
    config.word_length = args.data.word_length;
    config.k = args.k;
    config.queries = args.queries;
    config.iterations = args.iterations;
    config.distortion = Distortion::new(args.distort);
    config.seed = args.seed;
    config.length_filter = args.length_filter;
    config.queries_file = args.queries_file;

    let cells = cells(
        &parse_variants(&args.scheme)?,
        &parse_strategies(&args.letters)?,
        &args.metric.metrics(),
    )?;
    // Validate the numeric parameters before loading anything.
    config.variant = cells[0].0;
    config.metric = cells[0].2;
    config.validate()?;
    let workload = Workload::prepare(&config)?;

    let stdout = io::stdout();
    let mut sink = output::ReportSink::new(stdout.lock(), args.format);
    let mut all_agree = true;
    for (variant, strategy, metric) in cells {
        config.variant = variant;
        config.strategy = strategy;
        config.metric = metric;
        let report: BenchReport = workload.run(&config)?;
        all_agree &= report.paths_agree;
        sink.bench(&report)?;
    }
    sink.finish()?;
    if !all_agree {
        eprintln!("error: naive and filtered paths returned different matches");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> anyhow::Result<()> {
    let variants = parse_variants(&args.scheme)?;
    if let Some(v) = variants.iter().find(|v| !v.supports(Metric::Hamming)) {
        bail!("{v} fingerprints cannot filter for hamming distance");
    }
    let sweep = SweepConfig {
        sizes: parse_sizes(&args.sizes)?,
        variants,
        strategies: parse_strategies(&args.letters)?,
        total_bytes: args.bytes,
        metric: Metric::Hamming,
        k: args.k,
        queries: args.queries,
        iterations: args.iterations,
        seed: args.seed,
    };
    let rows = emit_figure_data(&sweep)?;
    let stdout = io::stdout();
    let mut sink = output::ReportSink::new(stdout.lock(), args.format);
    for row in &rows {
        sink.sweep(row)?;
    }
    sink.finish()?;
    Ok(())
}

fn check(args: CheckArgs) -> anyhow::Result<ExitCode> {
    let mut config = BenchConfig::new(args.data.dataset()?);
    config.word_length = args.data.word_length;
    config.queries = args.queries;
    config.distortion = Distortion::new(args.distort);
    config.seed = args.seed;
    config.iterations = 1;
    let workload = Workload::prepare(&config)?;
    let cells = cells(
        &parse_variants(&args.scheme)?,
        &parse_strategies(&args.letters)?,
        &args.metric.metrics(),
    )?;

    let mut failures = 0;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (variant, strategy, metric) in cells {
        let letters =
            fprint_core::select_letters(&workload.frequencies, variant.letter_count(), strategy)?;
        let scheme = fprint_core::Scheme::new(variant, letters)?;
        let dict = fprint_core::build_dictionary(&workload.words, scheme);
        let opts = QueryOptions::new(args.k, metric).length_filter(args.length_filter);
        let mut mismatched = 0;
        for q in &workload.queries {
            let fast = dict.query_with(q, &opts)?.matches;
            if fast != naive_scan(&workload.words, q, args.k, metric) {
                mismatched += 1;
            }
        }
        let verdict = if mismatched == 0 { "ok" } else { "MISMATCH" };
        writeln!(
            out,
            "{verdict:<8} {variant:<18} {strategy:<7} {metric:<11} k={} queries={} mismatched={mismatched}",
            args.k,
            workload.queries.len()
        )?;
        failures += mismatched;
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Stats { dict, format } => {
            let words = read_wordlist(&dict)?;
            let stats = corpus_stats(&words)?;
            let stdout = io::stdout();
            output::write_stats(stdout.lock(), &stats, format)?;
        }
        Command::Gen {
            out,
            bytes,
            word_length,
            seed,
        } => {
            let words = generate_synthetic(bytes, word_length, &ENGLISH_FREQUENCIES, seed)?;
            let mut buf = Vec::with_capacity(words.len() * (word_length + 1));
            for w in &words {
                buf.extend_from_slice(w);
                buf.push(b'\n');
            }
            match out {
                Some(path) => std::fs::write(&path, buf)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => io::stdout().lock().write_all(&buf)?,
            }
        }
        Command::Bench(args) => return bench(args),
        Command::Sweep(args) => sweep(args)?,
        Command::Check(args) => return check(args),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
