//! Acceptance suite. Prints one line per criterion and exits non-zero if a
//! hard criterion fails. Speed and throughput floors only warn.
//!
//! The rejection-rate dataset defaults to the bundled length-9 word list;
//! set `FPRINT_WORDLIST` to use another newline-separated list.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use fprint_core::bench::{run_benchmark, BenchConfig, BenchReport, Dataset};
use fprint_core::letters::ENGLISH_FREQUENCIES;
use fprint_core::oracle::{hamming_full, levenshtein_full, naive_scan};
use fprint_core::workload::{generate_synthetic, sample_queries, Distortion};
use fprint_core::{
    build_dictionary, compute_frequencies, hamming_bounded, levenshtein_bounded, Bounded,
    ComparisonTables, LetterSet, LetterStrategy, Metric, QueryOptions, Scheme, Variant,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Level {
    Pass,
    Warn,
    Fail,
}

struct Outcome {
    level: Level,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        let level = if ok { Level::Pass } else { Level::Fail };
        Outcome { level, detail }
    }

    fn warn_unless(ok: bool, detail: String) -> Self {
        let level = if ok { Level::Pass } else { Level::Warn };
        Outcome { level, detail }
    }
}

fn all_variants() -> Vec<Variant> {
    let mut v = Variant::ALL.to_vec();
    v.extend([
        Variant::Count { bits: 1 },
        Variant::Count { bits: 4 },
        Variant::Position { bits: 4 },
        Variant::Position { bits: 5 },
    ]);
    v
}

// Letter set starting with `first`, padded with English letters.
fn letters_starting_with(first: &[u8], n: usize) -> LetterSet {
    let rest = fprint_core::english_default_letters();
    let symbols: Vec<u8> = first
        .iter()
        .chain(rest.iter().filter(|c| !first.contains(c)))
        .copied()
        .take(n)
        .collect();
    LetterSet::new(symbols).unwrap()
}

fn schemes() -> Vec<(Scheme, ComparisonTables)> {
    all_variants()
        .into_iter()
        .flat_map(|v| {
            [
                Scheme::english(v).unwrap(),
                Scheme::new(v, letters_starting_with(b"abe", v.letter_count())).unwrap(),
            ]
        })
        .map(|s| {
            let t = ComparisonTables::new(&s);
            (s, t)
        })
        .collect()
}

fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|s: &Vec<u8>| {
                alphabet.iter().map(move |&c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, min: usize, max: usize) -> Vec<u8> {
    let len = rng.random_range(min..=max);
    (0..len)
        .map(|_| ALPHABET[rng.random_range(0..26)])
        .collect()
}

#[derive(Clone, Copy)]
enum Edit {
    Substitute,
    Any,
}

fn edit_once(rng: &mut ChaCha8Rng, s: &mut Vec<u8>, kind: Edit) {
    let letter = ALPHABET[rng.random_range(0..26)];
    let op = match kind {
        Edit::Substitute => 0,
        Edit::Any => rng.random_range(0..3),
    };
    match op {
        0 if !s.is_empty() => {
            let i = rng.random_range(0..s.len());
            s[i] = letter;
        }
        2 if !s.is_empty() => {
            s.remove(rng.random_range(0..s.len()));
        }
        0 | 2 => {}
        _ => s.insert(rng.random_range(0..=s.len()), letter),
    }
}

fn edited(rng: &mut ChaCha8Rng, s: &[u8], edits: usize, kind: Edit) -> Vec<u8> {
    let mut t = s.to_vec();
    for _ in 0..edits {
        edit_once(rng, &mut t, kind);
    }
    t
}

fn lower_bound(scheme: &Scheme, tables: &ComparisonTables, a: &[u8], b: &[u8]) -> usize {
    tables.lower_bound(tables.distance(scheme.build(a), scheme.build(b))) as usize
}

// Counts pairs whose fingerprint bound exceeds a true distance the scheme
// supports.
fn bound_violations(schemes: &[(Scheme, ComparisonTables)], a: &[u8], b: &[u8]) -> u64 {
    let lev = levenshtein_full(a, b);
    let ham = hamming_full(a, b).ok();
    let mut violations = 0;
    for (scheme, tables) in schemes {
        let lb = lower_bound(scheme, tables, a, b);
        if scheme.supports(Metric::Levenshtein) && lb > lev {
            violations += 1;
        }
        if ham.is_some_and(|h| lb > h) {
            violations += 1;
        }
    }
    violations
}

fn golden_patterns() -> Outcome {
    let expected = [
        (Variant::Occurrence, "1110111000010000"),
        (Variant::OccurrenceHalved, "01 10 01 00 10 11 10 00"),
        (Variant::count(), "01 01 01 00 01 10 01 00"),
        (Variant::position(), "111 011 100 111 000 1"),
    ];
    let mut mismatches = Vec::new();
    for (v, want) in expected {
        let scheme = Scheme::english(v).unwrap();
        let got = scheme.render(scheme.build(b"instance"));
        if got != want {
            mismatches.push(format!("{v}: got `{got}`, want `{want}`"));
        }
    }
    Outcome::check(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "\"instance\" renders exactly for all four variants".into()
        } else {
            mismatches.join("; ")
        },
    )
}

fn soundness() -> Outcome {
    let schemes = schemes();
    let small = all_strings(b"abe", 5);
    let mut pairs = 0u64;
    let mut violations = 0u64;
    for a in &small {
        for b in &small {
            violations += bound_violations(&schemes, a, b);
            pairs += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let random_pairs = 120_000;
    for i in 0..random_pairs {
        let a = random_word(&mut rng, 0, 20);
        let b = match i % 3 {
            0 => random_word(&mut rng, 0, 20),
            1 => {
                let n = rng.random_range(1..=4);
                edited(&mut rng, &a, n, Edit::Substitute)
            }
            _ => {
                let n = rng.random_range(1..=4);
                edited(&mut rng, &a, n, Edit::Any)
            }
        };
        if b.len() > 20 {
            continue;
        }
        violations += bound_violations(&schemes, &a, &b);
        pairs += 1;
    }
    Outcome::check(
        violations == 0,
        format!(
            "{pairs} pairs x {} schemes ({} exhaustive over {{a,b,e}}), {violations} violations",
            schemes.len(),
            small.len() * small.len()
        ),
    )
}

fn growth_bound() -> Outcome {
    let schemes = schemes();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let triples = 100_000;
    let mut checks = 0u64;
    let mut violations = 0u64;
    for metric in Metric::ALL {
        let kind = match metric {
            Metric::Hamming => Edit::Substitute,
            Metric::Levenshtein => Edit::Any,
        };
        for i in 0..triples {
            let s1 = random_word(&mut rng, 0, 20);
            let s2 = if i % 2 == 0 {
                random_word(&mut rng, 0, 20)
            } else {
                let n = rng.random_range(0..=3);
                edited(&mut rng, &s1, n, kind)
            };
            let s3 = edited(&mut rng, &s2, 1, kind);
            for (scheme, tables) in &schemes {
                if !scheme.supports(metric) {
                    continue;
                }
                let f1 = scheme.build(&s1);
                let d12 = tables.distance(f1, scheme.build(&s2));
                let d13 = tables.distance(f1, scheme.build(&s3));
                checks += 1;
                if d13 > d12 + 2 {
                    violations += 1;
                }
            }
        }
    }
    Outcome::check(
        violations == 0,
        format!(
            "{} triples per metric, {checks} checks, {violations} violations",
            triples
        ),
    )
}

fn expected_bound(d: usize, k: usize) -> Bounded {
    if d <= k {
        Bounded::Within(d)
    } else {
        Bounded::Exceeds
    }
}

fn verifier_equivalence() -> Outcome {
    let small = all_strings(b"abc", 4);
    let mut checks = 0u64;
    let mut disagreements = 0u64;
    for a in &small {
        for b in &small {
            let lev = levenshtein_full(a, b);
            let ham = hamming_full(a, b).ok();
            for k in 0..=3 {
                checks += 2;
                disagreements += (levenshtein_bounded(a, b, k) != expected_bound(lev, k)) as u64;
                disagreements += match (ham, hamming_bounded(a, b, k)) {
                    (Some(h), Ok(got)) => got != expected_bound(h, k),
                    (None, Err(_)) => false,
                    _ => true,
                } as u64;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10_000 {
        let a = random_word(&mut rng, 20, 120);
        let edits = rng.random_range(0..=40);
        let k = rng.random_range(0..=40);

        let b = edited(&mut rng, &a, edits, Edit::Any);
        checks += 1;
        disagreements +=
            (levenshtein_bounded(&a, &b, k) != expected_bound(levenshtein_full(&a, &b), k)) as u64;

        let b = edited(&mut rng, &a, edits, Edit::Substitute);
        checks += 1;
        disagreements += (hamming_bounded(&a, &b, k).unwrap()
            != expected_bound(hamming_full(&a, &b).unwrap(), k)) as u64;
    }
    Outcome::check(
        disagreements == 0,
        format!("{checks} checks, {disagreements} disagreements"),
    )
}

fn filter_completeness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut words = Vec::new();
    for len in 3..=12 {
        words
            .extend(generate_synthetic(1100 * len, len, &ENGLISH_FREQUENCIES, len as u64).unwrap());
    }
    words.shuffle(&mut rng);

    let mut queries = sample_queries(&words, 500, Distortion::new(2), 6).unwrap();
    for q in sample_queries(&words, 500, Distortion::NONE, 7).unwrap() {
        let n = rng.random_range(1..=2);
        queries.push(edited(&mut rng, &q, n, Edit::Any));
    }

    let expected: Vec<Vec<Vec<usize>>> = Metric::ALL
        .iter()
        .map(|&m| {
            queries
                .iter()
                .map(|q| naive_scan(&words, q, 1, m))
                .collect()
        })
        .collect();

    let freq = compute_frequencies(&words.concat());
    let mut cells = 0;
    let mut disagreements = 0u64;
    let mut bad_cells = Vec::new();
    for variant in Variant::ALL {
        for strategy in LetterStrategy::ALL {
            let scheme = Scheme::from_frequencies(variant, &freq, strategy).unwrap();
            let dict = build_dictionary(&words, scheme);
            for (mi, metric) in Metric::ALL.into_iter().enumerate() {
                if !variant.supports(metric) {
                    continue;
                }
                cells += 1;
                let before = disagreements;
                for length_filter in [false, true] {
                    let opts = QueryOptions::new(1, metric).length_filter(length_filter);
                    for (q, want) in queries.iter().zip(&expected[mi]) {
                        let filtered = dict.query_with(q, &opts).unwrap();
                        let naive = dict.query_with(q, &opts.use_filter(false)).unwrap();
                        disagreements += (filtered.matches != *want) as u64;
                        disagreements += (naive.matches != *want) as u64;
                    }
                }
                if disagreements > before {
                    bad_cells.push(format!("{variant}/{strategy}/{metric}"));
                }
            }
        }
    }
    let total: usize = expected.iter().flatten().map(Vec::len).sum();
    Outcome::check(
        disagreements == 0,
        format!(
            "{} words, {} queries, {cells} cells, {total} oracle matches, {disagreements} disagreements{}",
            words.len(),
            queries.len(),
            if bad_cells.is_empty() {
                String::new()
            } else {
                format!(" in {}", bad_cells.join(", "))
            }
        ),
    )
}

fn wordlist() -> PathBuf {
    std::env::var_os("FPRINT_WORDLIST")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/web2-len9.txt")
        })
}

fn wordlist_report(variant: Variant, metric: Metric) -> BenchReport {
    let mut config = BenchConfig::new(Dataset::File { path: wordlist() });
    config.word_length = Some(9);
    config.metric = metric;
    config.k = 1;
    config.variant = variant;
    config.strategy = LetterStrategy::Common;
    config.queries = 1000;
    config.iterations = 3;
    config.seed = 9;
    run_benchmark(&config).expect("wordlist benchmark")
}

fn describe(r: &BenchReport) -> String {
    format!(
        "{}/{}/{} on {} ({} words): rejection {:.2}%, T_n {:.2} ns, T_f {:.2} ns, speedup {:.2}, construction {:.1} MB/s, matches {}/{}",
        r.variant,
        r.strategy,
        r.metric,
        r.dataset,
        r.words,
        r.rejection_pct,
        r.naive_ns,
        r.filtered_ns,
        r.speedup,
        r.construction_mbps,
        r.naive_matches,
        r.filtered_matches
    )
}

struct WordlistRuns {
    occ_ham: BenchReport,
    occ_lev: BenchReport,
    count_ham: BenchReport,
    pos_ham: BenchReport,
    halved_ham: BenchReport,
}

impl WordlistRuns {
    fn run() -> Self {
        WordlistRuns {
            occ_ham: wordlist_report(Variant::Occurrence, Metric::Hamming),
            occ_lev: wordlist_report(Variant::Occurrence, Metric::Levenshtein),
            count_ham: wordlist_report(Variant::count(), Metric::Hamming),
            pos_ham: wordlist_report(Variant::position(), Metric::Hamming),
            halved_ham: wordlist_report(Variant::OccurrenceHalved, Metric::Hamming),
        }
    }

    fn all(&self) -> [&BenchReport; 5] {
        [
            &self.occ_ham,
            &self.occ_lev,
            &self.count_ham,
            &self.pos_ham,
            &self.halved_ham,
        ]
    }
}

fn rejection_rates(runs: &WordlistRuns) -> Outcome {
    let (occ_h, occ_l) = (runs.occ_ham.rejection_pct, runs.occ_lev.rejection_pct);
    let (count, pos) = (runs.count_ham.rejection_pct, runs.pos_ham.rejection_pct);
    let agree = runs.all().iter().all(|r| r.paths_agree);
    let ok = occ_h >= 93.0 && occ_l >= 93.0 && occ_h > count && count > pos && agree;
    Outcome::check(
        ok,
        format!(
            "{} words of length 9: occurrence {occ_h:.2}% (hamming), {occ_l:.2}% (levenshtein); count {count:.2}%; position {pos:.2}%; paths agree: {agree}",
            runs.occ_ham.words
        ),
    )
}

fn speedup(runs: &WordlistRuns) -> Outcome {
    let (h, l) = (runs.occ_ham.speedup, runs.occ_lev.speedup);
    let ok = h > 1.0 && l > 2.0;
    let mut detail = format!("occurrence/common speedup {h:.2} (hamming), {l:.2} (levenshtein)");
    if !ok {
        detail.push_str(&format!(
            "\n       {}\n       {}",
            describe(&runs.occ_ham),
            describe(&runs.occ_lev)
        ));
    }
    Outcome::warn_unless(ok, detail)
}

fn synthetic_fidelity() -> Outcome {
    let words = generate_synthetic(10_000_000, 18, &ENGLISH_FREQUENCIES, 8).unwrap();
    let mut counts = [0u64; 256];
    let mut total = 0u64;
    for w in &words {
        for &c in w {
            counts[c as usize] += 1;
            total += 1;
        }
    }
    let weight_sum: f64 = ENGLISH_FREQUENCIES.iter().map(|&(_, w)| w).sum();
    let worst = ENGLISH_FREQUENCIES
        .iter()
        .map(|&(c, w)| {
            let empirical = 100.0 * counts[c as usize] as f64 / total as f64;
            (c, (empirical - 100.0 * w / weight_sum).abs())
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    let top = (0..=255u8).max_by_key(|&c| counts[c as usize]).unwrap();
    let ok = total >= 10_000_000 && worst.1 <= 1.0 && top == b'e';
    Outcome::check(
        ok,
        format!(
            "{total} bytes, most frequent `{}`, largest deviation {:.4} pp (`{}`)",
            top as char, worst.1, worst.0 as char
        ),
    )
}

fn construction(runs: &WordlistRuns) -> Outcome {
    let ok = runs.all().iter().all(|r| r.construction_mbps > 10.0);
    let detail = runs
        .all()
        .iter()
        .filter(|r| r.metric == Metric::Hamming)
        .map(|r| format!("{} {:.1} MB/s", r.variant, r.construction_mbps))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome::warn_unless(ok, detail)
}

fn main() -> ExitCode {
    let mut failed = false;
    let mut report = |id: u32, name: &str, run: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let tag = match outcome.level {
            Level::Pass => "PASS",
            Level::Warn => "WARN",
            Level::Fail => "FAIL",
        };
        failed |= outcome.level == Level::Fail;
        println!(
            "{tag} [{id}] {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            outcome.detail
        );
    };

    report(1, "golden bit patterns", &golden_patterns);
    report(2, "lower-bound soundness", &soundness);
    report(3, "single-edit growth bound", &growth_bound);
    report(4, "verifier oracle equivalence", &verifier_equivalence);
    report(5, "filter completeness", &filter_completeness);
    let runs = WordlistRuns::run();
    report(6, "rejection rates on length-9 words", &|| {
        rejection_rates(&runs)
    });
    report(7, "speedup direction", &|| speedup(&runs));
    report(8, "synthetic generator fidelity", &synthetic_fidelity);
    report(9, "construction throughput", &|| construction(&runs));

    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
