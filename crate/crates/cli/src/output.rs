use std::io::Write;

use clap::ValueEnum;

use fprint_core::bench::{BenchReport, SweepRow};
use fprint_core::workload::CorpusStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
    JsonLines,
}

enum Inner<W: Write> {
    Csv {
        writer: Box<csv::Writer<W>>,
        header_written: bool,
    },
    Text(W),
    JsonLines(W),
}

/// Writes a stream of reports in one format. CSV gets its header before
/// the first record.
pub struct ReportSink<W: Write> {
    inner: Inner<W>,
}

impl<W: Write> ReportSink<W> {
    pub fn new(out: W, format: Format) -> Self {
        let inner = match format {
            Format::Csv => Inner::Csv {
                writer: Box::new(csv::Writer::from_writer(out)),
                header_written: false,
            },
            Format::Text => Inner::Text(out),
            Format::JsonLines => Inner::JsonLines(out),
        };
        ReportSink { inner }
    }

    fn record<const N: usize>(
        &mut self,
        header: [&str; N],
        record: [String; N],
    ) -> anyhow::Result<()> {
        if let Inner::Csv {
            writer,
            header_written,
        } = &mut self.inner
        {
            if !*header_written {
                writer.write_record(header)?;
                *header_written = true;
            }
            writer.write_record(record)?;
        }
        Ok(())
    }

    pub fn bench(&mut self, r: &BenchReport) -> anyhow::Result<()> {
        match &mut self.inner {
            Inner::Csv { .. } => self.record(BenchReport::CSV_HEADER, r.csv_record())?,
            Inner::JsonLines(out) => {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
            Inner::Text(out) => {
                let wl = r.word_length.map_or("any".to_owned(), |l| l.to_string());
                writeln!(
                    out,
                    "{} {} / {} / {} k={} (word length {wl}, {} words, {} queries x {} iterations)",
                    r.dataset,
                    r.variant,
                    r.strategy,
                    r.metric,
                    r.k,
                    r.words,
                    r.queries,
                    r.iterations
                )?;
                writeln!(out, "  letters            {}", r.letters)?;
                writeln!(out, "  naive per pair     {:.3} ns", r.naive_ns)?;
                writeln!(out, "  filtered per pair  {:.3} ns", r.filtered_ns)?;
                writeln!(out, "  speedup            {:.3}", r.speedup)?;
                writeln!(out, "  rejected           {:.2} %", r.rejection_pct)?;
                writeln!(out, "  construction       {:.2} MB/s", r.construction_mbps)?;
                writeln!(
                    out,
                    "  matches            {} naive, {} filtered{}",
                    r.naive_matches,
                    r.filtered_matches,
                    if r.paths_agree { "" } else { "  (DISAGREE)" }
                )?;
            }
        }
        Ok(())
    }

    pub fn sweep(&mut self, row: &SweepRow) -> anyhow::Result<()> {
        match &mut self.inner {
            Inner::Csv { .. } => self.record(SweepRow::CSV_HEADER, row.csv_record())?,
            Inner::JsonLines(out) => {
                serde_json::to_writer(&mut *out, row)?;
                writeln!(out)?;
            }
            Inner::Text(out) => writeln!(
                out,
                "{:>4}  {:<10} {:<7} naive {:>8.3} ns  filtered {:>8.3} ns  speedup {:>6.3}  rejected {:>6.2} %",
                row.word_size,
                row.variant,
                row.strategy,
                row.naive_ns,
                row.filtered_ns,
                row.speedup,
                row.rejection_pct
            )?,
        }
        Ok(())
    }

    pub fn finish(self) -> anyhow::Result<()> {
        match self.inner {
            Inner::Csv { mut writer, .. } => writer.flush()?,
            Inner::Text(mut out) | Inner::JsonLines(mut out) => out.flush()?,
        }
        Ok(())
    }
}

pub fn write_stats<W: Write>(
    mut out: W,
    stats: &CorpusStats,
    format: Format,
) -> anyhow::Result<()> {
    match format {
        Format::Text => {
            writeln!(out, "words        {}", stats.word_count)?;
            writeln!(out, "bytes        {}", stats.total_bytes)?;
            writeln!(out, "mode length  {}", stats.mode_length)?;
            writeln!(out, "length histogram:")?;
            for (len, count) in &stats.histogram {
                writeln!(out, "  {len:>5} {count}")?;
            }
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(out);
            writer.write_record(["length", "count"])?;
            for (len, count) in &stats.histogram {
                writer.write_record([len.to_string(), count.to_string()])?;
            }
            writer.flush()?;
        }
        Format::JsonLines => {
            serde_json::to_writer(&mut out, stats)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
