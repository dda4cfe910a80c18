//! Plain-text and CSV pmf files.
//!
//! Text: one probability per line, the index is the line number (blank
//! lines and `#` comments are skipped). CSV: two columns `index,probability`,
//! an optional header row, rows in any order.

use std::io::{Read, Write};

use crate::dist::DiscreteDistribution;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmfFormat {
    Text,
    Csv,
}

impl PmfFormat {
    /// Guesses the format from content: any comma means CSV.
    pub fn detect(content: &str) -> Self {
        if content
            .lines()
            .any(|l| !l.trim_start().starts_with('#') && l.contains(','))
        {
            PmfFormat::Csv
        } else {
            PmfFormat::Text
        }
    }
}

pub fn parse_pmf(content: &str, format: PmfFormat) -> Result<Vec<f64>> {
    match format {
        PmfFormat::Text => parse_text(content),
        PmfFormat::Csv => parse_csv(content),
    }
}

pub fn read_pmf<R: Read>(mut reader: R) -> Result<Vec<f64>> {
    let mut content = String::new();
    reader.read_to_string(&mut content)?;
    parse_pmf(&content, PmfFormat::detect(&content))
}

/// Reads a pmf file (format auto-detected) into an explicit distribution.
pub fn load_distribution(path: &std::path::Path) -> Result<DiscreteDistribution> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    DiscreteDistribution::explicit(read_pmf(file)?)
}

fn parse_text(content: &str) -> Result<Vec<f64>> {
    content
        .lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            l.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: {l:?}: {e}", i + 1)))
        })
        .collect()
}

fn parse_csv(content: &str) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(content.as_bytes());
    let mut entries: Vec<(usize, f64)> = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::Parse(format!(
                "row {}: expected 2 columns, found {}",
                row + 1,
                record.len()
            )));
        }
        let index = record[0].parse::<usize>();
        let prob = record[1].parse::<f64>();
        match (index, prob) {
            (Ok(i), Ok(p)) => entries.push((i, p)),
            // header
            _ if row == 0 => continue,
            _ => {
                return Err(Error::Parse(format!(
                    "row {}: cannot parse {:?}",
                    row + 1,
                    record.iter().collect::<Vec<_>>()
                )))
            }
        }
    }
    let len = entries.iter().map(|(i, _)| i + 1).max().unwrap_or(0);
    let mut pmf = vec![0.0; len];
    let mut seen = vec![false; len];
    for (i, p) in entries {
        if seen[i] {
            return Err(Error::Parse(format!("index {i} appears twice")));
        }
        seen[i] = true;
        pmf[i] = p;
    }
    Ok(pmf)
}

pub fn write_pmf_text<W: Write>(mut w: W, pmf: &[f64]) -> Result<()> {
    for p in pmf {
        writeln!(w, "{p:e}")?;
    }
    Ok(())
}

/// Two-column CSV with a `x,pmf` header. Values use the shortest
/// representation that round-trips exactly.
pub fn write_pmf_csv<W: Write>(w: W, pmf: &[f64]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io(e.to_string());
    writer.write_record(["x", "pmf"]).map_err(io)?;
    for (x, p) in pmf.iter().enumerate() {
        writer
            .write_record([x.to_string(), format!("{p:e}")])
            .map_err(io)?;
    }
    writer.flush()?;
    Ok(())
}
