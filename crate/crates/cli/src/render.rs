//! Number formatting and tabular output.

use std::fmt::Write as _;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Shortest decimal form that parses back to the same `f64`.
pub fn full(v: f64) -> String {
    format!("{v:?}")
}

/// Six significant digits, trailing zeros trimmed, exponent form outside
/// `[1e-5, 1e6)`.
pub fn sig6(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let exp = format!("{v:.5e}");
    let (mantissa, power) = exp.split_once('e').expect("exponent form");
    let power: i32 = power.parse().expect("integer exponent");
    if !(-5..6).contains(&power) {
        return format!("{}e{power}", trim_zeros(mantissa));
    }
    let decimals = (5 - power).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Five decimals, rounding half away from zero after snapping to 1e-11 so
/// that values a few ulps off an exact tie round like the tie.
pub fn fixed5(v: f64) -> String {
    let snapped = (v * 1e11).round() / 1e11;
    let scaled = (snapped.abs() * 1e5 + 0.5).floor();
    if scaled == 0.0 {
        return "0.00000".into();
    }
    let sign = if snapped < 0.0 { "-" } else { "" };
    let units = scaled as u64;
    format!("{sign}{}.{:05}", units / 100_000, units % 100_000)
}

#[derive(Debug, Clone)]
pub enum Cell {
    Int(usize),
    Num(f64),
    /// Rendered with five decimals in tables.
    Fixed(f64),
    Text(String),
}

impl Cell {
    fn table(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) => sig6(*v),
            Cell::Fixed(v) => fixed5(*v),
            Cell::Text(s) => s.clone(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(v) | Cell::Fixed(v) => full(*v),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A rectangular result with named columns.
#[derive(Debug, Clone, Default)]
pub struct Grid {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Grid {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Right-aligned columns separated by two spaces.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::table).collect())
            .collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[String]| {
            let parts: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &self.columns);
        for row in &cells {
            line(&mut out, row);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::csv))
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    /// An array of objects keyed by column name.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self.rows.iter().map(|row| {
            let fields = self.columns.iter().zip(row).map(|(name, cell)| {
                let value = match cell {
                    Cell::Int(i) => serde_json::json!(i),
                    Cell::Num(v) | Cell::Fixed(v) => serde_json::json!(v),
                    Cell::Text(s) => serde_json::json!(s),
                };
                (name.clone(), value)
            });
            serde_json::Value::Object(fields.collect())
        });
        serde_json::Value::Array(rows.collect())
    }
}

pub fn json_string(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}
