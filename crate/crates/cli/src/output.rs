//! Tabular results and their CSV/JSON encodings.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// Value that does not exist for this row (serialized as JSON `null`).
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
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

    /// Prepends a constant column, used for the sweep variable.
    pub fn with_leading(mut self, name: &str, value: f64) -> Self {
        self.columns.insert(0, name.to_string());
        for row in &mut self.rows {
            row.insert(0, Cell::Num(value));
        }
        self
    }

    /// Concatenates tables with identical columns, in order.
    pub fn concat(parts: Vec<Table>) -> Table {
        let mut it = parts.into_iter();
        let Some(mut first) = it.next() else {
            return Table::default();
        };
        for t in it {
            debug_assert_eq!(t.columns, first.columns);
            first.rows.extend(t.rows);
        }
        first
    }
}

/// Decimal rendering with 15 significant digits, trailing zeros removed.
///
/// Magnitudes outside `[1e-5, 1e15)` use exponent notation.
pub fn decimal(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.14e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if (-5..15).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        }
    } else {
        let m = format!("{}.{}", &digits[..1], &digits[1..]);
        return format!("{sign}{}e{exp}", trim_fraction(&m));
    };
    format!("{sign}{}", trim_fraction(&body))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_field(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => decimal(*x),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    config: &'a RunConfig,
    mode: &'a str,
    #[serde(skip_serializing_if = "no_notes")]
    notes: &'a [String],
    columns: &'a [String],
    data: &'a [Vec<Cell>],
}

fn no_notes(notes: &&[String]) -> bool {
    notes.is_empty()
}

/// Output with its provenance; `notes` carry definitions the column names
/// cannot.
pub struct Report {
    pub table: Table,
    pub notes: Vec<String>,
}

pub fn render(config: &RunConfig, report: &Report) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match config.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
            w.write_record(&report.table.columns)?;
            for row in &report.table.rows {
                w.write_record(row.iter().map(csv_field))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc = JsonDocument {
                config,
                mode: config.params.mode(),
                notes: &report.notes,
                columns: &report.table.columns,
                data: &report.table.rows,
            };
            serde_json::to_writer_pretty(&mut buf, &doc)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

pub fn emit(bytes: &[u8], path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            w.write_all(bytes)
                .and_then(|()| w.flush())
                .with_context(|| format!("cannot write {}", p.display()))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|()| out.flush()).context("cannot write to stdout")
        }
    }
}
