//! Run metadata, tables and their CSV / JSON rendering.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use abe_core::classify::Thresholds;
use abe_core::families::PRNG_ALGORITHM;
use abe_core::measures::OptimizerSettings;
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliResult;

/// Bumped whenever a column is added, removed or reordered.
pub const SCHEMA_VERSION: u32 = 1;
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    /// `<command>/<SCHEMA_VERSION>`.
    pub schema: String,
    pub prng: &'static str,
    pub seeds: Value,
    pub tolerances: Thresholds,
    pub optimizer: OptimizerSettings,
    pub parameters: Value,
    pub timestamp: String,
}

impl RunMetadata {
    pub fn new(command: &str, thresholds: Thresholds, optimizer: OptimizerSettings) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            schema: format!("{command}/{SCHEMA_VERSION}"),
            prng: PRNG_ALGORITHM,
            seeds: Value::Null,
            tolerances: thresholds,
            optimizer,
            parameters: Value::Null,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }

    pub fn with_seeds(mut self, seeds: Value) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_parameters(mut self, parameters: Value) -> Self {
        self.parameters = parameters;
        self
    }
}

/// Rounds to [`SIGNIFICANT_DIGITS`] and prints the shortest exact form of the
/// rounded value.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    UInt(u64),
    Text(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::UInt(u) => u.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::UInt(u) => Value::from(*u),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::UInt(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::UInt(x)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.as_ref().to_owned()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn open_output(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// CSV: one `#`-prefixed JSON metadata line, a header, then the rows.
/// JSON: `{"metadata", "rows"}` with one object per row.
pub fn write_table(
    meta: &RunMetadata,
    table: &Table,
    format: Format,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut w = open_output(out)?;
    match format {
        Format::Csv => {
            writeln!(w, "# {}", serde_json::to_string(meta)?)?;
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&table.columns)?;
            for row in &table.rows {
                csv.write_record(row.iter().map(Cell::to_csv))?;
            }
            csv.flush()?;
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        table
                            .columns
                            .iter()
                            .cloned()
                            .zip(r.iter().map(Cell::to_json))
                            .collect(),
                    )
                })
                .collect();
            let doc = serde_json::json!({ "metadata": meta, "rows": rows });
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Single-record JSON document with the metadata attached.
pub fn write_json_report<T: Serialize>(
    meta: &RunMetadata,
    body: &T,
    out: Option<&Path>,
) -> CliResult<()> {
    let mut doc = serde_json::Map::new();
    doc.insert("metadata".into(), serde_json::to_value(meta)?);
    match serde_json::to_value(body)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("result".into(), other);
        }
    }
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, &doc)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
