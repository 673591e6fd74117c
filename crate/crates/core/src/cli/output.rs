//! Tabular output: CSV with a `#`-prefixed manifest line, or a JSON document
//! `{manifest, rows, summary}`. Data rows never contain the timestamp, so
//! replaying a manifest reproduces them byte for byte.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::rng::RNG_ALGORITHM;

use super::args::Format;

/// Columns of `simulate` and `exact` output.
pub const EXPERIMENT_COLUMNS: &[&str] = &[
    "experiment",
    "u",
    "b",
    "f",
    "set_kind",
    "set_size",
    "trial",
    "seed",
    "lbin",
    "threshold",
    "freq",
    "ci_lo",
    "ci_hi",
];

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    /// Resolved options after layering flags, config and defaults.
    pub flags: Value,
    pub seed: u64,
    pub rng: &'static str,
    pub version: &'static str,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, flags: Value, seed: u64) -> Self {
        Self {
            subcommand,
            flags,
            seed,
            rng: RNG_ALGORITHM,
            version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: &'static [&'static str],
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new() }
    }

    /// Appends a row; unnamed columns stay empty.
    pub fn push(&mut self, cells: &[(&str, Value)]) {
        let mut row = vec![Value::Null; self.columns.len()];
        for (name, value) in cells {
            let i = self.columns.iter().position(|c| c == name).unwrap_or_else(|| panic!("unknown column {name}"));
            row[i] = value.clone();
        }
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn write_output<W: Write>(
    out: &mut W,
    format: Format,
    manifest: &RunManifest,
    table: &Table,
    summary: &Value,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "# {}", serde_json::to_string(manifest)?)?;
            writeln!(out, "{}", table.columns.join(","))?;
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        table.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
                    Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({ "manifest": manifest, "rows": rows, "summary": summary });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
