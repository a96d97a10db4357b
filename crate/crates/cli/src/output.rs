//! Streaming CSV and JSON-lines emission.
//!
//! Both formats open with a header naming the tool version and the SHA-256
//! of the canonical experiment description. CSV carries no timings, so a
//! rerun of the same experiment is byte-identical; JSON rows add
//! `elapsed_ms`.

use std::io::Write;
use std::time::Instant;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn spec_hash(spec: &Value) -> String {
    hex::encode(Sha256::digest(spec.to_string().as_bytes()))
}

pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    columns: Vec<&'static str>,
    clock: Instant,
}

impl<W: Write> Emitter<W> {
    pub fn start(
        format: Format,
        mut out: W,
        spec: &Value,
        columns: &[&'static str],
    ) -> CliResult<Self> {
        let hash = spec_hash(spec);
        match format {
            Format::Csv => {
                writeln!(out, "# census {VERSION}")?;
                writeln!(out, "# spec-sha256 {hash}")?;
                writeln!(out, "# spec {spec}")?;
                writeln!(out, "{}", columns.join(","))?;
            }
            Format::Json => {
                let header = serde_json::json!({
                    "tool": "census",
                    "version": VERSION,
                    "spec_sha256": hash,
                    "spec": spec,
                });
                writeln!(out, "{header}")?;
            }
        }
        out.flush()?;
        Ok(Emitter {
            format,
            out,
            columns: columns.to_vec(),
            clock: Instant::now(),
        })
    }

    /// Restarts the per-row clock.
    pub fn tick(&mut self) {
        self.clock = Instant::now();
    }

    /// Writes one row, in column order, and flushes.
    pub fn row(&mut self, values: Vec<Value>) -> CliResult<()> {
        debug_assert_eq!(values.len(), self.columns.len());
        match self.format {
            Format::Csv => {
                let cells: Vec<String> = values.iter().map(csv_cell).collect();
                writeln!(self.out, "{}", cells.join(","))?;
            }
            Format::Json => {
                let mut obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .map(|c| c.to_string())
                    .zip(values)
                    .collect();
                obj.insert(
                    "elapsed_ms".into(),
                    Value::from(self.clock.elapsed().as_secs_f64() * 1e3),
                );
                writeln!(self.out, "{}", Value::Object(obj))?;
            }
        }
        self.out.flush()?;
        self.tick();
        Ok(())
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(_) | Value::Bool(_) => v.to_string(),
        Value::Array(_) | Value::Object(_) => v.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}
