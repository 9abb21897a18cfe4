use std::collections::BTreeMap;
use std::io::Write;

use clap::ValueEnum;
use dualspace_core::numkernel::{Field, Matrix};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliResult;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Envelope shared by every command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub space: String,
    pub method: String,
    pub result: Value,
    pub residuals: BTreeMap<String, f64>,
    pub seed: u64,
    pub version: &'static str,
}

impl Report {
    pub fn new(space: impl Into<String>, method: impl Into<String>, seed: u64, result: Value) -> Self {
        Self { space: space.into(), method: method.into(), result, residuals: BTreeMap::new(), seed, version: VERSION }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["key", "value"])?;
                for (k, v) in [("space", &self.space), ("method", &self.method)] {
                    w.write_record([k, v.as_str()])?;
                }
                let mut rows = Vec::new();
                flatten("result", &self.result, &mut rows);
                for (k, v) in &self.residuals {
                    rows.push((format!("residuals.{k}"), fmt_f64(*v)));
                }
                rows.push(("seed".into(), self.seed.to_string()));
                rows.push(("version".into(), self.version.into()));
                for (k, v) in rows {
                    w.write_record([k, v])?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&format!("{prefix}.{k}"), child, rows);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), child, rows);
            }
        }
        Value::String(s) => rows.push((prefix.into(), s.clone())),
        other => rows.push((prefix.into(), other.to_string())),
    }
}

/// Shortest round-trip form, with an exponent for very large or small values.
pub fn fmt_f64(x: f64) -> String {
    match serde_json::Number::from_f64(x) {
        Some(n) => n.to_string(),
        None => x.to_string(),
    }
}

/// Rows of reals, or rows of `[re, im]` pairs for complex matrices.
pub fn matrix_json(m: &Matrix) -> Value {
    match m.field() {
        Field::Real => json!(m.to_real_rows()),
        Field::Complex => {
            let rows: Vec<Vec<[f64; 2]>> =
                (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect()).collect();
            json!(rows)
        }
    }
}
