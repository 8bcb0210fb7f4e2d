//! JSON output records and CSV tables.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::experiment::ThetaRow;
use crate::LabError;

pub const SCHEMA_VERSION: &str = "1.0.0";

/// The published JSON schema for every record.
pub const SCHEMA: &str = include_str!("../schema/output.schema.json");

pub const CSV_COLUMNS: [&str; 8] = [
    "theta_id",
    "n",
    "decided",
    "hermite_count",
    "proportion",
    "levy_rate",
    "hermite_growth",
    "undecided",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: Value, results: impl Serialize) -> Result<Self, LabError> {
        let mut results = serde_json::to_value(results)?;
        round_floats(&mut results);
        Ok(Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            inputs,
            results,
        })
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Nearest double printing with at most 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n
                .as_f64()
                .and_then(|x| serde_json::Number::from_f64(sig15(x)))
            {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn write_rows_csv<W: Write>(out: W, rows: &[ThetaRow]) -> Result<(), LabError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.serialize(ThetaRow {
            proportion: sig15(r.proportion),
            levy_rate: sig15(r.levy_rate),
            hermite_growth: sig15(r.hermite_growth),
            ..r.clone()
        })?;
    }
    w.flush()?;
    Ok(())
}

/// `out.json` gets `out.csv` next to it.
pub fn csv_sibling(path: &Path) -> PathBuf {
    path.with_extension("csv")
}
