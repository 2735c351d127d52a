use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use mlsi_core::HypothesisCheck;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// What every subcommand hands back: a serialisable report, the checks
/// behind it, and optionally a table for `--csv`.
pub struct Outcome {
    pub kind: &'static str,
    pub config: Value,
    pub report: Value,
    pub hypotheses: Vec<HypothesisCheck>,
    pub table: Option<Table>,
    /// Forces exit status 2 even when every listed check holds, e.g. an
    /// "inapplicable" classifier verdict.
    pub inapplicable: bool,
    /// One-line human summary printed when the JSON goes to a file.
    pub summary: String,
}

impl Outcome {
    pub fn new<T: Serialize>(kind: &'static str, config: Value, report: &T, summary: String) -> Result<Self, CliError> {
        Ok(Outcome {
            kind,
            config,
            report: to_value(report)?,
            hypotheses: Vec::new(),
            table: None,
            inapplicable: false,
            summary,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.inapplicable || self.hypotheses.iter().any(|h| !h.holds) {
            2
        } else {
            0
        }
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Usage(format!("report serialisation failed: {e}")))
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    kind: &'a str,
    config: &'a Value,
    report: &'a Value,
    hypotheses: &'a [HypothesisCheck],
    metadata: Metadata,
}

/// Everything here may change between identical runs.
#[derive(Serialize)]
struct Metadata {
    timestamp: String,
    tool_version: &'static str,
    threads: usize,
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table { headers, rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        self.rows.push(row.into_iter().collect());
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let fail = |e: csv::Error| CliError::Write {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut w = csv::Writer::from_path(path).map_err(fail)?;
        w.write_record(&self.headers).map_err(fail)?;
        for r in &self.rows {
            w.write_record(r).map_err(fail)?;
        }
        w.flush().map_err(|e| CliError::Write {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

/// Formats a float for CSV; infinities become `inf`/`-inf`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn envelope_json(out: &Outcome) -> Result<String, CliError> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        kind: out.kind,
        config: &out.config,
        report: &out.report,
        hypotheses: &out.hypotheses,
        metadata: Metadata {
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tool_version: env!("CARGO_PKG_VERSION"),
            threads: rayon::current_num_threads(),
        },
    };
    serde_json::to_string_pretty(&env).map_err(|e| CliError::Usage(format!("report serialisation failed: {e}")))
}

fn write_text(path: &PathBuf, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Write {
        path: path.clone(),
        message: e.to_string(),
    })
}

/// Prints a line, ignoring a closed stdout (e.g. piped into `head`).
pub fn say(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

/// Writes the JSON envelope to `json` (or stdout) and the table to `csv`.
pub fn emit(out: &Outcome, json: Option<&PathBuf>, csv: Option<&PathBuf>) -> Result<(), CliError> {
    let text = envelope_json(out)?;
    match json {
        Some(path) => {
            write_text(path, &(text + "\n"))?;
            say(&out.summary);
        }
        None => say(&text),
    }
    if let Some(path) = csv {
        match &out.table {
            Some(t) => t.write(path)?,
            None => return Err(CliError::Usage(format!("`{}` has no tabular output for --csv", out.kind))),
        }
    }
    Ok(())
}
