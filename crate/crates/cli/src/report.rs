//! Run reports: deterministic JSON plus optional CSV tables.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use symdyn::Caps;

use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let io = |e: csv::Error| CliError::Io(format!("{}: {e}", path.display()));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// What a command hands back before it is wrapped into a [`RunReport`].
pub struct Outcome {
    pub parameters: Value,
    pub results: Value,
    pub tolerances: Value,
    pub table: Option<Table>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the config file bytes, or of the canonical parameters when
    /// the command takes no config.
    pub config_digest: String,
    pub digest_of: &'static str,
    pub config: Value,
    pub parameters: Value,
    pub results: Value,
    pub tolerances: Value,
    pub caps: Caps,
    pub versions: BTreeMap<&'static str, &'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn versions() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("symdyn", symdyn::VERSION),
        ("symdyn-cli", env!("CARGO_PKG_VERSION")),
        ("report_format", "1"),
    ])
}

/// Pretty JSON with keys sorted at every level.
pub fn to_json(report: &RunReport) -> Result<String, CliError> {
    let v = serde_json::to_value(report).map_err(|e| CliError::Io(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn emit(json: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, json).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(json.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}
