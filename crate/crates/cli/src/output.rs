//! CSV tables, config hashes and run manifests.
//!
//! Every CSV starts with `#schema=1` and every row ends with the run seed and
//! config hash. Floats use Rust's shortest round-trip form, so equal values
//! always print to equal bytes.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA: &str = "#schema=1";

pub trait Cell {
    fn cell(&self) -> String;
}

impl Cell for f64 {
    fn cell(&self) -> String {
        format!("{self:?}")
    }
}

macro_rules! display_cell {
    ($($t:ty),*) => {
        $(impl Cell for $t {
            fn cell(&self) -> String {
                self.to_string()
            }
        })*
    };
}

display_cell!(u32, u64, usize, bool, String, &str);

impl<T: Cell> Cell for Option<T> {
    fn cell(&self) -> String {
        self.as_ref().map_or_else(String::new, Cell::cell)
    }
}

/// Builds a row from heterogeneous cells.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => {
        vec![$($crate::output::Cell::cell(&$x)),*]
    };
}

/// One CSV file: `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width for table {}", self.name);
        self.rows.push(row);
    }

    pub fn to_csv(&self, seed: u64, hash: &str) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "{SCHEMA}")?;
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let mut header: Vec<&str> = self.columns.clone();
            header.extend(["seed", "config_hash"]);
            w.write_record(&header)?;
            let seed = seed.to_string();
            for row in &self.rows {
                w.write_record(row.iter().map(String::as_str).chain([seed.as_str(), hash]))?;
            }
            w.flush()?;
        }
        Ok(buf)
    }
}

/// First 16 hex digits of SHA-256 over the command, seed and resolved parameters.
pub fn config_hash(command: &str, seed: u64, params: &Value) -> String {
    let doc = serde_json::json!({"command": command, "seed": seed, "params": params});
    let digest = Sha256::digest(doc.to_string().as_bytes());
    hex::encode(&digest[..8])
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command: &'a str,
    seed: u64,
    threads: usize,
    config_hash: &'a str,
    config: &'a Value,
    outputs: Vec<String>,
    elapsed_seconds: f64,
    #[serde(skip_serializing_if = "Value::is_null")]
    extra: Value,
}

/// What a finished command hands back for writing.
pub struct Report {
    pub tables: Vec<Table>,
    /// All assertions of the command held.
    pub passed: bool,
    /// Human summary for stderr.
    pub summary: Vec<String>,
    /// Additional manifest content (e.g. timings); never part of a CSV.
    pub extra: Value,
}

impl Report {
    pub fn new(tables: Vec<Table>) -> Self {
        Self {
            tables,
            passed: true,
            summary: Vec::new(),
            extra: Value::Null,
        }
    }
}

pub struct RunInfo<'a> {
    pub command: &'a str,
    pub seed: u64,
    pub threads: usize,
    pub params: &'a Value,
    pub hash: &'a str,
    pub elapsed_seconds: f64,
}

/// Writes the tables and a manifest into `dir`, creating it if needed.
pub fn write_dir(dir: &Path, info: &RunInfo<'_>, report: &Report) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut outputs = Vec::new();
    for t in &report.tables {
        let file = format!("{}.csv", t.name);
        std::fs::write(dir.join(&file), t.to_csv(info.seed, info.hash)?).with_context(|| format!("writing {file}"))?;
        outputs.push(file);
    }
    let manifest = Manifest {
        tool: "ldgraphs",
        version: env!("CARGO_PKG_VERSION"),
        core_version: ldgraphs_core::VERSION,
        command: info.command,
        seed: info.seed,
        threads: info.threads,
        config_hash: info.hash,
        config: info.params,
        outputs,
        elapsed_seconds: info.elapsed_seconds,
        extra: report.extra.clone(),
    };
    let file = dir.join(format!("{}.manifest.json", info.command));
    std::fs::write(&file, serde_json::to_string_pretty(&manifest)? + "\n").with_context(|| format!("writing {}", file.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push(row![0.1f64, "p,q"]);
        t.push(row![1e-12f64, 3usize]);
        let s = String::from_utf8(t.to_csv(5, "abc").unwrap()).unwrap();
        assert_eq!(s, "#schema=1\na,b,seed,config_hash\n0.1,\"p,q\",5,abc\n1e-12,3,5,abc\n");
    }

    #[test]
    fn hash_depends_on_seed_and_params() {
        let p = serde_json::json!({"N": 4});
        let h = config_hash("rate", 1, &p);
        assert_eq!(h.len(), 16);
        assert_eq!(h, config_hash("rate", 1, &p));
        assert_ne!(h, config_hash("rate", 2, &p));
        assert_ne!(h, config_hash("rate", 1, &serde_json::json!({"N": 5})));
    }
}
