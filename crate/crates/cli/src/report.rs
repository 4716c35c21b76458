//! Report records: JSON with embedded checks and tables, one CSV per table.
//! Identical config + seed produce byte-identical files apart from the
//! timestamp field.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    /// reference the value is compared against (0 when the check is a bound)
    pub target: f64,
    pub tolerance: f64,
}

impl Check {
    /// relative agreement |value − target| ≤ tol·|target|
    pub fn relative(name: &str, value: f64, target: f64, tol: f64) -> Self {
        let pass = value.is_finite() && (value - target).abs() <= tol * target.abs();
        Self { name: name.into(), pass, value, target, tolerance: tol }
    }

    /// absolute bound |value| ≤ tol
    pub fn bound(name: &str, value: f64, tol: f64) -> Self {
        Self { name: name.into(), pass: value.is_finite() && value.abs() <= tol, value, target: 0.0, tolerance: tol }
    }

    /// strict positivity
    pub fn positive(name: &str, value: f64) -> Self {
        Self { name: name.into(), pass: value.is_finite() && value > 0.0, value, target: 0.0, tolerance: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub schema_version: u32,
    pub subcommand: String,
    pub seed: u64,
    pub config_hash: String,
    pub timestamp_unix: u64,
    pub params: ExperimentConfig,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub pass: bool,
}

impl Report {
    pub fn new(subcommand: &str, config: &ExperimentConfig) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            schema_version: crate::config::SCHEMA_VERSION,
            subcommand: subcommand.into(),
            seed: config.seed,
            config_hash: config_hash(config),
            timestamp_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            params: config.clone(),
            checks: Vec::new(),
            tables: Vec::new(),
            pass: true,
        }
    }

    pub fn check(&mut self, c: Check) {
        self.pass &= c.pass;
        self.checks.push(c);
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    fn stem(&self) -> String {
        format!("{}-{}-{}", self.subcommand, self.seed, self.config_hash)
    }

    /// Write the JSON report and one CSV per table; returns the JSON path.
    pub fn write(&self, out_dir: &Path) -> std::io::Result<PathBuf> {
        fs::create_dir_all(out_dir)?;
        let json_path = out_dir.join(format!("{}.json", self.stem()));
        fs::write(&json_path, serde_json::to_string_pretty(self).expect("serializable") + "\n")?;
        for t in &self.tables {
            let csv_path = out_dir.join(format!("{}-{}.csv", self.stem(), t.name));
            write_csv(&csv_path, t)?;
        }
        Ok(json_path)
    }
}

/// First 16 hex chars of the SHA-256 of the canonicalized config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("serializable");
    let digest = Sha256::digest(&bytes);
    let mut s = String::new();
    for b in &digest[..8] {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// UTF-8 CSV with a header row, `.` decimal separator, deterministic row
/// order (insertion order). An empty table produces a header-only file.
pub fn write_csv(path: &Path, table: &Table) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_float(*v)))?;
    }
    w.flush()
}

/// Parse a CSV produced by [`write_csv`] back into a table.
pub fn read_csv(path: &Path, name: &str) -> std::io::Result<Table> {
    let mut r = csv::Reader::from_path(path)?;
    let columns: Vec<String> = r
        .headers()?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        rows.push(
            rec.iter()
                .map(|s| s.parse::<f64>().unwrap_or(f64::NAN))
                .collect(),
        );
    }
    Ok(Table { name: name.into(), columns, rows })
}

fn format_float(v: f64) -> String {
    // Debug for f64 is the shortest representation that round-trips
    format!("{v:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = std::env::temp_dir().join("hncap-csv-test");
        std::fs::create_dir_all(&dir).unwrap();
        let mut t = Table::new("probe", &["a", "b"]);
        t.push(vec![0.1, 1.0 / 3.0]);
        t.push(vec![-1e-17, 2.5e300]);
        let path = dir.join("probe.csv");
        write_csv(&path, &t).unwrap();
        let back = read_csv(&path, "probe").unwrap();
        assert_eq!(back.columns, t.columns);
        assert_eq!(back.rows, t.rows);
        // empty table: header-only file
        let empty = Table::new("empty", &["x"]);
        let epath = dir.join("empty.csv");
        write_csv(&epath, &empty).unwrap();
        let text = std::fs::read_to_string(&epath).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert_eq!(read_csv(&epath, "empty").unwrap().rows.len(), 0);
    }
}
