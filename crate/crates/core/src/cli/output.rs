//! CSV and JSON emission.
//!
//! CSV files carry a header row and numeric cells only, LF line endings.
//! Floats are written with 17 significant digits so they read back exactly.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use super::config::OutputFormat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Everything a command emits.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub table: Table,
    pub summary: Map<String, Value>,
}

impl Report {
    fn header(&self, deterministic: bool) -> Map<String, Value> {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(self.command));
        doc.insert("config".into(), self.config.clone());
        if !deterministic {
            let now = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            doc.insert("generated_unix".into(), json!(now));
        }
        doc
    }

    /// The single JSON document used for `--format json`.
    pub fn to_json(&self, deterministic: bool) -> Value {
        let mut doc = self.header(deterministic);
        doc.insert("summary".into(), Value::Object(self.summary.clone()));
        doc.insert("rows".into(), self.table.to_json());
        Value::Object(doc)
    }

    /// Command, config and summary without the rows; the CSV companion.
    pub fn summary_json(&self, deterministic: bool) -> Value {
        let mut doc = self.header(deterministic);
        doc.insert("summary".into(), Value::Object(self.summary.clone()));
        Value::Object(doc)
    }
}

/// Where the summary of a CSV written to `output` goes.
pub fn summary_path(output: &Path) -> PathBuf {
    output.with_extension("summary.json")
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes the report. CSV goes to `output` (or stdout) and its summary to a
/// sibling `.summary.json` file (or stderr).
pub fn emit(report: &Report, format: OutputFormat, output: Option<&Path>, deterministic: bool) -> io::Result<()> {
    match (format, output) {
        (OutputFormat::Json, Some(path)) => fs::write(path, pretty(&report.to_json(deterministic))),
        (OutputFormat::Json, None) => io::stdout().write_all(pretty(&report.to_json(deterministic)).as_bytes()),
        (OutputFormat::Csv, Some(path)) => {
            fs::write(path, report.table.to_csv())?;
            fs::write(summary_path(path), pretty(&report.summary_json(deterministic)))
        }
        (OutputFormat::Csv, None) => {
            io::stdout().write_all(report.table.to_csv().as_bytes())?;
            io::stderr().write_all(pretty(&report.summary_json(deterministic)).as_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_round_trip_exactly() {
        let mut t = Table::new(&["a", "n"]);
        let vals = [0.1, 1.0 / 3.0, -2.718281828459045e-200, 6.02214076e23];
        for v in vals {
            t.push(vec![v.into(), 3usize.into()]);
        }
        let csv = t.to_csv();
        assert!(csv.starts_with("a,n\n"));
        assert!(!csv.contains('\r'));
        for (line, v) in csv.lines().skip(1).zip(vals) {
            let cell = line.split(',').next().unwrap();
            assert_eq!(cell.parse::<f64>().unwrap(), v);
            assert_eq!(line.split(',').nth(1).unwrap(), "3");
        }
    }

    #[test]
    fn deterministic_flag_drops_timestamp() {
        let r = Report {
            command: "x",
            config: json!({}),
            table: Table::new(&["a"]),
            summary: Map::new(),
        };
        assert!(r.to_json(true).get("generated_unix").is_none());
        assert!(r.to_json(false).get("generated_unix").is_some());
        assert_eq!(
            summary_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.summary.json")
        );
    }
}
