//! Result records and their CSV, JSON and table renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::config::RunConfig;

/// One result row. Keys keep insertion order, which fixes the CSV columns.
pub type Record = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub walltime_ms: f64,
}

/// Everything one invocation emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub config: RunConfig,
    pub results: Vec<Record>,
    pub meta: Meta,
}

/// Build a [`Record`] from `key => value` pairs.
macro_rules! record {
    ($($key:expr => $value:expr),* $(,)?) => {{
        let mut r = $crate::cli::output::Record::new();
        $(r.insert(String::from($key), serde_json::json!($value));)*
        r
    }};
}
pub(crate) use record;

/// Columns in order of first appearance over all rows.
fn columns(rows: &[Record]) -> Vec<&str> {
    let mut cols: Vec<&str> = Vec::new();
    for row in rows {
        for key in row.keys() {
            if !cols.contains(&key.as_str()) {
                cols.push(key);
            }
        }
    }
    cols
}

/// Floats with 17 significant digits; integers, booleans and strings verbatim.
fn csv_cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => String::new(),
        Some(Value::Number(x)) if x.is_f64() => format!("{:.16e}", x.as_f64().expect("checked f64")),
        Some(Value::Number(x)) => x.to_string(),
        Some(Value::Bool(b)) => b.to_string(),
        Some(Value::String(s)) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

pub fn render_csv(rows: &[Record]) -> String {
    let cols = columns(rows);
    let mut out = cols.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = cols.iter().map(|c| csv_cell(row.get(*c))).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn render_json(record: &ResultRecord) -> String {
    let mut out = serde_json::to_string_pretty(record).expect("records are plain data");
    out.push('\n');
    out
}

fn table_cell(value: Option<&Value>) -> String {
    match value {
        None | Some(Value::Null) => "-".into(),
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
    }
}

/// Left-aligned columns for reading at a terminal.
pub fn render_table(rows: &[Record]) -> String {
    let cols = columns(rows);
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| cols.iter().map(|c| table_cell(row.get(*c))).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).fold(c.chars().count(), usize::max))
        .collect();
    let line = |items: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, item) in items.iter().enumerate() {
            let pad = widths[i] - item.chars().count();
            let _ = write!(s, "{item}{}", " ".repeat(pad));
            if i + 1 < items.len() {
                s.push_str("  ");
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(cols.clone());
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

/// Two-column `x,y` series for external plotting.
pub fn render_plot_data(points: &[(f64, f64)]) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in points {
        let _ = writeln!(out, "{x:.16e},{y:.16e}");
    }
    out
}
