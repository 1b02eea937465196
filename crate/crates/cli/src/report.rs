//! Report rows and their JSON/CSV renderings.

use std::io::Write;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;

/// `{:.16e}`, or `null` for non-finite values.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Ints(Vec<i64>),
    Floats(Vec<f64>),
    IntRows(Vec<Vec<i64>>),
    Null,
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => {
                if v.is_finite() {
                    format!("{v:.16e}")
                } else {
                    String::new()
                }
            }
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Ints(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            Cell::Floats(v) => v.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(" "),
            Cell::IntRows(v) => v
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join(";"),
            Cell::Null => String::new(),
        }
    }
}

struct RawFloat(f64);

impl Serialize for RawFloat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(format_float(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Float(v) => RawFloat(*v).serialize(s),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Bool(b) => s.serialize_bool(*b),
            Cell::Ints(v) => v.serialize(s),
            Cell::Floats(v) => {
                let mut seq = s.serialize_seq(Some(v.len()))?;
                for &x in v {
                    seq.serialize_element(&RawFloat(x))?;
                }
                seq.end()
            }
            Cell::IntRows(v) => v.serialize(s),
            Cell::Null => s.serialize_unit(),
        }
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}
impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}
impl From<Vec<i64>> for Cell {
    fn from(v: Vec<i64>) -> Self {
        Cell::Ints(v)
    }
}
impl From<&[i64]> for Cell {
    fn from(v: &[i64]) -> Self {
        Cell::Ints(v.to_vec())
    }
}
impl From<Vec<f64>> for Cell {
    fn from(v: Vec<f64>) -> Self {
        Cell::Floats(v)
    }
}
impl From<&[f64]> for Cell {
    fn from(v: &[f64]) -> Self {
        Cell::Floats(v.to_vec())
    }
}
impl From<Vec<Vec<i64>>> for Cell {
    fn from(v: Vec<Vec<i64>>) -> Self {
        Cell::IntRows(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// An ordered record; keys keep insertion order in both renderings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Row(Vec<(String, Cell)>);

impl Row {
    pub fn new() -> Self {
        Row(Vec::new())
    }

    pub fn with(mut self, key: &str, value: impl Into<Cell>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

/// The common output of every subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub subcommand: &'static str,
    pub config: Row,
    pub results: Vec<Row>,
    pub residuals: Vec<Row>,
    pub status: Status,
    /// Fixed CSV columns; otherwise the union of result keys in order of appearance.
    #[serde(skip)]
    pub csv_columns: Option<Vec<&'static str>>,
}

impl Report {
    pub fn new(subcommand: &'static str, config: Row) -> Self {
        Report { subcommand, config, results: Vec::new(), residuals: Vec::new(), status: Status::Ok, csv_columns: None }
    }

    pub fn write_json(&self, mut out: impl Write) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut out, self).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out).map_err(|e| CliError::Io(e.to_string()))
    }

    fn columns(&self) -> Vec<String> {
        if let Some(c) = &self.csv_columns {
            return c.iter().map(|s| s.to_string()).collect();
        }
        let mut cols: Vec<String> = Vec::new();
        for row in &self.results {
            for k in row.keys() {
                if !cols.iter().any(|c| c == k) {
                    cols.push(k.to_string());
                }
            }
        }
        cols
    }

    /// The results table with a header row.
    pub fn write_csv(&self, out: impl Write) -> Result<(), CliError> {
        let cols = self.columns();
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&cols).map_err(io)?;
        for row in &self.results {
            let rec: Vec<String> = cols.iter().map(|c| row.get(c).map(Cell::csv_text).unwrap_or_default()).collect();
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}
