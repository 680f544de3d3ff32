//! CSV and JSON rendering with a `# key=value` provenance header.
//!
//! Floats are written in Rust's shortest round-trip form, so a file
//! re-parses to the exact values that produced it.

use std::fmt::Display;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::domain(format!("unknown output format `{other}`"))),
        }
    }
}

/// Ordered `key=value` pairs echoed at the top of every output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub entries: Vec<(String, String)>,
}

impl Header {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn extend(&mut self, other: &Header) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_comment_lines(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("# {k}={v}\n")).collect()
    }

    fn to_json(&self) -> Value {
        Value::Object(self.entries.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect::<Map<_, _>>())
    }
}

/// Named columns of floats.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows }
    }

    pub fn to_csv(&self, header: &Header) -> String {
        let mut out = header.to_comment_lines();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, header: &Header) -> Result<String> {
        let mut obj = Map::new();
        obj.insert("header".into(), header.to_json());
        obj.insert("columns".into(), serde_json::to_value(&self.columns)?);
        obj.insert("rows".into(), serde_json::to_value(&self.rows)?);
        Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
    }

    pub fn render(&self, header: &Header, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv(header)),
            Format::Json => self.to_json(header),
        }
    }
}

/// A JSON document with the header next to an arbitrary serializable body.
pub fn json_document<T: Serialize>(header: &Header, body: &T) -> Result<String> {
    let mut obj = Map::new();
    obj.insert("header".into(), header.to_json());
    obj.insert("data".into(), serde_json::to_value(body)?);
    Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
}

/// Parse a CSV written by [`Table::to_csv`] (or any headed numeric CSV).
pub fn parse_csv(text: &str) -> Result<(Header, Table)> {
    let mut header = Header::new();
    let mut columns: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                header.push(k.trim(), v.trim());
            }
            continue;
        }
        if columns.is_none() {
            columns = Some(line.split(',').map(|c| c.trim().to_string()).collect());
            continue;
        }
        let row = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::domain(format!("line {}: {e}", lineno + 1)))?;
        rows.push(row);
    }
    let columns = columns.ok_or_else(|| Error::domain("CSV has no column line"))?;
    if rows.iter().any(|r| r.len() != columns.len()) {
        return Err(Error::domain("ragged CSV rows"));
    }
    Ok((header, Table { columns, rows }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let t = Table::new(&["a", "b"], vec![vec![0.1, 1.0 / 3.0], vec![-2.5e-300, f64::MAX]]);
        let h = Header::new().with("seed", 7).with("scheme", "tanh_sinh");
        let (h2, t2) = parse_csv(&t.to_csv(&h)).unwrap();
        assert_eq!(h, h2);
        assert_eq!(t, t2);
    }

    #[test]
    fn json_has_header() {
        let t = Table::new(&["x"], vec![vec![1.5]]);
        let v: Value = serde_json::from_str(&t.to_json(&Header::new().with("k", "v")).unwrap()).unwrap();
        assert_eq!(v["header"]["k"], "v");
        assert_eq!(v["rows"][0][0], 1.5);
    }
}
