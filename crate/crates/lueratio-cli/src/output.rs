use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    /// Shortest text that parses back to the same double.
    fn text(&self) -> String {
        match *self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => Value::from(v),
            Cell::Float(v) => serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(v) => Value::Bool(v),
        }
    }
}

/// Rows in grid order under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(|e| CliError::io("csv buffer", e))?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).map_err(|e| CliError::io("csv buffer", e))?;
        }
        w.into_inner().map_err(|e| CliError::io("csv buffer", e))
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Top-level JSON document: schema version, the config and a payload.
pub fn json_document(config: &RunConfig, key: &str, payload: Value) -> Result<Vec<u8>, CliError> {
    #[derive(Serialize)]
    struct Doc<'a> {
        schema_version: u32,
        config: &'a RunConfig,
        #[serde(flatten)]
        payload: Map<String, Value>,
    }
    let mut payload_map = Map::new();
    payload_map.insert(key.to_string(), payload);
    let doc = Doc { schema_version: SCHEMA_VERSION, config, payload: payload_map };
    let mut out = serde_json::to_vec_pretty(&doc).map_err(|e| CliError::io("json buffer", e))?;
    out.push(b'\n');
    Ok(out)
}

pub fn render(config: &RunConfig, table: &Table) -> Result<Vec<u8>, CliError> {
    match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => json_document(config, "rows", table.json_rows()),
    }
}

/// Writes to the configured path, or standard output without one.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(p.display(), e)),
        None => std::io::stdout().write_all(bytes).map_err(|e| CliError::io("stdout", e)),
    }
}
