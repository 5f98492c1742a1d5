//! Tabular output in CSV or JSON.

use std::fmt;
use std::io::Write;

use serde_json::{Map, Number, Value as Json};

use crate::error::{Error, Result};
use crate::specialfn::{InfoQuantity, Probability};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Units {
    #[default]
    Bits,
    Nats,
}

impl Units {
    pub fn scale(self, x: InfoQuantity) -> f64 {
        match self {
            Units::Bits => x.bits(),
            Units::Nats => x.nats(),
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            Units::Bits => "bits",
            Units::Nats => "nats",
        }
    }

    /// Column name for an information-valued quantity.
    pub fn column(self, name: &str) -> String {
        format!("{name}_{}", self.suffix())
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<Probability> for Cell {
    fn from(p: Probability) -> Self {
        Cell::Num(p.get())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

/// Fixed-point rendering with `precision` digits after the point.
pub fn render_number(x: f64, precision: usize) -> String {
    let s = format!("{x:.precision$}");
    // "-0.000" → "0.000"
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

impl Cell {
    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Num(x) => render_number(*x, precision),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }

    fn to_json(&self, precision: usize) -> Json {
        match self {
            Cell::Num(x) => render_number(*x, precision)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map(Json::Number)
                .unwrap_or(Json::Null),
            Cell::Int(i) => Json::from(*i),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Text(t) => Json::String(t.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Units of information columns, generation parameters.
    pub metadata: Vec<(String, String)>,
}

impl OutputTable {
    pub fn new<S: Into<String>>(
        name: &str,
        columns: impl IntoIterator<Item = S>,
        units: Units,
    ) -> Self {
        OutputTable {
            name: name.to_string(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            metadata: vec![("units".to_string(), units.to_string())],
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::RaggedRow {
                expected: self.columns.len(),
                got: row.len(),
            });
        }
        if let Some(bad) = row.iter().find_map(|c| match c {
            Cell::Num(x) if !x.is_finite() => Some(*x),
            _ => None,
        }) {
            return Err(Error::Output(format!(
                "non-finite value {bad} in table {}",
                self.name
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name, for tests and post-processing.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        self.rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Num(x) => Some(*x),
                Cell::Int(v) => Some(*v as f64),
                _ => None,
            })
            .collect()
    }

    fn write_csv<W: Write>(&self, out: &mut W, precision: usize) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}").map_err(io_err)?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render(precision)))
                .map_err(csv_err)?;
        }
        w.flush().map_err(io_err)
    }

    fn to_json(&self, precision: usize) -> Json {
        Json::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Json> = self
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(|c| c.to_json(precision)))
                        .collect();
                    Json::Object(obj)
                })
                .collect(),
        )
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Output(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Output(e.to_string())
}

/// Writes `tables` in `format`.
///
/// CSV: each table preceded by `# key=value` metadata lines, tables
/// separated by a blank line. JSON: a single table is an array of row
/// objects; several tables form an object keyed by table name.
pub fn write_tables<W: Write>(
    out: &mut W,
    tables: &[OutputTable],
    format: Format,
    precision: usize,
) -> Result<()> {
    match format {
        Format::Csv => {
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.write_all(b"\n").map_err(io_err)?;
                }
                writeln!(out, "# table={}", t.name).map_err(io_err)?;
                t.write_csv(out, precision)?;
            }
        }
        Format::Json => {
            let doc = match tables {
                [single] => single.to_json(precision),
                many => Json::Object(
                    many.iter()
                        .map(|t| (t.name.clone(), t.to_json(precision)))
                        .collect(),
                ),
            };
            serde_json::to_writer_pretty(&mut *out, &doc)
                .map_err(|e| Error::Output(e.to_string()))?;
            writeln!(out).map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn render_tables(tables: &[OutputTable], format: Format, precision: usize) -> Result<String> {
    let mut buf = Vec::new();
    write_tables(&mut buf, tables, format, precision)?;
    String::from_utf8(buf).map_err(|e| Error::Output(e.to_string()))
}
