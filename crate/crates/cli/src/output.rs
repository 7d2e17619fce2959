use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{Map, Number, Value};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::S(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

/// 17 significant digits, so a value survives a text round trip.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) => fmt_f64(*v),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(v) if v.is_finite() => json_f64(*v),
            Cell::F(_) | Cell::Null => Value::Null,
            Cell::I(v) => Value::from(*v),
            Cell::S(s) => Value::from(s.clone()),
            Cell::B(b) => Value::from(*b),
        }
    }
}

pub fn json_f64(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    fmt_f64(v).parse::<Number>().map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A finished command result.
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub table: Table,
    /// extra entries for the JSON "meta" object
    pub meta: Map<String, Value>,
}

fn to_json(r: &Report) -> Value {
    let rows: Vec<Value> = r
        .table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = r.table.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
            Value::Object(obj)
        })
        .collect();
    let mut meta = Map::new();
    meta.insert("command".into(), r.command.into());
    meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    meta.insert("git_hash".into(), env!("XS_GIT_HASH").into());
    meta.extend(r.meta.clone());
    let mut top = Map::new();
    top.insert("params".into(), r.params.clone());
    top.insert("rows".into(), Value::Array(rows));
    top.insert("meta".into(), Value::Object(meta));
    Value::Object(top)
}

fn write_to<W: Write>(r: &Report, format: Format, mut w: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(&r.table.columns)?;
            for row in &r.table.rows {
                wr.write_record(row.iter().map(Cell::csv))?;
            }
            wr.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &to_json(r))?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Writes to `out`, else to `<out_dir>/<command>.<ext>`, else to stdout.
/// Returns the path written, if any.
pub fn emit(r: &Report, format: Format, out: Option<&Path>, out_dir: Option<&Path>) -> Result<Option<PathBuf>, CliError> {
    let path = match (out, out_dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => {
            fs::create_dir_all(d)?;
            Some(d.join(format!("{}.{}", r.command, format.ext())))
        }
        (None, None) => None,
    };
    match &path {
        Some(p) => write_to(r, format, io::BufWriter::new(fs::File::create(p)?))?,
        None => write_to(r, format, io::stdout().lock())?,
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = fmt_f64(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        assert_eq!(json_f64(1.0 / 12.0).to_string(), "8.3333333333333329e-2");
        assert_eq!(json_f64(f64::NAN), Value::Null);
    }
}
