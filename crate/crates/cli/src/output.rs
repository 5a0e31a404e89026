use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{Map, Value};

use crate::args::{Format, OUTPUT_DIR_ENV};

const SIGNIFICANT_DIGITS: i32 = 12;

/// `%.12g`: 12 significant digits, trailing zeros trimmed, exponent form
/// outside `[1e-4, 1e12)`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIGNIFICANT_DIGITS).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Round-trip through [`format_number`] so JSON carries the same digits as CSV.
fn json_number(x: f64) -> Value {
    format_number(x)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json_number(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<String>> for Cell {
    fn from(s: Option<String>) -> Self {
        s.map_or(Cell::Empty, Cell::Text)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.into_inner().context("flushing csv buffer")
    }

    /// `{"config": ..., "rows": [{column: value}, ...]}`.
    pub fn to_json(&self, config: Value) -> Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("config".into(), config);
        doc.insert("rows".into(), Value::Array(rows));
        let mut out = serde_json::to_vec_pretty(&Value::Object(doc))?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn render(&self, format: Format, config: Value) -> Result<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(config),
        }
    }
}

pub enum Destination {
    Stdout,
    File(PathBuf),
}

/// `-` is stdout; otherwise the explicit path, or `<stem>.<ext>` in the output directory.
pub fn destination(output: Option<&Path>, stem: &str, format: Format) -> Destination {
    match output {
        Some(p) if p == Path::new("-") => Destination::Stdout,
        Some(p) => Destination::File(p.to_path_buf()),
        None => {
            let dir = std::env::var_os(OUTPUT_DIR_ENV).map_or_else(|| PathBuf::from("."), PathBuf::from);
            Destination::File(dir.join(format!("{stem}.{}", format.extension())))
        }
    }
}

pub fn emit(dest: &Destination, bytes: &[u8]) -> Result<()> {
    match dest {
        Destination::Stdout => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
        Destination::File(path) => {
            fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_format() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-1.25), "-1.25");
        assert_eq!(format_number(1.0 / 3f64.ln()), "0.910239226627");
        assert_eq!(format_number(6.952_581e-12), "6.952581e-12");
        assert_eq!(format_number(123456789012.0), "123456789012");
        assert_eq!(format_number(1234567890123.0), "1.23456789012e+12");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(0.00001), "1e-05");
        assert_eq!(format_number(9.999_999_999_999_9), "10");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["a", "b", "note"]);
        t.push(vec![1.5.into(), 2u64.into(), "x, y".into()]);
        t.push(vec![f64::NAN.into(), 0u64.into(), Cell::Empty]);
        let s = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(s, "a,b,note\n1.5,2,\"x, y\"\nnan,0,\n");
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(["t", "e"]);
        t.push(vec![0.1.into(), f64::NAN.into()]);
        let v: Value = serde_json::from_slice(&t.to_json(serde_json::json!({"n": 3})).unwrap()).unwrap();
        assert_eq!(v["config"]["n"], 3);
        assert_eq!(v["rows"][0]["t"], 0.1);
        assert!(v["rows"][0]["e"].is_null());
    }
}
