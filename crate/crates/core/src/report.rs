//! Row tables and their CSV / JSON / aligned-text renderings.
//!
//! Floats are printed with 15 significant digits in `%g` style, so identical
//! inputs give byte-identical output.

use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => fmt_float(*v),
            Cell::Float(_) | Cell::Null => "null".to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// `%.15g`: 15 significant digits, trailing zeros removed, exponent form
/// outside 1e-4 ≤ |v| < 1e15.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
    Pretty,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "pretty" => Ok(Format::Pretty),
            other => Err(Error::config("format", format!("expected csv, json or pretty, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
            Format::Pretty => self.write_pretty(out),
        }
    }

    pub fn write_csv(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Array of objects whose keys follow the column order.
    pub fn write_json(&self, out: &mut dyn Write) -> Result<()> {
        let mut s = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            s.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&serde_json::to_string(col).expect("strings serialize"));
                s.push_str(": ");
                s.push_str(&cell.json());
            }
            s.push('}');
        }
        s.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn write_pretty(&self, out: &mut dyn Write) -> Result<()> {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(j, c)| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0).max(c.len()))
            .collect();
        let line = |fields: Vec<&str>| {
            let parts: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = line(self.columns.clone());
        for r in &cells {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out.write_all(s.as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(fmt_float(0.5), "0.5");
        assert_eq!(fmt_float(4.5), "4.5");
        assert_eq!(fmt_float(-0.125), "-0.125");
        assert_eq!(fmt_float(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_float(1e-7), "1e-07");
        assert_eq!(fmt_float(-2.5e20), "-2.5e+20");
        assert_eq!(fmt_float(123456789012345.0), "123456789012345");
        assert_eq!(fmt_float(1e15), "1e+15");
        assert_eq!(fmt_float(0.0001), "0.0001");
        assert_eq!(fmt_float(f64::NAN), "nan");
        assert_eq!(fmt_float(0.0), "0");
    }

    #[test]
    fn renderings() {
        let mut t = Table::new(&["n", "energy", "status"]);
        t.push(vec![0u32.into(), 0.5.into(), "ok".into()]);
        t.push(vec![1u32.into(), Cell::Null, "a,b".into()]);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "n,energy,status\n0,0.5,ok\n1,,\"a,b\"\n");
        let mut json = Vec::new();
        t.write_json(&mut json).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v[0]["energy"], 0.5);
        assert!(v[1]["energy"].is_null());
        let text = String::from_utf8(json).unwrap();
        assert!(text.find("\"n\"").unwrap() < text.find("\"energy\"").unwrap());
        let mut pretty = Vec::new();
        t.write_pretty(&mut pretty).unwrap();
        assert_eq!(String::from_utf8(pretty).unwrap().lines().count(), 3);
        assert!("xml".parse::<Format>().is_err());
    }
}
