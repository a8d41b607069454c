//! Tabular results and their CSV form.
//!
//! Floats are written with 9 significant digits in C `%#.9g` style: fixed
//! notation with trailing zeros kept when the decimal exponent lies in
//! `[-5, 9)`, otherwise `d.dddddddde±XX`. Unlike C, a value with no
//! fractional digits has no trailing decimal point. Rows end in LF; fields
//! holding a comma, quote or line break are quoted per RFC 4180.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Self::Str(s) => quote(s),
            Self::Int(v) => v.to_string(),
            Self::Float(v) => format_float(*v),
            Self::Empty => String::new(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Self::Str(v.to_string())
    }
}

/// `%#.9g`: 9 significant digits, trailing zeros kept.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        format!("{v:.*}", (8 - exp) as usize)
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header plus ordered rows.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Messages of lattice points that failed; each also has an error row.
    pub errors: Vec<String>,
}

impl MetricReport {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
            errors: Vec::new(),
        }
    }

    /// An error row: the scenario name, the message in the second column,
    /// the rest empty.
    pub fn push_error(&mut self, scenario: &str, message: String) {
        let mut row = vec![Cell::from(scenario), Cell::Str(format!("error: {message}"))];
        row.resize(self.header.len(), Cell::Empty);
        self.rows.push(row);
        self.errors.push(message);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

pub fn write_csv(report: &MetricReport, path: &Path) -> Result<()> {
    std::fs::write(path, report.to_csv()).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
