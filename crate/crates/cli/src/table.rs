//! Fixed-format CSV output: header row, comma separator, LF line endings,
//! floats with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            Cell::Float(x) => write!(out, "{}", format_float(*x)),
            Cell::Int(n) => write!(out, "{n}"),
            Cell::Text(s) => write!(out, "{s}"),
        }
        .expect("writing to a String cannot fail");
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

/// 17 significant digits in scientific notation, e.g. `5.0000000000000000e0`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Float value at `(row, column name)`.
    pub fn float(&self, row: usize, name: &str) -> Option<f64> {
        match self.rows.get(row)?.get(self.column(name)?)? {
            Cell::Float(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            Cell::Text(_) => None,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|source| CliError::Output { path: path.to_path_buf(), source })?;
        }
        fs::write(path, self.to_csv()).map_err(|source| CliError::Output { path: path.to_path_buf(), source })
    }
}
