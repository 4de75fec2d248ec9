//! Row sets written as CSV or as JSON arrays of records.

use crate::format::fmt17;
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Int(x as i64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Emit a lone JSON object rather than a one-element array.
    pub single: bool,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            single: false,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => fmt17(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let records: Vec<String> = self.rows.iter().map(|row| self.record(row)).collect();
        if self.single && records.len() == 1 {
            return format!("{}\n", records[0]);
        }
        let mut out = String::from("[");
        for (k, r) in records.iter().enumerate() {
            out.push_str(if k == 0 { "\n  " } else { ",\n  " });
            out.push_str(r);
        }
        out.push_str(if records.is_empty() { "]\n" } else { "\n]\n" });
        out
    }

    fn record(&self, row: &[Cell]) -> String {
        let mut out = String::from("{");
        for (k, (name, cell)) in self.columns.iter().zip(row).enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{}: ", quote(name));
            match cell {
                Cell::Num(x) if x.is_finite() => out.push_str(&fmt17(*x)),
                Cell::Num(_) => out.push_str("null"),
                Cell::Int(i) => out.push_str(&i.to_string()),
                Cell::Text(s) => out.push_str(&quote(s)),
            }
        }
        out.push('}');
        out
    }
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
