//! Result tables and their CSV/JSON encodings.

use std::io::{self, Write};

use serde_json::{json, Map, Value};

use crate::config::OutputFormat;

/// Marker written for missing values.
pub const ABSENT: &str = "absent";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Absent,
}

impl Cell {
    /// Non-finite values become [`Cell::Absent`].
    pub fn num(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Absent
        }
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Absent, Cell::num)
    }

    pub fn count(n: usize) -> Self {
        Cell::Num(n as f64)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ResultTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, `None` for non-numeric cells.
    pub fn values(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }
}

/// Shortest round-trip decimal; scientific outside `[1e-5, 1e16)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn cell_text(cell: &Cell) -> String {
    match cell {
        Cell::Num(x) => format_float(*x),
        Cell::Text(s) => s.clone(),
        Cell::Absent => ABSENT.to_owned(),
    }
}

pub fn write_csv<W: Write>(table: &ResultTable, mut w: W) -> io::Result<()> {
    for (k, v) in &table.metadata {
        // Keep each comment on one line.
        writeln!(w, "# {k}: {}", v.replace(['\n', '\r'], " "))?;
    }
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    csv.write_record(&table.columns)?;
    for row in &table.rows {
        csv.write_record(row.iter().map(cell_text))?;
    }
    csv.flush()
}

pub fn to_json(table: &ResultTable) -> Value {
    let metadata: Map<String, Value> = table
        .metadata
        .iter()
        .map(|(k, v)| (k.clone(), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| match c {
                    Cell::Num(x) => json!(x),
                    Cell::Text(s) => json!(s),
                    Cell::Absent => Value::Null,
                })
                .collect()
        })
        .collect();
    json!({ "metadata": metadata, "columns": table.columns, "rows": rows })
}

pub fn write_json<W: Write>(table: &ResultTable, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, &to_json(table))?;
    w.write_all(b"\n")
}

pub fn emit<W: Write>(table: &ResultTable, format: OutputFormat, w: W) -> io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(table, w),
        OutputFormat::Json => write_json(table, w),
    }
}
