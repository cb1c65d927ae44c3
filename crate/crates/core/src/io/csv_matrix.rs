use std::fmt::Write as _;
use std::path::Path;

use csv::{ReaderBuilder, Trim};

use crate::error::{Error, Result};
use crate::signal::{MixingMatrix, SignalMatrix};

/// Parses a rectangular comma-separated table of reals, one row per line.
///
/// Locations in errors are 1-based.
pub fn parse_csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            column: 1,
            message: e.to_string(),
        })?;
        let mut values = Vec::with_capacity(record.len());
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: c + 1,
                message: format!("{cell:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: c + 1,
                    message: format!("{cell:?} is not finite"),
                });
            }
            values.push(v);
        }
        if let Some(first) = rows.first() {
            if values.len() != first.len() {
                return Err(Error::Parse {
                    row,
                    column: values.len().min(first.len()) + 1,
                    message: format!("row has {} values, expected {}", values.len(), first.len()),
                });
            }
        }
        rows.push(values);
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::Parse {
            row: 1,
            column: 1,
            message: "no data".into(),
        });
    }
    Ok(rows)
}

pub fn read_csv_rows(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv_rows(&text)
}

pub fn read_csv_matrix(path: impl AsRef<Path>) -> Result<SignalMatrix> {
    SignalMatrix::from_rows(&read_csv_rows(path)?)
}

pub fn read_mixing_matrix(path: impl AsRef<Path>) -> Result<MixingMatrix> {
    MixingMatrix::from_rows(&read_csv_rows(path)?)
}

/// 17 significant digits, enough to round-trip any finite double.
pub fn format_csv_rows(rows: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in rows {
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    out
}

pub fn write_csv_rows(path: impl AsRef<Path>, rows: &[Vec<f64>]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_csv_rows(rows)).map_err(|e| Error::io(path, e))
}

pub fn write_csv_matrix(path: impl AsRef<Path>, m: &SignalMatrix) -> Result<()> {
    write_csv_rows(path, &m.rows())
}
