//! CSV matrix files and JSONL records.
//!
//! Matrices are UTF-8 CSV with `.` decimals and no header unless
//! requested; rows are patterns/queries, columns are features. Values
//! are written with Rust's shortest round-trip formatting, so a matrix
//! written by any command re-reads to bit-identical `f64`s.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::CliError;

/// Reads a rectangular CSV matrix of finite reals.
pub fn read_matrix(path: &Path, header: bool) -> Result<Vec<Vec<f64>>, CliError> {
    let file = File::open(path).map_err(|e| {
        CliError::Usage(format!("cannot open {}: {e}", path.display()))
    })?;
    let reader = BufReader::new(file);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| {
            CliError::Usage(format!("read error in {}: {e}", path.display()))
        })?;
        if lineno == 0 && header {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(',')
            .map(|cell| {
                let cell = cell.trim();
                cell.parse::<f64>().map_err(|_| {
                    CliError::Usage(format!(
                        "{}:{}: cell {cell:?} is not a real number",
                        path.display(),
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Usage(format!(
                "{}:{}: nonfinite value",
                path.display(),
                lineno + 1
            )));
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(CliError::Usage(format!(
                    "{}:{}: ragged row ({} cells, expected {w})",
                    path.display(),
                    lineno + 1,
                    row.len()
                )));
            }
            _ => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Usage(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// Writes a matrix as CSV, one row per line.
pub fn write_matrix(path: &Path, rows: impl Iterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| {
        CliError::Usage(format!("cannot create {}: {e}", path.display()))
    })?;
    let mut out = BufWriter::new(file);
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| format_f64(*v)).collect();
        writeln!(out, "{}", line.join(",")).map_err(internal)?;
    }
    out.flush().map_err(internal)?;
    Ok(())
}

/// Shortest decimal that re-parses to the identical bit pattern.
pub fn format_f64(v: f64) -> String {
    let s = format!("{v}");
    debug_assert_eq!(s.parse::<f64>().ok(), Some(v));
    s
}

/// Opens a JSONL sink.
pub fn create_writer(path: &Path) -> Result<BufWriter<File>, CliError> {
    let file = File::create(path).map_err(|e| {
        CliError::Usage(format!("cannot create {}: {e}", path.display()))
    })?;
    Ok(BufWriter::new(file))
}

pub fn internal(e: std::io::Error) -> CliError {
    CliError::Internal(format!("i/o failure: {e}"))
}
