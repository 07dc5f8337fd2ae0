//! Deterministic CSV reading and writing.
//!
//! Floats are emitted in fixed 9-significant-digit scientific notation so
//! repeated runs produce byte-identical files.

use crate::errors::CliError;
use std::fs;
use std::path::Path;

/// Fixed float formatting for all emitted numbers.
pub fn fmt_f(x: f64) -> String {
    format!("{x:.8e}")
}

/// Read a numeric CSV with one header row and a fixed column count.
/// Reports the 1-based line number on any malformed row.
pub fn read_numeric_csv(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if idx == 0 {
            // header row; tolerate but verify the column count
            if trimmed.split(',').count() != columns {
                return Err(CliError::Input(format!(
                    "{}:{line_no}: expected {columns} columns in header",
                    path.display()
                )));
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').collect();
        if fields.len() != columns {
            return Err(CliError::Input(format!(
                "{}:{line_no}: expected {columns} columns, found {}",
                path.display(),
                fields.len()
            )));
        }
        let mut row = Vec::with_capacity(columns);
        for f in fields {
            row.push(f.trim().parse::<f64>().map_err(|_| {
                CliError::Input(format!(
                    "{}:{line_no}: not a number: {f:?}",
                    path.display()
                ))
            })?);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no data rows",
            path.display()
        )));
    }
    Ok(rows)
}

/// Write text to a file, or to stdout when no path is given.
pub fn write_out(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, content)
                .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}
