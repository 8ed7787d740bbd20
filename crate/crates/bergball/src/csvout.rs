//! Atomic text and CSV output with bit-stable float formatting.
//!
//! Experiment outputs double as regression baselines, so the writers here
//! aim at byte stability: floats are rendered in scientific notation with
//! 17 significant digits (enough to round-trip any f64 exactly), rows keep
//! their insertion order, and files are written to a temporary sibling and
//! renamed into place so readers never observe a half-written file.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Renders a float with 17 significant digits; round-trips any f64.
pub fn float_cell(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a boolean flag as `1` or `0`.
pub fn flag_cell(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

/// A CSV table with a fixed header row.
#[derive(Debug, Clone)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; its width must match the header.
    pub fn push_row(&mut self, cells: Vec<String>) -> Result<()> {
        if cells.len() != self.header.len() {
            return Err(Error::InvalidArgument(format!(
                "row has {} cells for a {}-column table",
                cells.len(),
                self.header.len()
            )));
        }
        self.rows.push(cells);
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// The table as CSV text with RFC-style quoting.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", render_row(&self.header));
        for row in &self.rows {
            let _ = writeln!(out, "{}", render_row(row));
        }
        out
    }

    /// Renders and writes the table atomically.
    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &self.render())
    }
}

fn render_row(cells: &[String]) -> String {
    cells
        .iter()
        .map(|c| quote_cell(c))
        .collect::<Vec<_>>()
        .join(",")
}

fn quote_cell(cell: &str) -> String {
    let needs_quoting = cell.contains([',', '"', '\n', '\r'])
        || cell.starts_with(' ')
        || cell.ends_with(' ');
    if needs_quoting {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Writes `contents` to `path` atomically: parent directories are created,
/// the bytes go to a `.tmp` sibling, and a rename publishes the file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!("{file_name}.tmp"));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
