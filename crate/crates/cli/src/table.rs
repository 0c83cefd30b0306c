//! CSV tables of named float columns, written with shortest round-trip
//! formatting so files reproduce in-memory values exactly.

use crate::commands::CliError;
use std::fmt::Write as _;
use std::path::Path;

pub struct Table {
    pub headers: Vec<String>,
    /// Column-major values; all columns share the row count.
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            columns: headers.iter().map(|_| Vec::new()).collect(),
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.columns.len());
        for (column, value) in self.columns.iter_mut().zip(row) {
            column.push(*value);
        }
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in 0..self.n_rows() {
            for (i, column) in self.columns.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", column[row]);
            }
            out.push('\n');
        }
        out
    }
}

pub fn read_table(path: &Path) -> Result<Table, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_table(&text, path)
}

fn parse_table(text: &str, path: &Path) -> Result<Table, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Data(format!("{}: empty file", path.display())))?;
    let headers: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let mut columns: Vec<Vec<f64>> = headers.iter().map(|_| Vec::new()).collect();
    for (idx, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != headers.len() {
            return Err(CliError::Data(format!(
                "{}: row {} has {} cells, expected {}",
                path.display(),
                idx + 2,
                cells.len(),
                headers.len()
            )));
        }
        for (column, cell) in columns.iter_mut().zip(&cells) {
            let value: f64 = cell.trim().parse().map_err(|_| {
                CliError::Data(format!(
                    "{}: row {}: `{}` is not a number",
                    path.display(),
                    idx + 2,
                    cell
                ))
            })?;
            column.push(value);
        }
    }
    Ok(Table { headers, columns })
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}
