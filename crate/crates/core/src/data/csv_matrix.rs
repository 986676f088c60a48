use std::fs;
use std::path::Path;

use super::FeatureMatrix;
use crate::error::{Error, Result};

/// Parses a rectangular numeric CSV (comma separator, `.` decimal point).
/// Lines and columns in diagnostics are 1-based.
pub fn parse_csv_matrix(text: &str, skip_header: bool) -> Result<FeatureMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(skip_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let first_line = if skip_header { 2 } else { 1 };
    let mut cols = None;
    let mut values = Vec::new();
    let mut rows = 0usize;
    for (i, record) in reader.records().enumerate() {
        let line = first_line + i;
        let record = record.map_err(|e| Error::Format(format!("line {line}: {e}")))?;
        match cols {
            None => cols = Some(record.len()),
            Some(c) if c != record.len() => {
                return Err(Error::Format(format!(
                    "ragged row at line {line}: {} fields, expected {c}",
                    record.len()
                )))
            }
            _ => {}
        }
        for (j, cell) in record.iter().enumerate() {
            let v: f32 = cell.parse().map_err(|_| Error::Parse {
                row: line,
                col: j + 1,
                msg: format!("not a number: {cell:?}"),
            })?;
            values.push(v);
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::Format("CSV contains no data rows".into()))?;
    FeatureMatrix::new(rows, cols, values)
}

pub fn load_csv_matrix(path: impl AsRef<Path>, skip_header: bool) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv_matrix(&text, skip_header)
}
