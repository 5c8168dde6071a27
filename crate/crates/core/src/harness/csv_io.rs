//! Dataset CSV: one point per row, one column per coordinate. A missing entry
//! is the configured token (default `?`) or an empty cell. A first row that
//! does not parse as data is treated as a header.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::point::{Dataset, MissingPoint};

#[derive(Clone, Debug)]
pub struct CsvOptions {
    pub missing_token: String,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            missing_token: "?".to_string(),
        }
    }
}

fn parse_cell(cell: &str, token: &str) -> Option<Option<f64>> {
    let cell = cell.trim();
    if cell.is_empty() || cell == token {
        return Some(None);
    }
    cell.parse::<f64>().ok().filter(|v| v.is_finite()).map(Some)
}

pub fn read_dataset(reader: impl Read, options: &CsvOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut points = Vec::new();
    let mut dim = None;
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: row + 1,
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(row + 1, |p| p.line() as usize);
        if record.iter().all(|c| c.trim().is_empty()) && record.len() <= 1 {
            continue;
        }
        let cells: Vec<Option<Option<f64>>> = record.iter().map(|c| parse_cell(c, &options.missing_token)).collect();
        if cells.iter().any(Option::is_none) {
            if points.is_empty() && dim.is_none() {
                // Header row.
                dim = Some(record.len());
                continue;
            }
            let bad = record
                .iter()
                .zip(&cells)
                .find(|(_, c)| c.is_none())
                .map(|(s, _)| s.to_string())
                .unwrap_or_default();
            return Err(Error::Parse {
                line,
                msg: format!("not a number or missing token: {bad:?}"),
            });
        }
        let entries: Vec<Option<f64>> = cells.into_iter().map(Option::unwrap).collect();
        match dim {
            Some(d) if d != entries.len() => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {d} columns, found {}", entries.len()),
                })
            }
            _ => dim = Some(entries.len()),
        }
        points.push(MissingPoint::from_options(&entries));
    }
    Dataset::with_dim(dim.unwrap_or(0), points)
}

pub fn write_dataset(mut writer: impl Write, data: &Dataset, options: &CsvOptions) -> Result<()> {
    let mut line = String::new();
    for p in data.points() {
        line.clear();
        for i in 0..p.dim() {
            if i > 0 {
                line.push(',');
            }
            match p.get(i) {
                Some(v) => line.push_str(&format!("{v:?}")),
                None => line.push_str(&options.missing_token),
            }
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    Ok(())
}
