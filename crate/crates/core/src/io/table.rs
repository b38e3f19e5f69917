//! Labeled matrix files: first column holds row labels, header row holds
//! column labels.
//!
//! Tab- and semicolon-delimited files may use decimal commas. Output is
//! always comma-delimited with decimal points.

use std::path::Path;

use crate::error::{Error, Result, Violation};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledTable {
    pub corner: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: Matrix,
}

fn detect_delimiter(header: &str) -> u8 {
    if header.contains('\t') {
        b'\t'
    } else if header.contains(';') {
        b';'
    } else {
        b','
    }
}

pub fn read_table(path: &Path) -> Result<LabeledTable> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Bundle(vec![Violation::file(&name, format!("cannot read: {e}"))]))?;
    parse_table(&text, &name)
}

/// Parses a table, collecting every bad cell before failing.
pub fn parse_table(text: &str, source: &str) -> Result<LabeledTable> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let header = text.lines().next().unwrap_or("");
    let delim = detect_delimiter(header);
    let decimal_comma = delim != b',';
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delim)
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut bad = Vec::new();
    let head = reader
        .headers()
        .map_err(|e| Error::Bundle(vec![Violation::file(source, format!("bad header: {e}"))]))?
        .clone();
    if head.len() < 2 {
        return Err(Error::Bundle(vec![Violation::file(
            source,
            "header needs a label column and at least one value column",
        )]));
    }
    let corner = head[0].to_string();
    let col_labels: Vec<String> = head.iter().skip(1).map(str::to_string).collect();
    let n = col_labels.len();
    let mut row_labels = Vec::new();
    let mut data = Vec::new();
    for (r, rec) in reader.records().enumerate() {
        let row = r + 1;
        let rec = match rec {
            Ok(rec) => rec,
            Err(e) => {
                bad.push(Violation::at(source, row, None, format!("unreadable row: {e}")));
                continue;
            }
        };
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != n + 1 {
            bad.push(Violation::at(
                source,
                row,
                None,
                format!("expected {} fields, found {}", n + 1, rec.len()),
            ));
            continue;
        }
        row_labels.push(rec[0].to_string());
        for (j, cell) in rec.iter().skip(1).enumerate() {
            let normalized;
            let s = if decimal_comma && cell.contains(',') {
                normalized = cell.replace(',', ".");
                normalized.as_str()
            } else {
                cell
            };
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => data.push(v),
                _ => {
                    bad.push(Violation::at(
                        source,
                        row,
                        Some(&col_labels[j]),
                        format!("'{cell}' is not a finite number"),
                    ));
                    data.push(0.0);
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(Error::Bundle(bad));
    }
    if row_labels.is_empty() {
        return Err(Error::Bundle(vec![Violation::file(source, "no data rows")]));
    }
    let values = Matrix::from_vec(row_labels.len(), n, data)?;
    Ok(LabeledTable {
        corner,
        row_labels,
        col_labels,
        values,
    })
}

/// Comma-delimited, shortest round-trip decimal for every value.
pub fn write_table(t: &LabeledTable) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec![t.corner.clone()];
    header.extend(t.col_labels.iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for (i, label) in t.row_labels.iter().enumerate() {
        let mut rec = vec![label.clone()];
        rec.extend(t.values.row(i).iter().map(|v| format!("{v}")));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
