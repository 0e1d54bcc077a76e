//! CSV export: header row `id,<columns...>`, missing values as empty fields.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{Column, ColumnKind, FeatureMatrix, Row, Value};

pub fn write_csv(m: &FeatureMatrix, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(m, file)
}

pub fn write_csv_to<W: Write>(m: &FeatureMatrix, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec!["id".to_string()];
    header.extend(m.columns.iter().map(|c| c.name.clone()));
    w.write_record(&header)?;
    for row in &m.rows {
        let mut record = vec![row.id.clone()];
        record.extend(row.values.iter().map(|v| match v {
            Value::Num(x) => x.to_string(),
            Value::Nom(s) => s.clone(),
            Value::Missing => String::new(),
        }));
        w.write_record(&record)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`]; CSV carries no types, so the column
/// schema is supplied by the caller.
pub fn read_csv(path: &Path, columns: &[Column]) -> Result<FeatureMatrix> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(file, columns, &path.display().to_string())
}

pub fn read_csv_from<R: Read>(input: R, columns: &[Column], source: &str) -> Result<FeatureMatrix> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = r.headers()?.clone();
    let expected: Vec<&str> = std::iter::once("id")
        .chain(columns.iter().map(|c| c.name.as_str()))
        .collect();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(Error::parse(
            source,
            1,
            "header does not match the column schema",
        ));
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let id = record.get(0).unwrap_or_default().to_string();
        let values = columns
            .iter()
            .zip(record.iter().skip(1))
            .map(|(col, field)| {
                if field.is_empty() {
                    return Ok(Value::Missing);
                }
                match &col.kind {
                    ColumnKind::Numeric => field.parse::<f64>().map(Value::Num).map_err(|_| {
                        Error::parse(source, line, format!("'{field}' is not numeric"))
                    }),
                    ColumnKind::Nominal(domain) if domain.iter().any(|d| d == field) => {
                        Ok(Value::Nom(field.to_string()))
                    }
                    ColumnKind::Nominal(_) => Err(Error::parse(
                        source,
                        line,
                        format!("'{field}' is not in the domain of {}", col.name),
                    )),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(Row { id, values });
    }
    Ok(FeatureMatrix {
        columns: columns.to_vec(),
        rows,
        target: columns.last().map(|c| c.name.clone()).unwrap_or_default(),
        provenance: Vec::new(),
    })
}
