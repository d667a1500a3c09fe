//! CSV formats: the daily market table, run traces, predictions and error
//! series. Floats are written with Rust's shortest round-trip formatting so a
//! written table reloads bit-identically.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use gabp_core::evolve::GenerationBest;
use gabp_core::ingest::RawTable;
use gabp_core::metrics::EvalReport;
use gabp_core::Dataset;

use crate::error::{Error, Result};

pub const DATE_COLUMN: &str = "date";
const DATE_FORMAT: &str = "%Y-%m-%d";

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::MalformedRow { line, reason: e.to_string() }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

/// Loads `date` plus the `schema` columns; other columns are ignored.
pub fn load_csv(path: &Path, schema: &[&str]) -> Result<RawTable> {
    read_table(open(path)?, schema)
}

pub fn read_table<R: Read>(reader: R, schema: &[&str]) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let find = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::SchemaMismatch(format!("column `{name}` not in header")))
    };
    let date_col = find(DATE_COLUMN)?;
    let cols = schema.iter().map(|c| find(c)).collect::<Result<Vec<_>>>()?;

    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut values: Vec<Vec<Option<f64>>> = vec![Vec::new(); schema.len()];
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let malformed = |reason: String| Error::MalformedRow { line, reason };
        let raw_date = &record[date_col];
        let date = NaiveDate::parse_from_str(raw_date, DATE_FORMAT)
            .map_err(|e| malformed(format!("date `{raw_date}`: {e}")))?;
        if let Some(&prev) = dates.last() {
            if date == prev {
                return Err(Error::DuplicateDate { line, date });
            }
            if date < prev {
                return Err(Error::NonMonotonicDate { line, date });
            }
        }
        dates.push(date);
        for ((&c, name), out) in cols.iter().zip(schema).zip(&mut values) {
            let cell = record[c].trim();
            let v = if cell.is_empty() {
                None
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| malformed(format!("column `{name}`: `{cell}` is not a number")))?;
                if !v.is_finite() {
                    return Err(malformed(format!("column `{name}`: `{cell}` is not finite")));
                }
                Some(v)
            };
            out.push(v);
        }
    }
    let columns = schema.iter().map(|s| s.to_string()).zip(values).collect();
    Ok(RawTable::new(dates, columns)?)
}

pub fn write_table<W: Write>(writer: W, table: &RawTable) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    let names: Vec<&str> = table.column_names().collect();
    w.write_record(std::iter::once(DATE_COLUMN).chain(names.iter().copied()))?;
    let columns: Vec<&[Option<f64>]> = names.iter().map(|n| table.column(n).expect("listed column")).collect();
    for (i, date) in table.dates().iter().enumerate() {
        let mut row = vec![date.format(DATE_FORMAT).to_string()];
        row.extend(columns.iter().map(|c| c[i].map_or_else(String::new, |v| v.to_string())));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_table(path: &Path, table: &RawTable) -> Result<()> {
    write_table(create(path)?, table).map_err(|e| wrap_write(path, e))
}

fn wrap_write(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    }
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(create(path)?);
    let run = || -> Result<(), csv::Error> {
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    };
    run().map_err(|e| wrap_write(path, e))
}

/// `generation,best_fitness`.
pub fn write_trace(path: &Path, trace: &[GenerationBest]) -> Result<()> {
    write_rows(
        path,
        &["generation", "best_fitness"],
        trace.iter().map(|g| [g.generation.to_string(), g.best_fitness.to_string()]),
    )
}

/// One row of `predictions.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub date: NaiveDate,
    pub actual: f64,
    pub predicted: f64,
    pub split: Option<String>,
}

pub fn write_predictions(path: &Path, rows: &[PredictionRow]) -> Result<()> {
    let with_split = rows.iter().any(|r| r.split.is_some());
    let mut header = vec![DATE_COLUMN, "actual", "predicted"];
    if with_split {
        header.push("split");
    }
    write_rows(
        path,
        &header,
        rows.iter().map(|r| {
            let mut v = vec![r.date.format(DATE_FORMAT).to_string(), r.actual.to_string(), r.predicted.to_string()];
            if with_split {
                v.push(r.split.clone().unwrap_or_default());
            }
            v
        }),
    )
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let mut rdr = csv::Reader::from_reader(open(path)?);
    let header = rdr.headers().map_err(csv_error)?.clone();
    let find = |name: &str| header.iter().position(|h| h == name);
    let need = |name: &str| {
        find(name).ok_or_else(|| Error::SchemaMismatch(format!("column `{name}` not in header")))
    };
    let (date_col, actual_col, pred_col) = (need(DATE_COLUMN)?, need("actual")?, need("predicted")?);
    let split_col = find("split");
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        let num = |c: usize| {
            record[c]
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::MalformedRow { line, reason: format!("`{}` is not a number", &record[c]) })
        };
        let date = NaiveDate::parse_from_str(&record[date_col], DATE_FORMAT)
            .map_err(|e| Error::MalformedRow { line, reason: format!("date: {e}") })?;
        out.push(PredictionRow {
            date,
            actual: num(actual_col)?,
            predicted: num(pred_col)?,
            split: split_col.map(|c| record[c].to_string()),
        });
    }
    Ok(out)
}

/// `index,error,error_pct`; `error_pct` is empty where the realized value is zero.
pub fn write_errors(path: &Path, report: &EvalReport) -> Result<()> {
    write_rows(
        path,
        &["index", "error", "error_pct"],
        report
            .error_series
            .iter()
            .zip(&report.error_pct_series)
            .enumerate()
            .map(|(i, (e, p))| [i.to_string(), e.to_string(), p.map_or_else(String::new, |v| v.to_string())]),
    )
}

/// Normalized features, natural-unit target and split label per sample.
pub fn write_dataset(path: &Path, data: &Dataset) -> Result<()> {
    let mut header = vec![DATE_COLUMN];
    header.extend(data.feature_names.iter().map(String::as_str));
    header.extend(["target", "split"]);
    let mut split = vec!["train"; data.len()];
    for &i in &data.test_idx {
        split[i] = "test";
    }
    write_rows(
        path,
        &header,
        (0..data.len()).map(|i| {
            let mut row = vec![data.dates[i].format(DATE_FORMAT).to_string()];
            row.extend(data.row(i).iter().map(f64::to_string));
            row.push(data.y[i].to_string());
            row.push(split[i].to_string());
            row
        }),
    )
}
