//! Aligned daily tables and their repair: linear gap filling and z-score
//! outlier replacement.

use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDate;
use thiserror::Error;

use crate::math;

/// Default |z| beyond which a cell is treated as an outlier.
pub const DEFAULT_Z_THRESHOLD: f64 = 5.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IngestError {
    #[error("duplicate date {date} at row {row}")]
    DuplicateDate { row: usize, date: NaiveDate },
    #[error("date {date} at row {row} precedes the previous row's date")]
    NonMonotonicDate { row: usize, date: NaiveDate },
    #[error("column `{column}` has {len} values, expected {expected}")]
    ColumnLength { column: String, len: usize, expected: usize },
    #[error("column `{column}` is listed twice")]
    DuplicateColumn { column: String },
    #[error("column `{column}` has a missing value at row {row} with no neighbour on one side")]
    EdgeGap { column: String, row: usize },
    #[error("column `{column}` has zero variance; outlier threshold undefined")]
    DegenerateColumn { column: String },
}

/// Provenance of a cell in a repaired table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CellFlag {
    Original,
    Interpolated,
    OutlierReplaced,
}

fn check_dates(dates: &[NaiveDate]) -> Result<(), IngestError> {
    for (row, pair) in dates.windows(2).enumerate() {
        let date = pair[1];
        if pair[1] == pair[0] {
            return Err(IngestError::DuplicateDate { row: row + 1, date });
        }
        if pair[1] < pair[0] {
            return Err(IngestError::NonMonotonicDate { row: row + 1, date });
        }
    }
    Ok(())
}

fn check_columns<T>(n: usize, columns: &[(String, Vec<T>)]) -> Result<(), IngestError> {
    for (i, (name, values)) in columns.iter().enumerate() {
        if values.len() != n {
            return Err(IngestError::ColumnLength {
                column: name.clone(),
                len: values.len(),
                expected: n,
            });
        }
        if columns[..i].iter().any(|(other, _)| other == name) {
            return Err(IngestError::DuplicateColumn { column: name.clone() });
        }
    }
    Ok(())
}

/// Daily series as loaded, possibly with gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    dates: Vec<NaiveDate>,
    columns: Vec<(String, Vec<Option<f64>>)>,
}

impl RawTable {
    pub fn new(
        dates: Vec<NaiveDate>,
        columns: Vec<(String, Vec<Option<f64>>)>,
    ) -> Result<Self, IngestError> {
        check_dates(&dates)?;
        check_columns(dates.len(), &columns)?;
        Ok(Self { dates, columns })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn missing_count(&self) -> usize {
        self.columns
            .iter()
            .map(|(_, v)| v.iter().filter(|c| c.is_none()).count())
            .sum()
    }
}

/// A gap-free table with per-cell provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceTable {
    dates: Vec<NaiveDate>,
    columns: Vec<RepairedColumn>,
}

#[derive(Debug, Clone, PartialEq)]
struct RepairedColumn {
    name: String,
    values: Vec<f64>,
    flags: Vec<CellFlag>,
}

impl PriceTable {
    /// Builds a table whose cells are all flagged `Original`.
    pub fn from_complete(
        dates: Vec<NaiveDate>,
        columns: Vec<(String, Vec<f64>)>,
    ) -> Result<Self, IngestError> {
        check_dates(&dates)?;
        check_columns(dates.len(), &columns)?;
        let columns = columns
            .into_iter()
            .map(|(name, values)| {
                let flags = alloc::vec![CellFlag::Original; values.len()];
                RepairedColumn { name, values, flags }
            })
            .collect();
        Ok(Self { dates, columns })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.find(name).map(|c| c.values.as_slice())
    }

    pub fn flags(&self, name: &str) -> Option<&[CellFlag]> {
        self.find(name).map(|c| c.flags.as_slice())
    }

    pub fn count_flag(&self, flag: CellFlag) -> usize {
        self.columns
            .iter()
            .map(|c| c.flags.iter().filter(|&&f| f == flag).count())
            .sum()
    }

    fn find(&self, name: &str) -> Option<&RepairedColumn> {
        self.columns.iter().find(|c| c.name == name)
    }
}

// Weighted average of the two anchors by distance; exact at integer ratios.
fn lerp(left: (usize, f64), right: (usize, f64), at: usize) -> f64 {
    let (i0, v0) = left;
    let (i1, v1) = right;
    let span = (i1 - i0) as f64;
    (v0 * (i1 - at) as f64 + v1 * (at - i0) as f64) / span
}

/// Fills every interior gap by linear interpolation between the nearest
/// present neighbours. Leading or trailing gaps are an error.
pub fn interpolate_missing(table: &RawTable) -> Result<PriceTable, IngestError> {
    let mut columns = Vec::with_capacity(table.columns.len());
    for (name, cells) in &table.columns {
        let n = cells.len();
        let mut values = Vec::with_capacity(n);
        let mut flags = Vec::with_capacity(n);
        let mut last_present: Option<usize> = None;
        for (row, cell) in cells.iter().enumerate() {
            match cell {
                Some(v) => {
                    values.push(*v);
                    flags.push(CellFlag::Original);
                    last_present = Some(row);
                }
                None => {
                    let left = last_present.ok_or_else(|| IngestError::EdgeGap {
                        column: name.clone(),
                        row,
                    })?;
                    let right = (row + 1..n)
                        .find(|&j| cells[j].is_some())
                        .ok_or_else(|| IngestError::EdgeGap {
                            column: name.clone(),
                            row,
                        })?;
                    let v = lerp(
                        (left, cells[left].unwrap_or_default()),
                        (right, cells[right].unwrap_or_default()),
                        row,
                    );
                    values.push(v);
                    flags.push(CellFlag::Interpolated);
                }
            }
        }
        columns.push(RepairedColumn {
            name: name.clone(),
            values,
            flags,
        });
    }
    Ok(PriceTable {
        dates: table.dates.clone(),
        columns,
    })
}

/// Replaces cells with |v - mean| > `z_threshold * std` by interpolation
/// between the nearest non-outlier neighbours. Mean and sample standard
/// deviation are computed once on the input column. An outlier at either
/// end takes the value of its single non-outlier neighbour.
pub fn repair_outliers(table: &PriceTable, z_threshold: f64) -> Result<PriceTable, IngestError> {
    let mut out = table.clone();
    for col in &mut out.columns {
        let n = col.values.len();
        if n < 2 {
            return Err(IngestError::DegenerateColumn {
                column: col.name.clone(),
            });
        }
        let mean = math::mean(&col.values);
        let var = col.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
        let std = math::sqrt(var);
        if !(std > 0.0) {
            return Err(IngestError::DegenerateColumn {
                column: col.name.clone(),
            });
        }
        let limit = z_threshold * std;
        let outlier: Vec<bool> = col.values.iter().map(|v| (v - mean).abs() > limit).collect();
        if !outlier.contains(&true) {
            continue;
        }
        let original = col.values.clone();
        for row in (0..n).filter(|&r| outlier[r]) {
            let left = (0..row).rev().find(|&j| !outlier[j]);
            let right = (row + 1..n).find(|&j| !outlier[j]);
            let v = match (left, right) {
                (Some(l), Some(r)) => lerp((l, original[l]), (r, original[r]), row),
                (Some(l), None) => original[l],
                (None, Some(r)) => original[r],
                // Unreachable: a column cannot be entirely beyond its own spread.
                (None, None) => mean,
            };
            col.values[row] = v;
            col.flags[row] = CellFlag::OutlierReplaced;
        }
    }
    Ok(out)
}
