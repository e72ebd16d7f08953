//! File loading, error-to-exit-code mapping, and polygon export formats.

use std::fs;
use std::path::Path;

use eo_region::distribution::{DataSource, RowsDoc};
use eo_region::region::RegionPolygon;
use serde::Deserialize;

/// A command failure carrying the process exit code: 1 for input,
/// validation, or I/O problems; 2 when opportunity-difference is
/// undefined for the source.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
}

impl CliError {
    pub fn input(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
            code: 1,
        }
    }
}

impl From<eo_region::Error> for CliError {
    fn from(e: eo_region::Error) -> Self {
        use eo_region::Error::*;
        let (kind, code) = match &e {
            UndefinedEO { .. } => ("undefined_eo", 2),
            NonPositiveMass { .. } => ("non_positive_mass", 1),
            OutOfRangeQ { .. } => ("out_of_range_q", 1),
            DuplicateRow { .. } => ("duplicate_row", 1),
            MassNotNormalized { .. } => ("mass_not_normalized", 1),
            EmptyInput => ("empty_input", 1),
            BadLabel { .. } => ("bad_label", 1),
            BadSimplexVector { .. } => ("bad_simplex_vector", 1),
            DimensionMismatch { .. } => ("dimension_mismatch", 1),
            PredictorOutOfBounds { .. } => ("predictor_out_of_bounds", 1),
            TooLarge { .. } => ("too_large", 1),
            ConstraintViolation { .. } => ("constraint_violation", 1),
            SufficiencyNotMet { .. } => ("sufficiency_not_met", 1),
        };
        Self {
            kind,
            message: e.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input("io", e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::input("parse", e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::input("parse", e.to_string())
    }
}

/// Load a distribution JSON file. The default mode drops zero-mass rows
/// with a warning on standard error; `--strict` rejects them instead.
pub fn load_source(path: &Path, strict: bool) -> Result<DataSource, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
    let doc: RowsDoc = serde_json::from_str(&text)?;
    if strict {
        Ok(DataSource::new(doc.rows)?)
    } else {
        let (source, dropped) = DataSource::new_dropping_zero_mass(doc.rows)?;
        for d in &dropped {
            eprintln!(
                "warning: dropped zero-mass row (x={:?}, a={})",
                d.x_label, d.a
            );
        }
        Ok(source)
    }
}

#[derive(Deserialize)]
struct SampleRec {
    x: String,
    a: u8,
    y: u8,
}

/// Load a sample CSV with header `x,a,y` and estimate the source.
pub fn load_samples(path: &Path) -> Result<DataSource, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))?;
    let mut records = Vec::new();
    for rec in reader.deserialize::<SampleRec>() {
        let rec = rec?;
        records.push((rec.x, rec.a, rec.y));
    }
    Ok(DataSource::from_samples(records)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text)
        .map_err(|e| CliError::input("io", format!("{}: {e}", path.display())))
}

pub fn to_json_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Polygon CSV: a header line followed by one `error,opp_diff` row per
/// vertex, in canonical order, at full (shortest round-trip) precision.
pub fn polygon_csv(region: &RegionPolygon) -> String {
    let mut out = String::from("error,opp_diff\n");
    for v in region.vertices() {
        out.push_str(&format!("{},{}\n", v.error, v.opp_diff));
    }
    out
}
