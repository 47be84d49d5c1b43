//! Dataset ingestion.
//!
//! Collections of series come as one JSON document:
//!
//! ```json
//! { "frequency_class": "quarterly",
//!   "series": [ { "id": "Q1", "frequency": 4, "start_phase": 1, "horizon": 8,
//!                 "category": "Micro", "train": [..], "test": [..] } ] }
//! ```
//!
//! `start_phase` defaults to 1 and `horizon` to the class default (8, 18, 48
//! for frequencies 4, 12, 24). Load data comes as a `timestamp,demand` CSV.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::FrequencyClass;
use crate::series::{join_violations, validate_series, MultiSeasonalSeries, SeasonalSeries};

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawDataset {
    frequency_class: FrequencyClass,
    series: Vec<RawSeries>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawSeries {
    id: String,
    frequency: usize,
    #[serde(default)]
    start_phase: Option<usize>,
    #[serde(default)]
    horizon: Option<usize>,
    #[serde(default)]
    category: Option<String>,
    train: Vec<f64>,
    #[serde(default)]
    test: Vec<f64>,
}

/// A validated series with its held-out test segment.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSeries {
    /// Training part; its calendar continues into the test part.
    pub series: SeasonalSeries,
    pub test: Vec<f64>,
    pub horizon: usize,
}

impl DatasetSeries {
    pub fn id(&self) -> &str {
        &self.series.id
    }
}

/// A record rejected at ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkippedRecord {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub frequency_class: FrequencyClass,
    pub series: Vec<DatasetSeries>,
    pub skipped: Vec<SkippedRecord>,
}

/// Default horizon for a record: by its own frequency when it is one of the
/// standard ones, else by the dataset class.
pub fn default_horizon(frequency: usize, class: FrequencyClass) -> usize {
    FrequencyClass::from_frequency(frequency)
        .unwrap_or(class)
        .default_horizon()
}

pub fn ingest_dataset(path: &Path) -> Result<Dataset> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_dataset(&text)
}

pub fn parse_dataset(text: &str) -> Result<Dataset> {
    let raw: RawDataset = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let class = raw.frequency_class;
    let mut series = Vec::with_capacity(raw.series.len());
    let mut skipped = Vec::new();
    for (record_no, rec) in raw.series.into_iter().enumerate() {
        let id = rec.id.clone();
        match validate_record(rec, class) {
            Ok(s) => series.push(s),
            Err(reason) => {
                log::warn!("record {} ({id}) skipped: {reason}", record_no + 1);
                skipped.push(SkippedRecord { id, reason });
            }
        }
    }
    Ok(Dataset {
        frequency_class: class,
        series,
        skipped,
    })
}

fn validate_record(
    rec: RawSeries,
    class: FrequencyClass,
) -> std::result::Result<DatasetSeries, String> {
    let horizon = rec
        .horizon
        .unwrap_or_else(|| default_horizon(rec.frequency, class));
    let series = SeasonalSeries {
        id: rec.id,
        values: rec.train,
        frequency: rec.frequency,
        start_phase: rec.start_phase.unwrap_or(1),
        category: rec.category,
    };
    let violations = validate_series(&series);
    if !violations.is_empty() {
        return Err(join_violations(&violations));
    }
    if horizon == 0 {
        return Err("horizon must be positive".into());
    }
    // Scaled metrics need at least two in-sample seasonal differences.
    let m = series.frequency;
    if series.len() < m + 2 {
        return Err(format!(
            "train has {} observations, fewer than two seasonal differences at frequency {m}",
            series.len()
        ));
    }
    if rec.test.len() != horizon {
        return Err(format!(
            "test has {} observations but horizon is {horizon}",
            rec.test.len()
        ));
    }
    if let Some(i) = rec.test.iter().position(|v| !v.is_finite()) {
        return Err(format!("non-finite test value at index {}", i + 1));
    }
    Ok(DatasetSeries {
        series,
        test: rec.test,
        horizon,
    })
}

/// Reads an hourly `timestamp,demand` CSV into a double-seasonal series.
pub fn read_load_csv(
    path: &Path,
    periods: (usize, usize),
    start_phase: usize,
) -> Result<MultiSeasonalSeries> {
    let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "load".into());
    parse_load_csv(file, &id, periods, start_phase)
}

pub fn parse_load_csv<R: std::io::Read>(
    reader: R,
    id: &str,
    periods: (usize, usize),
    start_phase: usize,
) -> Result<MultiSeasonalSeries> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    let col = headers
        .iter()
        .position(|h| h.trim() == "demand")
        .ok_or_else(|| Error::Parse("missing 'demand' column".into()))?;
    if headers.iter().next().map(str::trim) != Some("timestamp") {
        return Err(Error::Parse("header must be 'timestamp,demand'".into()));
    }
    let mut values = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("line {line}: {e}")))?;
        let field = rec
            .get(col)
            .ok_or_else(|| Error::Parse(format!("line {line}: missing demand")))?;
        let v: f64 = field
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("line {line}: bad demand '{field}': {e}")))?;
        if !v.is_finite() {
            return Err(Error::Parse(format!("line {line}: non-finite demand")));
        }
        values.push(v);
    }
    MultiSeasonalSeries::new(id, values, periods, start_phase)
}
