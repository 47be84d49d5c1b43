//! Report files.
//!
//! Floats are written with Rust's shortest round-trip formatting, so the
//! files parse back to the exact values they were written from. Missing
//! values are empty fields.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::experiment::{EvaluationReport, Method, DM_SIGNIFICANCE, METRICS};
use super::load::LoadReport;
use crate::error::{Error, Result};

pub const PER_SERIES_FILE: &str = "per_series.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const DM_FILE: &str = "dm_summary.csv";
pub const CURVE_FILE: &str = "horizon_curve.csv";
pub const CLASS_FILE: &str = "class_summary.csv";
pub const LEVELS_FILE: &str = "levels.csv";
pub const ORIGINS_FILE: &str = "origins.csv";
pub const METADATA_FILE: &str = "metadata.json";

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(dir: &Path, name: &str, header: &[String]) -> Result<Self> {
        let mut t = Table {
            path: dir.join(name),
            writer: csv::Writer::from_writer(Vec::new()),
        };
        t.row(header)?;
        Ok(t)
    }

    fn row(&mut self, fields: &[String]) -> Result<()> {
        let path = &self.path;
        self.writer
            .write_record(fields)
            .map_err(|e| io_err(path, e))
    }

    fn finish(self) -> Result<PathBuf> {
        let bytes = self
            .writer
            .into_inner()
            .map_err(|e| io_err(&self.path, e))?;
        fs::write(&self.path, bytes).map_err(|e| io_err(&self.path, e))?;
        Ok(self.path)
    }
}

fn write_json(path: PathBuf, value: &impl Serialize) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(&path, e))?;
    text.push('\n');
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

fn strings<const N: usize>(fields: [&str; N]) -> Vec<String> {
    fields.iter().map(|s| s.to_string()).collect()
}

#[derive(Serialize)]
struct RunMetadata<'a> {
    version: &'static str,
    command: &'static str,
    seed: u64,
    frequency_class: String,
    config: &'a super::experiment::ExperimentConfig,
    dm_significance: f64,
    series_evaluated: usize,
    series_failed: usize,
    records_skipped: usize,
    series_filtered_out: usize,
    failures: Vec<(&'a str, &'a str)>,
    skipped_records: &'a [super::dataset::SkippedRecord],
}

/// Writes every report file into `out_dir` and returns their paths.
pub fn emit_reports(report: &EvaluationReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let labels: Vec<String> = report.buckets.iter().map(|b| b.label()).collect();
    let methods = report.methods();
    let mut written = Vec::new();

    let mut header = strings([
        "id", "category", "method", "status", "class", "trend", "seasonal",
    ]);
    for metric in METRICS {
        header.extend(labels.iter().map(|l| format!("{metric}_{l}")));
    }
    let mut per_series = Table::new(out_dir, PER_SERIES_FILE, &header)?;
    for o in &report.outcomes {
        let class = o.class();
        let flags = |f: fn(crate::models::Components) -> bool| match o
            .result
            .as_ref()
            .ok()
            .and_then(|(s, _)| s.components)
        {
            Some(c) => u8::from(f(c)).to_string(),
            None => String::new(),
        };
        for &method in &methods {
            let mut fields = vec![
                o.id.clone(),
                o.category.clone().unwrap_or_default(),
                method.to_string(),
                if o.result.is_ok() { "ok" } else { "failed" }.to_string(),
                class.map(|c| c.label().to_string()).unwrap_or_default(),
                flags(|c| c.has_trend),
                flags(|c| c.has_seasonal),
            ];
            let row = o.result.as_ref().ok().and_then(|(s, m)| match method {
                Method::Standard => Some(&s.row),
                Method::Multiple => m.as_ref().map(|m| &m.row),
            });
            for metric in METRICS {
                for bi in 0..labels.len() {
                    let v =
                        row.and_then(|r| super::experiment::metric_value(&r.buckets[bi], metric));
                    fields.push(opt(v));
                }
            }
            per_series.row(&fields)?;
        }
    }
    written.push(per_series.finish()?);

    let mut header = strings(["metric", "method"]);
    header.extend(labels.iter().cloned());
    header.extend(labels.iter().map(|l| format!("n_{l}")));
    let mut aggregate = Table::new(out_dir, AGGREGATE_FILE, &header)?;
    for row in &report.aggregate {
        let mut fields = vec![row.metric.to_string(), row.method.to_string()];
        fields.extend(row.values.iter().map(|(v, _)| opt(*v)));
        fields.extend(row.values.iter().map(|(_, n)| n.to_string()));
        aggregate.row(&fields)?;
    }
    written.push(aggregate.finish()?);

    if report.config.method == Method::Multiple {
        let mut dm = Table::new(
            out_dir,
            DM_FILE,
            &strings([
                "bucket",
                "loss",
                "tested",
                "untestable",
                "better",
                "worse",
                "better_pct",
                "worse_pct",
            ]),
        )?;
        for row in &report.dm_summary {
            dm.row(&[
                row.range.label(),
                report.config.dm_loss.to_string(),
                row.tested.to_string(),
                row.untestable.to_string(),
                row.better.to_string(),
                row.worse.to_string(),
                opt(row.better_pct()),
                opt(row.worse_pct()),
            ])?;
        }
        written.push(dm.finish()?);
    }

    let mut curve = Table::new(
        out_dir,
        CURVE_FILE,
        &strings(["horizon", "MASE_standard", "MASE_multiple"]),
    )?;
    for (t, (s, m)) in report.horizon_curve.iter().enumerate() {
        curve.row(&[(t + 1).to_string(), opt(*s), opt(*m)])?;
    }
    written.push(curve.finish()?);

    let mut classes = Table::new(
        out_dir,
        CLASS_FILE,
        &strings(["class", "series", "method", "MASE", "AMSE", "MSIS"]),
    )?;
    for row in &report.class_summary {
        classes.row(&[
            row.class.label().to_string(),
            row.series.to_string(),
            row.method.to_string(),
            opt(row.mase),
            opt(row.amse),
            opt(row.msis),
        ])?;
    }
    written.push(classes.finish()?);

    if report.config.verbose && report.config.method == Method::Multiple {
        let mut levels = Table::new(
            out_dir,
            LEVELS_FILE,
            &strings(["id", "width", "step", "mean"]),
        )?;
        for o in &report.outcomes {
            let Some(lr) = o
                .result
                .as_ref()
                .ok()
                .and_then(|(_, m)| m.as_ref()?.levels.as_ref())
            else {
                continue;
            };
            for (t, means) in lr.means.iter().enumerate() {
                for (width, v) in lr.levels.iter().zip(means) {
                    levels.row(&[
                        o.id.clone(),
                        width.to_string(),
                        (t + 1).to_string(),
                        opt(*v),
                    ])?;
                }
            }
        }
        written.push(levels.finish()?);
    }

    let metadata = RunMetadata {
        version: env!("CARGO_PKG_VERSION"),
        command: "run",
        seed: report.config.seed,
        frequency_class: report.frequency_class.to_string(),
        config: &report.config,
        dm_significance: DM_SIGNIFICANCE,
        series_evaluated: report.outcomes.len(),
        series_failed: report.failed(),
        records_skipped: report.skipped_records.len(),
        series_filtered_out: report.filtered_out,
        failures: report
            .outcomes
            .iter()
            .filter_map(|o| o.result.as_ref().err().map(|e| (o.id.as_str(), e.as_str())))
            .collect(),
        skipped_records: &report.skipped_records,
    };
    written.push(write_json(out_dir.join(METADATA_FILE), &metadata)?);
    Ok(written)
}

#[derive(Serialize)]
struct LoadMetadata<'a> {
    version: &'static str,
    command: &'static str,
    id: &'a str,
    periods: (usize, usize),
    seed: u64,
    config: &'a super::load::LoadConfig,
    origins: usize,
    skipped_origins: &'a [super::load::SkippedOrigin],
    training_window: &'static str,
}

/// Writes the per-step curve, per-origin errors and run metadata.
pub fn emit_load_reports(report: &LoadReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut written = Vec::new();

    let mut curve = Table::new(
        out_dir,
        CURVE_FILE,
        &strings(["horizon", "MASE_standard", "MASE_multiple"]),
    )?;
    for (t, s) in report.standard_curve.iter().enumerate() {
        let m = report.multiple_curve.as_ref().map(|c| c[t]);
        curve.row(&[(t + 1).to_string(), num(*s), opt(m)])?;
    }
    written.push(curve.finish()?);

    let mut origins = Table::new(
        out_dir,
        ORIGINS_FILE,
        &strings([
            "origin",
            "horizon",
            "scaled_error_standard",
            "scaled_error_multiple",
        ]),
    )?;
    for o in &report.origins {
        for (t, s) in o.standard.iter().enumerate() {
            let m = o.multiple.as_ref().map(|m| m[t]);
            origins.row(&[o.origin.to_string(), (t + 1).to_string(), num(*s), opt(m)])?;
        }
    }
    written.push(origins.finish()?);

    let metadata = LoadMetadata {
        version: env!("CARGO_PKG_VERSION"),
        command: "load-eval",
        id: &report.id,
        periods: report.periods,
        seed: report.config.seed,
        config: &report.config,
        origins: report.origins.len(),
        skipped_origins: &report.skipped,
        training_window: "expanding",
    };
    written.push(write_json(out_dir.join(METADATA_FILE), &metadata)?);
    Ok(written)
}
