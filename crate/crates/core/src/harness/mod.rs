//! Experiment harness: dataset ingestion, standard-vs-multiple runs,
//! rolling-origin load evaluation and report files.

mod dataset;
mod experiment;
mod load;
mod report;
mod seed;

pub use dataset::{
    default_horizon, ingest_dataset, parse_dataset, parse_load_csv, read_load_csv, Dataset,
    DatasetSeries, SkippedRecord,
};
pub use experiment::{
    buckets_for, classify_and_slice, evaluate, metric_value, min_subseries_len, run_experiment,
    run_experiment_with, run_multiple, run_multiple_with, run_standard, run_standard_with,
    AggregateRow, BucketMetrics, ClassRow, DmSummaryRow, EvaluationReport, EvaluationRow,
    ExperimentConfig, Method, ModelFamily, MultipleRun, SeriesClass, SeriesOutcome, StandardRun,
    DM_SIGNIFICANCE, METRICS,
};
pub use load::{
    rolling_origins, run_rolling_load, LoadConfig, LoadReport, OriginResult, SkippedOrigin,
};
pub use report::{
    emit_load_reports, emit_reports, AGGREGATE_FILE, CLASS_FILE, CURVE_FILE, DM_FILE, LEVELS_FILE,
    METADATA_FILE, ORIGINS_FILE, PER_SERIES_FILE,
};
pub use seed::derive_seed;
