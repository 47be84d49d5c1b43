//! Standard-vs-multiple experiments over a dataset of seasonal series.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::dataset::{Dataset, DatasetSeries, SkippedRecord};
use super::seed::derive_seed;
use crate::combine::{
    combine, combine_levels_report, CombineMode, CombinedForecast, LevelReport, WeightedBundle,
};
use crate::error::{Error, Result};
use crate::metrics::{
    amse, dm_test, horizon_buckets, mase, msis, scale_denominator, DmLoss, DmVerdict,
    FrequencyClass, HorizonRange, MetricInput,
};
use crate::models::{
    AutoEts, Components, ForecastRequest, Forecaster, SeasonalNaive, DEFAULT_PATHS,
};
use crate::series::ForecastBundle;
use crate::subsample::{enumerate_plan, extract, SeasonWindow};

/// Significance level of the per-series DM tests (2.5% in each tail).
pub const DM_SIGNIFICANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Standard,
    Multiple,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Standard => "standard",
            Method::Multiple => "multiple",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Method::Standard),
            "multiple" => Ok(Method::Multiple),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelFamily {
    Ets,
    Snaive,
    Dshw,
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelFamily::Ets => "ets",
            ModelFamily::Snaive => "snaive",
            ModelFamily::Dshw => "dshw",
        })
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ets" => Ok(ModelFamily::Ets),
            "snaive" => Ok(ModelFamily::Snaive),
            "dshw" => Ok(ModelFamily::Dshw),
            other => Err(Error::InvalidArgument(format!(
                "unknown model family '{other}'"
            ))),
        }
    }
}

impl ModelFamily {
    pub fn forecaster(self) -> Result<Box<dyn Forecaster>> {
        match self {
            ModelFamily::Ets => Ok(Box::new(AutoEts)),
            ModelFamily::Snaive => Ok(Box::new(SeasonalNaive)),
            ModelFamily::Dshw => Err(Error::InvalidArgument(
                "dshw applies to double-seasonal load data only (use load-eval)".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub data_path: Option<PathBuf>,
    /// `Multiple` also runs the standard benchmark it is compared against.
    pub method: Method,
    pub model: ModelFamily,
    pub combine_mode: CombineMode,
    pub level: f64,
    pub paths: usize,
    pub seed: u64,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub category: Option<String>,
    pub ids: Option<Vec<String>>,
    #[serde(skip)]
    pub workers: usize,
    pub verbose: bool,
    pub dm_loss: DmLoss,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            data_path: None,
            method: Method::Multiple,
            model: ModelFamily::Ets,
            combine_mode: CombineMode::FlatPooled,
            level: 0.95,
            paths: DEFAULT_PATHS,
            seed: 0,
            out_dir: PathBuf::from("out"),
            category: None,
            ids: None,
            workers: 1,
            verbose: false,
            dm_loss: DmLoss::Absolute,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "PI level {} not in (0, 1)",
                self.level
            )));
        }
        if self.paths < 100 {
            return Err(Error::InvalidArgument(format!(
                "{} sample paths requested; reported intervals need at least 100",
                self.paths
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument(
                "worker count must be positive".into(),
            ));
        }
        self.model.forecaster().map(|_| ())
    }
}

/// Metric values of one method on one horizon bucket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BucketMetrics {
    pub range: HorizonRange,
    pub mase: Option<f64>,
    pub amse: Option<f64>,
    pub msis: Option<f64>,
}

/// Evaluation of one method on one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationRow {
    pub id: String,
    pub method: Method,
    pub buckets: Vec<BucketMetrics>,
    /// `|y - ŷ| / D` per horizon step; `None` when `D = 0`.
    pub scaled_abs_errors: Option<Vec<f64>>,
    /// `y - ŷ` per horizon step.
    pub errors: Vec<f64>,
    pub zero_denominator: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardRun {
    pub forecast: ForecastBundle,
    pub row: EvaluationRow,
    pub components: Option<Components>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultipleRun {
    pub combined: CombinedForecast,
    pub row: EvaluationRow,
    pub skipped_windows: Vec<SeasonWindow>,
    pub levels: Option<LevelReport>,
}

/// Trend/seasonality class of a series from its standard ETS fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SeriesClass {
    NN,
    TN,
    NS,
    TS,
}

impl SeriesClass {
    pub fn from_components(c: Components) -> Self {
        match (c.has_trend, c.has_seasonal) {
            (false, false) => SeriesClass::NN,
            (true, false) => SeriesClass::TN,
            (false, true) => SeriesClass::NS,
            (true, true) => SeriesClass::TS,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SeriesClass::NN => "(N,N)",
            SeriesClass::TN => "(T,N)",
            SeriesClass::NS => "(N,S)",
            SeriesClass::TS => "(T,S)",
        }
    }
}

/// Everything produced for one series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutcome {
    pub id: String,
    pub category: Option<String>,
    pub horizon: usize,
    pub result: std::result::Result<(StandardRun, Option<MultipleRun>), String>,
}

impl SeriesOutcome {
    pub fn class(&self) -> Option<SeriesClass> {
        let (standard, _) = self.result.as_ref().ok()?;
        standard.components.map(SeriesClass::from_components)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub metric: &'static str,
    pub method: Method,
    /// Mean per bucket and the number of series it averages.
    pub values: Vec<(Option<f64>, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DmSummaryRow {
    pub range: HorizonRange,
    pub tested: usize,
    pub untestable: usize,
    pub better: usize,
    pub worse: usize,
}

impl DmSummaryRow {
    pub fn better_pct(&self) -> Option<f64> {
        (self.tested > 0).then(|| 100.0 * self.better as f64 / self.tested as f64)
    }

    pub fn worse_pct(&self) -> Option<f64> {
        (self.tested > 0).then(|| 100.0 * self.worse as f64 / self.tested as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassRow {
    pub class: SeriesClass,
    pub series: usize,
    pub method: Method,
    pub mase: Option<f64>,
    pub amse: Option<f64>,
    pub msis: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub config: ExperimentConfig,
    pub frequency_class: FrequencyClass,
    pub buckets: Vec<HorizonRange>,
    /// Sorted by series id.
    pub outcomes: Vec<SeriesOutcome>,
    pub skipped_records: Vec<SkippedRecord>,
    pub filtered_out: usize,
    pub aggregate: Vec<AggregateRow>,
    pub dm_summary: Vec<DmSummaryRow>,
    /// Mean scaled absolute error per step: `(standard, multiple)`.
    pub horizon_curve: Vec<(Option<f64>, Option<f64>)>,
    pub class_summary: Vec<ClassRow>,
}

impl EvaluationReport {
    pub fn failed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.result.is_err()).count()
    }

    pub fn methods(&self) -> Vec<Method> {
        match self.config.method {
            Method::Standard => vec![Method::Standard],
            Method::Multiple => vec![Method::Standard, Method::Multiple],
        }
    }
}

/// Evaluates a forecast against the test segment on every bucket.
pub fn evaluate(
    series: &DatasetSeries,
    method: Method,
    points: &[f64],
    lower: &[f64],
    upper: &[f64],
    level: f64,
    buckets: &[HorizonRange],
) -> EvaluationRow {
    let input = MetricInput {
        train: &series.series.values,
        test: &series.test,
        points,
        lower,
        upper,
        m: series.series.frequency,
        alpha: 1.0 - level,
    };
    let h = series.test.len();
    let scale = scale_denominator(input.train, input.m).ok();
    let buckets = buckets
        .iter()
        .map(|&range| {
            let fits = range.end <= h;
            BucketMetrics {
                range,
                mase: fits.then(|| mase(&input, range).ok()).flatten(),
                amse: fits.then(|| amse(&input, range).ok()).flatten(),
                msis: fits.then(|| msis(&input, range).ok()).flatten(),
            }
        })
        .collect();
    let errors: Vec<f64> = series.test.iter().zip(points).map(|(y, p)| y - p).collect();
    EvaluationRow {
        id: series.id().to_string(),
        method,
        buckets,
        scaled_abs_errors: scale.map(|d| errors.iter().map(|e| e.abs() / d).collect()),
        errors,
        zero_denominator: scale.is_none(),
    }
}

/// Buckets for a dataset class; series with shorter horizons get `None` for buckets past their end.
pub fn buckets_for(class: FrequencyClass) -> Vec<HorizonRange> {
    horizon_buckets(class)
}

fn window_seed(config: &ExperimentConfig, id: &str, window: SeasonWindow) -> u64 {
    derive_seed(config.seed, id, &[window.start_season, window.width])
}

/// Fits the model family on the original series only.
pub fn run_standard_with(
    series: &DatasetSeries,
    config: &ExperimentConfig,
    forecaster: &dyn Forecaster,
    buckets: &[HorizonRange],
) -> Result<StandardRun> {
    let s = &series.series;
    let h = series.horizon;
    let full = SeasonWindow::full(s.frequency);
    let steps: Vec<usize> = (1..=h).collect();
    let out = forecaster.forecast(&ForecastRequest {
        values: &s.values,
        period: s.frequency,
        phase: s.start_phase,
        horizon: h,
        level: config.level,
        paths: config.paths,
        seed: window_seed(config, s.id.as_str(), full),
        target_steps: &steps,
    })?;
    let f = &out.bundle;
    let row = evaluate(
        series,
        Method::Standard,
        &f.points,
        &f.lower,
        &f.upper,
        config.level,
        buckets,
    );
    Ok(StandardRun {
        forecast: out.bundle,
        row,
        components: out.components,
    })
}

pub fn run_standard(series: &DatasetSeries, config: &ExperimentConfig) -> Result<StandardRun> {
    let forecaster = config.model.forecaster()?;
    let buckets = buckets_for(config_class(series));
    run_standard_with(series, config, forecaster.as_ref(), &buckets)
}

fn config_class(series: &DatasetSeries) -> FrequencyClass {
    FrequencyClass::from_frequency(series.series.frequency).unwrap_or(FrequencyClass::Quarterly)
}

/// Shortest subseries that is still fitted.
pub fn min_subseries_len(width: usize) -> usize {
    (2 * width).max(4)
}

/// Forecasts every sub-seasonal window of the series and pools the results.
pub fn run_multiple_with(
    series: &DatasetSeries,
    config: &ExperimentConfig,
    forecaster: &dyn Forecaster,
    buckets: &[HorizonRange],
) -> Result<MultipleRun> {
    let s = &series.series;
    let h = series.horizon;
    let plan = enumerate_plan(s, h)?;

    let results: Vec<Result<Option<WeightedBundle>>> = plan
        .windows
        .par_iter()
        .map(|pw| {
            let sub = match extract(s, pw.window, h) {
                Ok(sub) => sub,
                Err(Error::EmptySubseries { .. }) if !pw.window.is_full() => return Ok(None),
                Err(e) => return Err(e),
            };
            if !pw.window.is_full() && sub.sub_values.len() < min_subseries_len(pw.window.width) {
                return Ok(None);
            }
            let out = forecaster.forecast(&ForecastRequest {
                values: &sub.sub_values,
                period: sub.sub_frequency,
                phase: sub.sub_phase,
                horizon: sub.sub_horizon,
                level: config.level,
                paths: config.paths,
                seed: window_seed(config, s.id.as_str(), pw.window),
                target_steps: &sub.alignment,
            });
            match out {
                Ok(out) => Ok(Some(WeightedBundle {
                    bundle: out.bundle.aligned(pw.window, sub.alignment)?,
                    multiplicity: pw.multiplicity,
                })),
                Err(e) if !pw.window.is_full() => {
                    log::warn!(
                        "{}: window (start {}, width {}) failed: {e}",
                        s.id,
                        pw.window.start_season,
                        pw.window.width
                    );
                    Ok(None)
                }
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut bundles = Vec::with_capacity(results.len());
    let mut skipped_windows = Vec::new();
    for (pw, r) in plan.windows.iter().zip(results) {
        match r? {
            Some(b) => bundles.push(b),
            None => skipped_windows.push(pw.window),
        }
    }
    if !skipped_windows.is_empty() {
        log::warn!(
            "{}: skipped {} short or failed subseries",
            s.id,
            skipped_windows.len()
        );
    }

    let combined = combine(&bundles, h, config.combine_mode)?;
    let levels = if config.verbose {
        Some(combine_levels_report(&bundles, h)?)
    } else {
        None
    };
    let row = evaluate(
        series,
        Method::Multiple,
        &combined.points,
        &combined.lower,
        &combined.upper,
        config.level,
        buckets,
    );
    Ok(MultipleRun {
        combined,
        row,
        skipped_windows,
        levels,
    })
}

pub fn run_multiple(series: &DatasetSeries, config: &ExperimentConfig) -> Result<MultipleRun> {
    let forecaster = config.model.forecaster()?;
    let buckets = buckets_for(config_class(series));
    run_multiple_with(series, config, forecaster.as_ref(), &buckets)
}

fn run_series(
    series: &DatasetSeries,
    config: &ExperimentConfig,
    forecaster: &dyn Forecaster,
    buckets: &[HorizonRange],
) -> SeriesOutcome {
    let result = run_standard_with(series, config, forecaster, buckets).and_then(|standard| {
        let multiple = match config.method {
            Method::Standard => None,
            Method::Multiple => Some(run_multiple_with(series, config, forecaster, buckets)?),
        };
        Ok((standard, multiple))
    });
    if let Err(e) = &result {
        log::warn!("series {} failed: {e}", series.id());
    }
    SeriesOutcome {
        id: series.id().to_string(),
        category: series.series.category.clone(),
        horizon: series.horizon,
        result: result.map_err(|e| e.to_string()),
    }
}

/// Runs the configured experiment over every selected series.
pub fn run_experiment(dataset: &Dataset, config: &ExperimentConfig) -> Result<EvaluationReport> {
    let forecaster = config.model.forecaster()?;
    run_experiment_with(dataset, config, forecaster.as_ref())
}

pub fn run_experiment_with(
    dataset: &Dataset,
    config: &ExperimentConfig,
    forecaster: &dyn Forecaster,
) -> Result<EvaluationReport> {
    config.validate()?;
    let buckets = buckets_for(dataset.frequency_class);
    let selected: Vec<&DatasetSeries> = dataset
        .series
        .iter()
        .filter(|s| match &config.category {
            Some(c) => s.series.category.as_deref() == Some(c.as_str()),
            None => true,
        })
        .filter(|s| match &config.ids {
            Some(ids) => ids.iter().any(|id| id == s.id()),
            None => true,
        })
        .collect();
    let filtered_out = dataset.series.len() - selected.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let mut outcomes: Vec<SeriesOutcome> = pool.install(|| {
        selected
            .par_iter()
            .map(|s| run_series(s, config, forecaster, &buckets))
            .collect()
    });
    outcomes.sort_by(|a, b| a.id.cmp(&b.id));

    let mut report = EvaluationReport {
        config: config.clone(),
        frequency_class: dataset.frequency_class,
        buckets: buckets.clone(),
        outcomes,
        skipped_records: dataset.skipped.clone(),
        filtered_out,
        aggregate: Vec::new(),
        dm_summary: Vec::new(),
        horizon_curve: Vec::new(),
        class_summary: Vec::new(),
    };
    report.aggregate = aggregate(&report);
    report.dm_summary = dm_summary(&report);
    report.horizon_curve = horizon_curve(&report);
    report.class_summary = classify_and_slice(&report);
    Ok(report)
}

fn row_for(outcome: &SeriesOutcome, method: Method) -> Option<&EvaluationRow> {
    let (standard, multiple) = outcome.result.as_ref().ok()?;
    match method {
        Method::Standard => Some(&standard.row),
        Method::Multiple => multiple.as_ref().map(|m| &m.row),
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Metric accessor by name.
pub fn metric_value(b: &BucketMetrics, metric: &str) -> Option<f64> {
    match metric {
        "MASE" => b.mase,
        "AMSE" => b.amse,
        "MSIS" => b.msis,
        _ => None,
    }
}

pub const METRICS: [&str; 3] = ["MASE", "AMSE", "MSIS"];

fn aggregate(report: &EvaluationReport) -> Vec<AggregateRow> {
    let mut rows = Vec::new();
    for metric in METRICS {
        for method in report.methods() {
            let values = (0..report.buckets.len())
                .map(|bi| {
                    let vals: Vec<f64> = report
                        .outcomes
                        .iter()
                        .filter_map(|o| row_for(o, method))
                        .filter_map(|r| metric_value(&r.buckets[bi], metric))
                        .collect();
                    (mean(&vals), vals.len())
                })
                .collect();
            rows.push(AggregateRow {
                metric,
                method,
                values,
            });
        }
    }
    rows
}

fn dm_summary(report: &EvaluationReport) -> Vec<DmSummaryRow> {
    if report.config.method != Method::Multiple {
        return Vec::new();
    }
    report
        .buckets
        .iter()
        .map(|&range| {
            let mut row = DmSummaryRow {
                range,
                tested: 0,
                untestable: 0,
                better: 0,
                worse: 0,
            };
            for o in &report.outcomes {
                let (Some(std_row), Some(mul_row)) =
                    (row_for(o, Method::Standard), row_for(o, Method::Multiple))
                else {
                    continue;
                };
                if range.end > std_row.errors.len() {
                    row.untestable += 1;
                    continue;
                }
                let idx = range.start - 1..range.end;
                match dm_test(
                    &mul_row.errors[idx.clone()],
                    &std_row.errors[idx],
                    1,
                    report.config.dm_loss,
                ) {
                    Ok(r) => match r.verdict(DM_SIGNIFICANCE) {
                        DmVerdict::FirstBetter => {
                            row.tested += 1;
                            row.better += 1;
                        }
                        DmVerdict::SecondBetter => {
                            row.tested += 1;
                            row.worse += 1;
                        }
                        DmVerdict::NoDifference | DmVerdict::NoDecision => row.tested += 1,
                    },
                    Err(_) => row.untestable += 1,
                }
            }
            row
        })
        .collect()
}

fn horizon_curve(report: &EvaluationReport) -> Vec<(Option<f64>, Option<f64>)> {
    let h = report.outcomes.iter().map(|o| o.horizon).max().unwrap_or(0);
    let step_mean = |method: Method, t: usize| {
        let vals: Vec<f64> = report
            .outcomes
            .iter()
            .filter_map(|o| row_for(o, method))
            .filter_map(|r| r.scaled_abs_errors.as_ref()?.get(t).copied())
            .collect();
        mean(&vals)
    };
    (0..h)
        .map(|t| {
            let multiple = match report.config.method {
                Method::Multiple => step_mean(Method::Multiple, t),
                Method::Standard => None,
            };
            (step_mean(Method::Standard, t), multiple)
        })
        .collect()
}

/// Splits series into the four trend/seasonality classes of their standard
/// fit and averages the full-horizon metrics within each class.
pub fn classify_and_slice(report: &EvaluationReport) -> Vec<ClassRow> {
    let Some(overall) = report.buckets.len().checked_sub(1) else {
        return Vec::new();
    };
    let mut by_class: BTreeMap<SeriesClass, Vec<&SeriesOutcome>> = BTreeMap::new();
    for o in &report.outcomes {
        if let Some(class) = o.class() {
            by_class.entry(class).or_default().push(o);
        }
    }
    let mut rows = Vec::new();
    for (class, members) in by_class {
        for method in report.methods() {
            let collect = |metric: &str| {
                let vals: Vec<f64> = members
                    .iter()
                    .filter_map(|o| row_for(o, method))
                    .filter_map(|r| metric_value(&r.buckets[overall], metric))
                    .collect();
                mean(&vals)
            };
            rows.push(ClassRow {
                class,
                series: members.len(),
                method,
                mase: collect("MASE"),
                amse: collect("AMSE"),
                msis: collect("MSIS"),
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::FrequencyClass;
    use crate::models::ForecastOutput;
    use crate::series::SeasonalSeries;

    fn dataset_series(id: &str, m: usize, train: Vec<f64>, test: Vec<f64>) -> DatasetSeries {
        let h = test.len();
        DatasetSeries {
            series: SeasonalSeries::new(id, train, m, 1).unwrap(),
            test,
            horizon: h,
        }
    }

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            paths: 200,
            seed: 7,
            ..ExperimentConfig::default()
        }
    }

    /// Forecasts the true test values of the steps it is asked about.
    struct Oracle(Vec<f64>);

    impl Forecaster for Oracle {
        fn name(&self) -> &str {
            "oracle"
        }

        fn forecast(&self, r: &ForecastRequest<'_>) -> Result<ForecastOutput> {
            let points: Vec<f64> = r.target_steps.iter().map(|&t| self.0[t - 1]).collect();
            Ok(ForecastOutput {
                bundle: ForecastBundle::new(points.clone(), points.clone(), points, r.level)?,
                components: None,
            })
        }
    }

    fn seasonal_values(n: usize, m: usize) -> Vec<f64> {
        (0..n)
            .map(|t| {
                50.0 + 0.3 * t as f64 + 5.0 * ((t % m) as f64) + ((t * 7919) % 11) as f64 * 0.4
            })
            .collect()
    }

    #[test]
    fn oracle_combination_scores_zero() {
        let all = seasonal_values(28, 4);
        let s = dataset_series("o", 4, all[..20].to_vec(), all[20..].to_vec());
        let buckets = buckets_for(FrequencyClass::Quarterly);
        let run = run_multiple_with(&s, &config(), &Oracle(s.test.clone()), &buckets).unwrap();
        assert_eq!(run.row.buckets.last().unwrap().mase, Some(0.0));
        assert_eq!(run.combined.instance_counts, vec![10; 8]);
    }

    #[test]
    fn non_seasonal_multiple_equals_standard() {
        let all: Vec<f64> = (0..20)
            .map(|t| 10.0 + t as f64 + ((t * 13) % 5) as f64)
            .collect();
        let s = dataset_series("n", 1, all[..14].to_vec(), all[14..].to_vec());
        let buckets = buckets_for(FrequencyClass::Quarterly);
        let std = run_standard_with(&s, &config(), &AutoEts, &buckets).unwrap();
        let mul = run_multiple_with(&s, &config(), &AutoEts, &buckets).unwrap();
        assert_eq!(std.forecast.points, mul.combined.points);
        assert_eq!(std.forecast.lower, mul.combined.lower);
        assert_eq!(std.forecast.upper, mul.combined.upper);
        assert_eq!(std.row.buckets, mul.row.buckets);
    }

    #[test]
    fn constant_series_flat_forecast() {
        let s = dataset_series("c", 4, vec![3.0; 12], vec![3.0, 4.0, 3.0, 2.0]);
        let buckets = buckets_for(FrequencyClass::Quarterly);
        let run = run_standard_with(&s, &config(), &AutoEts, &buckets).unwrap();
        assert_eq!(run.forecast.points, vec![3.0; 4]);
        // constant training data has a zero seasonal-difference scale
        assert!(run.row.zero_denominator);
        assert_eq!(run.row.buckets[0].mase, None);
        assert_eq!(run.row.buckets[0].amse, Some(0.0));
    }

    #[test]
    fn short_subseries_are_skipped() {
        // 7 observations at m = 4: width-3 windows see 5-6 points, below the 6 needed
        let all = seasonal_values(11, 4);
        let s = dataset_series("s", 4, all[..7].to_vec(), all[7..].to_vec());
        let buckets = buckets_for(FrequencyClass::Quarterly);
        let run =
            run_multiple_with(&s, &config(), &crate::models::SeasonalNaive, &buckets).unwrap();
        assert!(!run.skipped_windows.is_empty());
        assert!(run.combined.instance_counts.iter().all(|&c| c >= 4));
    }

    #[test]
    fn config_validation() {
        let mut c = config();
        assert!(c.validate().is_ok());
        c.paths = 50;
        assert!(c.validate().is_err());
        c = config();
        c.level = 1.0;
        assert!(c.validate().is_err());
        c = config();
        c.model = ModelFamily::Dshw;
        assert!(c.validate().is_err());
    }

    #[test]
    fn class_labels() {
        let c = |t, s| {
            SeriesClass::from_components(Components {
                has_trend: t,
                has_seasonal: s,
            })
        };
        assert_eq!(c(false, false).label(), "(N,N)");
        assert_eq!(c(true, true).label(), "(T,S)");
        assert_eq!(c(true, false), SeriesClass::TN);
        assert_eq!(c(false, true), SeriesClass::NS);
    }
}
