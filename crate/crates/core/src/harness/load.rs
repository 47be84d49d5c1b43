//! Rolling-origin evaluation on double-seasonal load data.
//!
//! The training window expands: each origin trains on every observation
//! before it.

use serde::Serialize;

use super::experiment::Method;
use super::seed::derive_seed;
use crate::combine::{combine, CombineMode, WeightedBundle};
use crate::error::{Error, Result};
use crate::models::{fit_dshw, fit_ets, forecast, ModelSpec, SeasonalKind, TrendKind};
use crate::series::{ForecastBundle, MultiSeasonalSeries};
use crate::subsample::{enumerate_load_plan, extract_values, LoadSeasonality};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadConfig {
    pub train: usize,
    pub horizon: usize,
    pub step: usize,
    pub method: Method,
    pub combine_mode: CombineMode,
    pub level: f64,
    pub paths: usize,
    pub seed: u64,
    /// Adds the AR(1) error adjustment to every DSHW fit.
    pub use_ar: bool,
}

impl Default for LoadConfig {
    fn default() -> Self {
        Self {
            train: 1344,
            horizon: 24,
            step: 24,
            method: Method::Multiple,
            combine_mode: CombineMode::FlatPooled,
            level: 0.95,
            paths: 100,
            seed: 0,
            use_ar: false,
        }
    }
}

impl LoadConfig {
    pub fn validate(&self, periods: (usize, usize)) -> Result<()> {
        if self.step == 0 {
            return Err(Error::InvalidArgument(
                "rolling step must be positive".into(),
            ));
        }
        if self.horizon == 0 || self.horizon > periods.0 {
            return Err(Error::InvalidArgument(format!(
                "load horizon {} must lie in 1..={}",
                self.horizon, periods.0
            )));
        }
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
        Ok(())
    }
}

/// Scaled absolute errors of both methods at one origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginResult {
    /// Number of observations used for training.
    pub origin: usize,
    pub standard: Vec<f64>,
    pub multiple: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedOrigin {
    pub origin: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadReport {
    pub id: String,
    pub periods: (usize, usize),
    pub config: LoadConfig,
    pub origins: Vec<OriginResult>,
    pub skipped: Vec<SkippedOrigin>,
    /// Mean scaled absolute error per horizon step across origins.
    pub standard_curve: Vec<f64>,
    pub multiple_curve: Option<Vec<f64>>,
}

/// Origins `train, train + step, …` that leave a full horizon of data.
pub fn rolling_origins(len: usize, train: usize, horizon: usize, step: usize) -> Vec<usize> {
    if step == 0 {
        return Vec::new();
    }
    (train..)
        .step_by(step)
        .take_while(|&o| o + horizon <= len)
        .collect()
}

fn scale(train: &[f64], lag: usize) -> Result<f64> {
    if train.len() <= lag {
        return Err(Error::InsufficientData {
            needed: lag + 1,
            got: train.len(),
        });
    }
    let d = train
        .windows(lag + 1)
        .map(|w| (w[lag] - w[0]).abs())
        .sum::<f64>()
        / (train.len() - lag) as f64;
    if d > 0.0 {
        Ok(d)
    } else {
        Err(Error::ZeroScaledDenominator)
    }
}

fn standard_forecast(
    series: &MultiSeasonalSeries,
    origin: usize,
    config: &LoadConfig,
) -> Result<ForecastBundle> {
    let full = series.periods.0;
    let seed = derive_seed(config.seed, &series.id, &[origin, 1, full]);
    fit_dshw(&series.values[..origin], series.periods, config.use_ar)?.forecast(
        config.horizon,
        config.level,
        config.paths,
        seed,
    )
}

fn multiple_forecast(
    series: &MultiSeasonalSeries,
    origin: usize,
    config: &LoadConfig,
    standard: &ForecastBundle,
) -> Result<Vec<f64>> {
    let train = &series.values[..origin];
    let head = MultiSeasonalSeries {
        values: train.to_vec(),
        ..series.clone()
    };
    let plan = enumerate_load_plan(&head, config.horizon)?;
    let mut bundles = Vec::with_capacity(plan.len());
    for lw in plan {
        if lw.window.is_full() {
            bundles.push(WeightedBundle {
                bundle: standard
                    .clone()
                    .aligned(lw.window, (1..=config.horizon).collect())?,
                multiplicity: lw.multiplicity,
            });
            continue;
        }
        let sub = extract_values(train, series.short_phase(), lw.window, config.horizon)?;
        let seed = derive_seed(
            config.seed,
            &series.id,
            &[origin, lw.window.start_season, lw.window.width],
        );
        let fitted = match lw.seasonality {
            LoadSeasonality::Single(p) => {
                let spec = ModelSpec::new(TrendKind::Additive, SeasonalKind::Additive, p);
                fit_ets(&sub.sub_values, spec)
                    .and_then(|m| forecast(&m, sub.sub_horizon, config.level, config.paths, seed))
            }
            LoadSeasonality::Double(s1, s2) => fit_dshw(&sub.sub_values, (s1, s2), config.use_ar)
                .and_then(|m| m.forecast(sub.sub_horizon, config.level, config.paths, seed)),
        };
        match fitted {
            Ok(bundle) => bundles.push(WeightedBundle {
                bundle: bundle.aligned(lw.window, sub.alignment)?,
                multiplicity: lw.multiplicity,
            }),
            Err(e) => log::warn!(
                "{} origin {origin}: window (start {}, width {}) failed: {e}",
                series.id,
                lw.window.start_season,
                lw.window.width
            ),
        }
    }
    Ok(combine(&bundles, config.horizon, config.combine_mode)?.points)
}

fn evaluate_origin(
    series: &MultiSeasonalSeries,
    origin: usize,
    config: &LoadConfig,
) -> Result<OriginResult> {
    let h = config.horizon;
    let data = &series.values[..origin + h];
    if data.iter().any(|&v| v <= 0.0) {
        return Err(Error::NonPositiveValues);
    }
    let train = &data[..origin];
    let test = &data[origin..];
    let d = scale(train, series.periods.1)?;
    let scaled = |points: &[f64]| -> Vec<f64> {
        test.iter()
            .zip(points)
            .map(|(y, p)| (y - p).abs() / d)
            .collect()
    };
    let standard = standard_forecast(series, origin, config)?;
    let multiple = match config.method {
        Method::Standard => None,
        Method::Multiple => Some(scaled(&multiple_forecast(
            series, origin, config, &standard,
        )?)),
    };
    Ok(OriginResult {
        origin,
        standard: scaled(&standard.points),
        multiple,
    })
}

fn mean_curve(rows: &[&[f64]], h: usize) -> Vec<f64> {
    (0..h)
        .map(|t| {
            if rows.is_empty() {
                f64::NAN
            } else {
                rows.iter().map(|r| r[t]).sum::<f64>() / rows.len() as f64
            }
        })
        .collect()
}

/// Forecasts from every rolling origin and averages the scaled errors per
/// horizon step. Origins whose data are not strictly positive are skipped.
pub fn run_rolling_load(series: &MultiSeasonalSeries, config: &LoadConfig) -> Result<LoadReport> {
    config.validate(series.periods)?;
    if series.values.len() < config.train + config.horizon {
        return Err(Error::InsufficientData {
            needed: config.train + config.horizon,
            got: series.values.len(),
        });
    }
    let mut origins = Vec::new();
    let mut skipped = Vec::new();
    for origin in rolling_origins(
        series.values.len(),
        config.train,
        config.horizon,
        config.step,
    ) {
        match evaluate_origin(series, origin, config) {
            Ok(r) => origins.push(r),
            Err(e) => {
                log::warn!("{}: origin {origin} skipped: {e}", series.id);
                skipped.push(SkippedOrigin {
                    origin,
                    reason: e.to_string(),
                });
            }
        }
    }
    let h = config.horizon;
    let standard_rows: Vec<&[f64]> = origins.iter().map(|o| o.standard.as_slice()).collect();
    let multiple_curve = match config.method {
        Method::Standard => None,
        Method::Multiple => {
            let rows: Vec<&[f64]> = origins
                .iter()
                .filter_map(|o| o.multiple.as_deref())
                .collect();
            Some(mean_curve(&rows, h))
        }
    };
    Ok(LoadReport {
        id: series.id.clone(),
        periods: series.periods,
        config: config.clone(),
        standard_curve: mean_curve(&standard_rows, h),
        multiple_curve,
        origins,
        skipped,
    })
}
