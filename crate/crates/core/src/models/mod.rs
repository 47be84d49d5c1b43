//! Forecasting models and the [`Forecaster`] interface the pipeline drives.
//!
//! Every model produces point forecasts from its state-space mean path and
//! prediction intervals from seeded Monte Carlo sample paths.

mod dshw;
mod ets;
mod naive;

pub use dshw::{fit_dshw, DshwModel, DshwParams};
pub use ets::{
    ets_components, fit_ets, fit_ets_auto, forecast, EtsParams, EtsStates, FittedModel, ModelSpec,
    SeasonalKind, TrendKind,
};
pub use naive::seasonal_naive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::series::ForecastBundle;

/// Default number of simulated sample paths per forecast.
pub const DEFAULT_PATHS: usize = 1_000;

/// Everything a forecaster gets to see for one (sub)series.
#[derive(Debug, Clone, Copy)]
pub struct ForecastRequest<'a> {
    pub values: &'a [f64],
    /// Seasonal period of `values`.
    pub period: usize,
    /// Position within the period of `values[0]` (1-based).
    pub phase: usize,
    pub horizon: usize,
    /// Nominal interval coverage.
    pub level: f64,
    pub paths: usize,
    pub seed: u64,
    /// Original horizon steps the forecasts map to; empty when not applicable.
    pub target_steps: &'a [usize],
}

/// Trend/seasonal components picked by automatic selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Components {
    pub has_trend: bool,
    pub has_seasonal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastOutput {
    pub bundle: ForecastBundle,
    /// Present for models that select components automatically.
    pub components: Option<Components>,
}

/// A model family that can forecast any (sub)series.
pub trait Forecaster: Send + Sync {
    fn name(&self) -> &str;

    fn forecast(&self, request: &ForecastRequest<'_>) -> Result<ForecastOutput>;
}

/// Automatically selected additive-error exponential smoothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct AutoEts;

impl Forecaster for AutoEts {
    fn name(&self) -> &str {
        "ets"
    }

    fn forecast(&self, request: &ForecastRequest<'_>) -> Result<ForecastOutput> {
        let model = fit_ets_auto(request.values, request.period)?;
        let bundle = forecast(
            &model,
            request.horizon,
            request.level,
            request.paths,
            request.seed,
        )?;
        let (has_trend, has_seasonal) = ets_components(&model);
        Ok(ForecastOutput {
            bundle,
            components: Some(Components {
                has_trend,
                has_seasonal,
            }),
        })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SeasonalNaive;

impl Forecaster for SeasonalNaive {
    fn name(&self) -> &str {
        "snaive"
    }

    fn forecast(&self, request: &ForecastRequest<'_>) -> Result<ForecastOutput> {
        let bundle = seasonal_naive(
            request.values,
            request.period,
            request.horizon,
            request.level,
        )?;
        Ok(ForecastOutput {
            bundle,
            components: None,
        })
    }
}

pub(crate) fn check_forecast_args(h: usize, level: f64, paths: usize) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "coverage level {level} not in (0, 1)"
        )));
    }
    if paths == 0 {
        return Err(Error::InvalidArgument(
            "at least one sample path is required".into(),
        ));
    }
    Ok(())
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal shocks `shocks[step][path]` by Latin hypercube sampling.
///
/// Each step's shocks hit every one of `paths` equal-probability strata once,
/// in an independent random order, so the paths stay independent across steps
/// while the marginal quantiles carry far less Monte Carlo error.
pub(crate) fn stratified_shocks(rng: &mut ChaCha8Rng, h: usize, paths: usize) -> Vec<Vec<f64>> {
    let normal = Normal::standard();
    (0..h)
        .map(|_| {
            let mut column: Vec<f64> = (0..paths)
                .map(|i| {
                    let u: f64 = rng.random();
                    normal.inverse_cdf((i as f64 + u) / paths as f64)
                })
                .collect();
            column.shuffle(rng);
            column
        })
        .collect()
}

/// Sample quantile with linear interpolation between order statistics.
/// `sorted` must be ascending and non-empty.
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Turns `samples[step][path]` into `(lower, upper)` interval bounds.
pub(crate) fn interval_bounds(samples: &mut [Vec<f64>], level: f64) -> (Vec<f64>, Vec<f64>) {
    let tail = (1.0 - level) / 2.0;
    samples
        .iter_mut()
        .map(|s| {
            s.sort_by(f64::total_cmp);
            (quantile_sorted(s, tail), quantile_sorted(s, 1.0 - tail))
        })
        .unzip()
}

pub(crate) fn sample_variance_scale(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    var.sqrt()
}
