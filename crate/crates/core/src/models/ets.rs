//! Additive-error exponential smoothing with automatic form selection.
//!
//! The pool covers trend `{N, A, Ad}` × seasonal `{N, A, M}`. Each form is
//! fitted by minimizing the in-sample one-step SSE over smoothing parameters and
//! initial states; the form with the smallest AICc wins.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    check_forecast_args, interval_bounds, rng_from_seed, sample_variance_scale, stratified_shocks,
};
use crate::error::{Error, Result};
use crate::optim::{from_interval, nelder_mead, to_interval, NelderMeadOptions};
use crate::series::ForecastBundle;

const ALPHA_LO: f64 = 1e-4;
const ALPHA_HI: f64 = 0.9999;
const PHI_LO: f64 = 0.8;
const PHI_HI: f64 = 0.98;
const MIN_LENGTH: usize = 4;

const START_ALPHA: f64 = 0.1;
const START_BETA: f64 = 0.01;
const START_GAMMA: f64 = 0.01;
const START_PHI: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrendKind {
    None,
    Additive,
    AdditiveDamped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeasonalKind {
    None,
    Additive,
    Multiplicative,
}

/// One model form. The error component is always additive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub trend: TrendKind,
    pub seasonal: SeasonalKind,
    pub period: usize,
}

impl ModelSpec {
    pub fn new(trend: TrendKind, seasonal: SeasonalKind, period: usize) -> Self {
        Self {
            trend,
            seasonal,
            period,
        }
    }

    fn has_trend(&self) -> bool {
        self.trend != TrendKind::None
    }

    fn has_seasonal(&self) -> bool {
        self.seasonal != SeasonalKind::None
    }

    /// Period of the seasonal state ring (1 when non-seasonal).
    fn ring(&self) -> usize {
        if self.has_seasonal() {
            self.period
        } else {
            1
        }
    }

    fn smoothing_count(&self) -> usize {
        1 + usize::from(self.has_trend())
            + usize::from(self.has_seasonal())
            + usize::from(self.trend == TrendKind::AdditiveDamped)
    }

    fn state_count(&self) -> usize {
        1 + usize::from(self.has_trend())
            + if self.has_seasonal() {
                self.period - 1
            } else {
                0
            }
    }

    /// Free parameters counted by the information criteria.
    pub fn n_params(&self) -> usize {
        self.smoothing_count() + self.state_count()
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trend = match self.trend {
            TrendKind::None => "N",
            TrendKind::Additive => "A",
            TrendKind::AdditiveDamped => "Ad",
        };
        let seasonal = match self.seasonal {
            SeasonalKind::None => "N",
            SeasonalKind::Additive => "A",
            SeasonalKind::Multiplicative => "M",
        };
        write!(f, "ETS(A,{trend},{seasonal})")?;
        if self.has_seasonal() {
            write!(f, "[{}]", self.period)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtsParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// 1 for undamped forms.
    pub phi: f64,
}

/// Level, trend and seasonal ring. `seasonal[j]` is the index applied to
/// observations at positions `j, j + p, j + 2p, ...` counted from the first
/// training observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtsStates {
    pub level: f64,
    pub trend: f64,
    pub seasonal: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub spec: ModelSpec,
    pub params: EtsParams,
    pub initial: EtsStates,
    /// States after the last training observation.
    pub last: EtsStates,
    pub n_obs: usize,
    pub sse: f64,
    pub sigma2: f64,
    pub n_params: usize,
    pub aic: f64,
    pub aicc: f64,
}

impl FittedModel {
    /// Builds a model from known parameters and end-of-sample states, for
    /// forecasting without fitting.
    pub fn from_states(
        spec: ModelSpec,
        params: EtsParams,
        last: EtsStates,
        n_obs: usize,
        sigma2: f64,
    ) -> Self {
        Self {
            spec,
            params,
            initial: last.clone(),
            last,
            n_obs,
            sse: sigma2 * n_obs as f64,
            sigma2,
            n_params: spec.n_params(),
            aic: f64::NAN,
            aicc: f64::NAN,
        }
    }

    pub fn label(&self) -> String {
        self.spec.to_string()
    }

    /// One-step in-sample residuals recomputed from the initial states.
    pub fn residuals(&self, train: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(train.len());
        run(&self.spec, &self.params, &self.initial, train, |e| {
            out.push(e)
        });
        out
    }
}

/// Applies one observation (or one simulated innovation) to the states.
/// Returns the one-step prediction made before the update.
#[inline]
fn step(
    spec: &ModelSpec,
    p: &EtsParams,
    st: &mut EtsStates,
    slot: usize,
    y: Option<f64>,
    shock: f64,
) -> (f64, f64) {
    let damped = if spec.has_trend() {
        p.phi * st.trend
    } else {
        0.0
    };
    let base = st.level + damped;
    let s = st.seasonal[slot];
    let pred = match spec.seasonal {
        SeasonalKind::None => base,
        SeasonalKind::Additive => base + s,
        SeasonalKind::Multiplicative => base * s,
    };
    let e = match y {
        Some(y) => y - pred,
        None => shock,
    };
    match spec.seasonal {
        SeasonalKind::None => {
            st.level = base + p.alpha * e;
            st.trend = damped + p.beta * e;
        }
        SeasonalKind::Additive => {
            st.level = base + p.alpha * e;
            st.trend = damped + p.beta * e;
            st.seasonal[slot] = s + p.gamma * e;
        }
        SeasonalKind::Multiplicative => {
            st.level = base + p.alpha * e / s;
            st.trend = damped + p.beta * e / s;
            st.seasonal[slot] = s + p.gamma * e / base;
        }
    }
    if !spec.has_trend() {
        st.trend = 0.0;
    }
    (pred, e)
}

/// Runs the recursion over `y`, feeding each one-step error to `on_error`.
/// Returns `None` when the states leave the admissible region.
fn run(
    spec: &ModelSpec,
    p: &EtsParams,
    init: &EtsStates,
    y: &[f64],
    mut on_error: impl FnMut(f64),
) -> Option<EtsStates> {
    let mut st = init.clone();
    let ring = spec.ring();
    for (i, &obs) in y.iter().enumerate() {
        let slot = i % ring;
        if spec.seasonal == SeasonalKind::Multiplicative {
            let base = st.level
                + if spec.has_trend() {
                    p.phi * st.trend
                } else {
                    0.0
                };
            if st.seasonal[slot] <= 0.0 || base.abs() < 1e-10 {
                return None;
            }
        }
        let (_, e) = step(spec, p, &mut st, slot, Some(obs), 0.0);
        if !e.is_finite() {
            return None;
        }
        on_error(e);
    }
    Some(st)
}

fn sse_of(
    spec: &ModelSpec,
    p: &EtsParams,
    init: &EtsStates,
    y: &[f64],
) -> (f64, Option<EtsStates>) {
    let mut sse = 0.0;
    let last = run(spec, p, init, y, |e| sse += e * e);
    (sse, last)
}

/// Ordinary least squares `y = a + b x`.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return (my, 0.0);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

/// Heuristic starting states: a linear fit over the first cycles for level and
/// trend, cycle-wise averages (or ratios) for the seasonal indices.
fn initial_states(y: &[f64], spec: &ModelSpec) -> EtsStates {
    if !spec.has_seasonal() {
        let k = y.len().min(10);
        let t: Vec<f64> = (1..=k).map(|v| v as f64).collect();
        let (a, b) = linear_fit(&t, &y[..k]);
        return if spec.has_trend() {
            EtsStates {
                level: a,
                trend: b,
                seasonal: vec![0.0],
            }
        } else {
            EtsStates {
                level: y[..k].iter().sum::<f64>() / k as f64,
                trend: 0.0,
                seasonal: vec![0.0],
            }
        };
    }

    let p = spec.period;
    let cycles = (y.len() / p).clamp(2, 4);
    let means: Vec<f64> = (0..cycles)
        .map(|i| y[i * p..(i + 1) * p].iter().sum::<f64>() / p as f64)
        .collect();
    let centers: Vec<f64> = (0..cycles)
        .map(|i| (i * p) as f64 + (p as f64 + 1.0) / 2.0)
        .collect();
    let (mut level, mut slope) = if spec.has_trend() {
        linear_fit(&centers, &means)
    } else {
        (means.iter().sum::<f64>() / cycles as f64, 0.0)
    };

    let multiplicative = spec.seasonal == SeasonalKind::Multiplicative;
    let mut seasonal: Vec<f64> = (0..p)
        .map(|j| {
            let total: f64 = (0..cycles)
                .map(|i| {
                    let t = i * p + j;
                    let trend_line = level + slope * (t + 1) as f64;
                    if multiplicative {
                        y[t] / trend_line
                    } else {
                        y[t] - trend_line
                    }
                })
                .sum();
            total / cycles as f64
        })
        .collect();
    let centre = seasonal.iter().sum::<f64>() / p as f64;
    if multiplicative {
        if centre.is_finite() && centre > 0.0 {
            seasonal.iter_mut().for_each(|s| *s /= centre);
            level *= centre;
            slope *= centre;
        }
        if seasonal.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            seasonal.iter_mut().for_each(|s| *s = 1.0);
        }
    } else {
        seasonal.iter_mut().for_each(|s| *s -= centre);
        level += centre;
    }
    EtsStates {
        level,
        trend: slope,
        seasonal,
    }
}

/// Maps between the unconstrained search vector and (params, initial states).
struct Layout {
    spec: ModelSpec,
}

impl Layout {
    fn encode(&self, p: &EtsParams, st: &EtsStates) -> Vec<f64> {
        let spec = &self.spec;
        let mut v = vec![from_interval(p.alpha, ALPHA_LO, ALPHA_HI)];
        if spec.has_trend() {
            v.push(from_interval(p.beta, 0.0, p.alpha));
        }
        if spec.has_seasonal() {
            v.push(from_interval(p.gamma, 0.0, 1.0 - p.alpha));
        }
        if spec.trend == TrendKind::AdditiveDamped {
            v.push(from_interval(p.phi, PHI_LO, PHI_HI));
        }
        v.push(st.level);
        if spec.has_trend() {
            v.push(st.trend);
        }
        if spec.has_seasonal() {
            v.extend_from_slice(&st.seasonal[..spec.period - 1]);
        }
        v
    }

    fn decode(&self, v: &[f64]) -> Option<(EtsParams, EtsStates)> {
        let spec = &self.spec;
        let mut it = v.iter().copied();
        let alpha = to_interval(it.next()?, ALPHA_LO, ALPHA_HI);
        let beta = if spec.has_trend() {
            to_interval(it.next()?, 0.0, alpha)
        } else {
            0.0
        };
        let gamma = if spec.has_seasonal() {
            to_interval(it.next()?, 0.0, 1.0 - alpha)
        } else {
            0.0
        };
        let phi = match spec.trend {
            TrendKind::AdditiveDamped => to_interval(it.next()?, PHI_LO, PHI_HI),
            _ => 1.0,
        };
        let level = it.next()?;
        let trend = if spec.has_trend() { it.next()? } else { 0.0 };
        let seasonal = if spec.has_seasonal() {
            let mut s: Vec<f64> = it.by_ref().take(spec.period - 1).collect();
            let partial: f64 = s.iter().sum();
            match spec.seasonal {
                SeasonalKind::Additive => s.push(-partial),
                _ => {
                    let last = spec.period as f64 - partial;
                    if last <= 0.0 {
                        return None;
                    }
                    s.push(last);
                }
            }
            s
        } else {
            vec![0.0]
        };
        Some((
            EtsParams {
                alpha,
                beta,
                gamma,
                phi,
            },
            EtsStates {
                level,
                trend,
                seasonal,
            },
        ))
    }

    fn steps(&self, scale: f64) -> Vec<f64> {
        let spec = &self.spec;
        let mut steps = vec![1.0; spec.smoothing_count()];
        steps.push(0.1 * scale);
        if spec.has_trend() {
            steps.push(0.01 * scale);
        }
        if spec.has_seasonal() {
            let s = if spec.seasonal == SeasonalKind::Multiplicative {
                0.05
            } else {
                0.1 * scale
            };
            steps.extend(std::iter::repeat_n(s, spec.period - 1));
        }
        steps
    }
}

fn information_criteria(sse: f64, n: usize, k: usize) -> (f64, f64) {
    let n_f = n as f64;
    let ratio = (sse / n_f).max(f64::MIN_POSITIVE);
    let aic = n_f * ratio.ln() + 2.0 * k as f64;
    let aicc = aic + 2.0 * (k * (k + 1)) as f64 / (n_f - k as f64 - 1.0);
    (aic, aicc)
}

fn finish(
    spec: ModelSpec,
    params: EtsParams,
    initial: EtsStates,
    train: &[f64],
) -> Result<FittedModel> {
    let (sse, last) = sse_of(&spec, &params, &initial, train);
    let last = last.ok_or_else(|| Error::Fit(format!("{spec} left the admissible region")))?;
    let n = train.len();
    let k = spec.n_params();
    let sigma2 = if sse == 0.0 {
        0.0
    } else if n > k {
        sse / (n - k) as f64
    } else {
        sse / n as f64
    };
    let (aic, aicc) = information_criteria(sse, n, k);
    Ok(FittedModel {
        spec,
        params,
        initial,
        last,
        n_obs: n,
        sse,
        sigma2,
        n_params: k,
        aic,
        aicc,
    })
}

fn check_train(train: &[f64]) -> Result<()> {
    if train.len() < MIN_LENGTH {
        return Err(Error::InsufficientData {
            needed: MIN_LENGTH,
            got: train.len(),
        });
    }
    if train.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "training data must be finite".into(),
        ));
    }
    Ok(())
}

/// Fits one fixed model form.
pub fn fit_ets(train: &[f64], spec: ModelSpec) -> Result<FittedModel> {
    check_train(train)?;
    if spec.period == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if spec.has_seasonal() && (spec.period < 2 || train.len() < 2 * spec.period) {
        return Err(Error::InsufficientData {
            needed: 2 * spec.period.max(2),
            got: train.len(),
        });
    }
    if spec.seasonal == SeasonalKind::Multiplicative && train.iter().any(|&v| v <= 0.0) {
        return Err(Error::NonPositiveValues);
    }

    let layout = Layout { spec };
    let start_params = EtsParams {
        alpha: START_ALPHA,
        beta: START_BETA,
        gamma: START_GAMMA,
        phi: if spec.trend == TrendKind::AdditiveDamped {
            START_PHI
        } else {
            1.0
        },
    };
    let start_states = initial_states(train, &spec);
    let x0 = layout.encode(&start_params, &start_states);
    let mut scale = sample_variance_scale(train);
    if scale.is_nan() || scale <= 0.0 {
        scale = train[0].abs().max(1.0) * 1e-3;
    }
    let best = nelder_mead(
        |x| match layout.decode(x) {
            Some((p, st)) => match sse_of(&spec, &p, &st, train) {
                (sse, Some(_)) => sse,
                _ => f64::INFINITY,
            },
            None => f64::INFINITY,
        },
        &x0,
        &layout.steps(scale),
        NelderMeadOptions::default(),
    );
    if !best.value.is_finite() {
        return Err(Error::Fit(format!("{spec} has no admissible fit")));
    }
    let (params, initial) = layout
        .decode(&best.x)
        .ok_or_else(|| Error::Fit(format!("{spec} optimum is inadmissible")))?;
    finish(spec, params, initial, train)
}

fn candidate_pool(train: &[f64], period: usize) -> Vec<ModelSpec> {
    let n = train.len();
    let seasonal_ok = period >= 2 && n >= 2 * period;
    let positive = train.iter().all(|&v| v > 0.0);
    let mut pool = Vec::new();
    for trend in [
        TrendKind::None,
        TrendKind::Additive,
        TrendKind::AdditiveDamped,
    ] {
        for seasonal in [
            SeasonalKind::None,
            SeasonalKind::Additive,
            SeasonalKind::Multiplicative,
        ] {
            if seasonal != SeasonalKind::None && !seasonal_ok {
                continue;
            }
            if seasonal == SeasonalKind::Multiplicative && !positive {
                continue;
            }
            let spec = ModelSpec::new(
                trend,
                seasonal,
                if seasonal == SeasonalKind::None {
                    1
                } else {
                    period
                },
            );
            // AICc needs n - k - 1 > 0
            if spec.n_params() + 1 >= n {
                continue;
            }
            pool.push(spec);
        }
    }
    pool
}

/// Fits every admissible form and returns the one with the smallest AICc.
/// Ties go to fewer parameters, then to the earlier form in pool order.
pub fn fit_ets_auto(train: &[f64], period: usize) -> Result<FittedModel> {
    check_train(train)?;
    if period == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if train.iter().all(|&v| v == train[0]) {
        let spec = ModelSpec::new(TrendKind::None, SeasonalKind::None, 1);
        let params = EtsParams {
            alpha: ALPHA_LO,
            beta: 0.0,
            gamma: 0.0,
            phi: 1.0,
        };
        let states = EtsStates {
            level: train[0],
            trend: 0.0,
            seasonal: vec![0.0],
        };
        return finish(spec, params, states, train);
    }

    let mut best: Option<FittedModel> = None;
    let mut last_err = None;
    for spec in candidate_pool(train, period) {
        match fit_ets(train, spec) {
            Ok(model) => {
                let better = match &best {
                    None => true,
                    Some(b) => {
                        model.aicc < b.aicc || (model.aicc == b.aicc && model.n_params < b.n_params)
                    }
                };
                if better {
                    best = Some(model);
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or_else(|| Error::Fit("no admissible model form".into())))
}

/// `(has_trend, has_seasonal)` of the selected form.
pub fn ets_components(model: &FittedModel) -> (bool, bool) {
    (model.spec.has_trend(), model.spec.has_seasonal())
}

/// Mean-path point forecasts with simulated prediction intervals.
pub fn forecast(
    model: &FittedModel,
    h: usize,
    level: f64,
    paths: usize,
    seed: u64,
) -> Result<ForecastBundle> {
    check_forecast_args(h, level, paths)?;
    let spec = &model.spec;
    let p = &model.params;
    let ring = spec.ring();
    let last = &model.last;
    if last.seasonal.len() != ring {
        return Err(Error::InvalidArgument(format!(
            "seasonal state has {} entries, expected {ring}",
            last.seasonal.len()
        )));
    }

    let mut points = Vec::with_capacity(h);
    let mut damp_sum = 0.0;
    let mut damp_pow = 1.0;
    for k in 1..=h {
        let trend = if spec.has_trend() {
            damp_pow *= p.phi;
            damp_sum += damp_pow;
            damp_sum * last.trend
        } else {
            0.0
        };
        let base = last.level + trend;
        let s = last.seasonal[(model.n_obs + k - 1) % ring];
        points.push(match spec.seasonal {
            SeasonalKind::None => base,
            SeasonalKind::Additive => base + s,
            SeasonalKind::Multiplicative => base * s,
        });
    }

    let (lower, upper) = if model.sigma2 > 0.0 {
        let sigma = model.sigma2.sqrt();
        let shocks = stratified_shocks(&mut rng_from_seed(seed), h, paths);
        let mut samples = vec![Vec::with_capacity(paths); h];
        for path in 0..paths {
            let mut st = last.clone();
            for (k, (column, z)) in samples.iter_mut().zip(&shocks).enumerate() {
                let shock = sigma * z[path];
                let (pred, _) = step(spec, p, &mut st, (model.n_obs + k) % ring, None, shock);
                column.push(pred + shock);
            }
        }
        interval_bounds(&mut samples, level)
    } else {
        (points.clone(), points.clone())
    };

    Ok(ForecastBundle::new(points, lower, upper, level)?.with_label(model.label()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level_model(level: f64, alpha: f64, sigma2: f64) -> FittedModel {
        FittedModel::from_states(
            ModelSpec::new(TrendKind::None, SeasonalKind::None, 1),
            EtsParams {
                alpha,
                beta: 0.0,
                gamma: 0.0,
                phi: 1.0,
            },
            EtsStates {
                level,
                trend: 0.0,
                seasonal: vec![0.0],
            },
            20,
            sigma2,
        )
    }

    #[test]
    fn constant_series_is_level_only() {
        let m = fit_ets_auto(&[5.0; 6], 1).unwrap();
        assert_eq!(ets_components(&m), (false, false));
        assert_eq!(m.sse, 0.0);
        assert_eq!(m.params.alpha, ALPHA_LO);
        let f = forecast(&m, 4, 0.95, 100, 1).unwrap();
        assert_eq!(f.points, vec![5.0; 4]);
        assert_eq!(f.lower, f.points);
    }

    #[test]
    fn too_short_is_rejected() {
        assert!(matches!(
            fit_ets_auto(&[1.0, 2.0, 3.0], 1),
            Err(Error::InsufficientData { needed: 4, got: 3 })
        ));
    }

    #[test]
    fn linear_series_selects_trend() {
        let y: Vec<f64> = (1..=20).map(|t| 2.0 + 3.0 * t as f64).collect();
        let m = fit_ets_auto(&y, 1).unwrap();
        assert_eq!(m.spec.trend, TrendKind::Additive);
        let f = forecast(&m, 6, 0.95, 200, 3).unwrap();
        for (k, v) in f.points.iter().enumerate() {
            let truth = 2.0 + 3.0 * (20 + k + 1) as f64;
            assert!((v - truth).abs() < 1e-6, "step {k}: {v} vs {truth}");
        }
    }

    #[test]
    fn trend_plus_cycle_selects_additive_seasonal() {
        let cycle = [3.0, -1.0, -4.0, 2.0];
        let y: Vec<f64> = (0..24)
            .map(|t| 10.0 + 0.5 * t as f64 + cycle[t % 4])
            .collect();
        let m = fit_ets_auto(&y, 4).unwrap();
        assert_eq!(m.spec.seasonal, SeasonalKind::Additive, "{}", m.label());
        assert!(m.sse < 1e-12);
    }

    #[test]
    fn level_only_forecast_without_noise() {
        let f = forecast(&level_model(10.0, 0.3, 0.0), 5, 0.95, 50, 9).unwrap();
        assert_eq!(f.points, vec![10.0; 5]);
        assert_eq!(f.lower, f.points);
        assert_eq!(f.upper, f.points);
    }

    #[test]
    fn damped_trend_point_forecast() {
        let model = FittedModel::from_states(
            ModelSpec::new(TrendKind::AdditiveDamped, SeasonalKind::None, 1),
            EtsParams {
                alpha: 0.2,
                beta: 0.1,
                gamma: 0.0,
                phi: 0.9,
            },
            EtsStates {
                level: 0.0,
                trend: 1.0,
                seasonal: vec![0.0],
            },
            10,
            0.0,
        );
        let f = forecast(&model, 8, 0.9, 10, 0).unwrap();
        for h in 1..=8 {
            let closed: f64 = (1..=h).map(|j| 0.9f64.powi(j as i32)).sum();
            assert!((f.points[h - 1] - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_replay_matches_sse() {
        let y: Vec<f64> = (0..30)
            .map(|t| 20.0 + (t as f64 * 0.7).sin() * 3.0 + (t % 3) as f64)
            .collect();
        let m = fit_ets_auto(&y, 3).unwrap();
        let replay: f64 = m.residuals(&y).iter().map(|e| e * e).sum();
        assert!((replay - m.sse).abs() <= 1e-9 * m.sse.max(1e-300));
    }

    #[test]
    fn parameters_stay_admissible() {
        let y: Vec<f64> = (0..40)
            .map(|t| {
                50.0 + t as f64 + [5.0, -2.0, -3.0, 0.0][t % 4] + ((t * 7919) % 13) as f64 * 0.3
            })
            .collect();
        for spec in candidate_pool(&y, 4) {
            let m = fit_ets(&y, spec).unwrap();
            let p = m.params;
            assert!(p.alpha > 0.0 && p.alpha < 1.0);
            if spec.has_trend() {
                assert!(p.beta >= 0.0 && p.beta < p.alpha);
            }
            if spec.has_seasonal() {
                assert!(p.gamma >= 0.0 && p.gamma < 1.0 - p.alpha);
                let s = &m.initial.seasonal;
                let sum: f64 = s.iter().sum();
                match spec.seasonal {
                    SeasonalKind::Additive => assert!(sum.abs() < 1e-9),
                    _ => assert!((sum / 4.0 - 1.0).abs() < 1e-9),
                }
            }
            if spec.trend == TrendKind::AdditiveDamped {
                assert!((PHI_LO..=PHI_HI).contains(&p.phi));
            }
        }
    }

    #[test]
    fn aicc_penalizes_parameters() {
        let (_, small) = information_criteria(10.0, 30, 3);
        let (_, large) = information_criteria(10.0, 30, 5);
        assert!(small < large);
        let (aic, aicc) = information_criteria(12.0, 20, 4);
        let expected_aic = 20.0 * (12.0f64 / 20.0).ln() + 8.0;
        assert!((aic - expected_aic).abs() < 1e-12);
        assert!((aicc - (expected_aic + 40.0 / 15.0)).abs() < 1e-12);
    }

    #[test]
    fn components_reflect_form() {
        let mut m = level_model(1.0, 0.5, 1.0);
        assert_eq!(ets_components(&m), (false, false));
        m.spec = ModelSpec::new(TrendKind::AdditiveDamped, SeasonalKind::Additive, 4);
        assert_eq!(ets_components(&m), (true, true));
        m.spec = ModelSpec::new(TrendKind::None, SeasonalKind::Additive, 4);
        assert_eq!(ets_components(&m), (false, true));
    }

    #[test]
    fn forecasts_are_deterministic() {
        let y: Vec<f64> = (0..24).map(|t| 5.0 + ((t * 37) % 11) as f64).collect();
        let a = fit_ets_auto(&y, 4).unwrap();
        let b = fit_ets_auto(&y, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            forecast(&a, 6, 0.95, 500, 42).unwrap(),
            forecast(&b, 6, 0.95, 500, 42).unwrap()
        );
    }

    #[test]
    fn additive_seasonal_forecast_is_periodic_up_to_trend() {
        let cycle = [3.0, -1.0, -4.0, 2.0];
        let y: Vec<f64> = (0..32)
            .map(|t| 10.0 + 0.5 * t as f64 + cycle[t % 4] + ((t * 31) % 7) as f64 * 0.1)
            .collect();
        let m = fit_ets(
            &y,
            ModelSpec::new(TrendKind::Additive, SeasonalKind::Additive, 4),
        )
        .unwrap();
        let f = forecast(&m, 12, 0.95, 10, 0).unwrap();
        for t in 0..8 {
            let diff = f.points[t + 4] - f.points[t];
            assert!((diff - 4.0 * m.last.trend).abs() < 1e-9);
        }
    }
}
