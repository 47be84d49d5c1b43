//! Multiplicative double-seasonal Holt-Winters.
//!
//! With short period `s1` and long period `s2`, the one-step recursions are
//!
//! ```text
//! level:   S_t = α·y_t / (D_{t-s1}·W_{t-s2}) + (1-α)(S_{t-1} + T_{t-1})
//! trend:   T_t = γ(S_t - S_{t-1}) + (1-γ)T_{t-1}
//! short:   D_t = δ·y_t / (S_t·W_{t-s2}) + (1-δ)D_{t-s1}
//! long:    W_t = ω·y_t / (S_t·D_{t-s1}) + (1-ω)W_{t-s2}
//! ```
//!
//! and the k-step forecast is `(S_t + k·T_t)·D·W` with the most recent
//! applicable indices, plus `λ^k·e_t` when the AR(1) error adjustment is on.

use serde::{Deserialize, Serialize};

use super::{check_forecast_args, interval_bounds, rng_from_seed, stratified_shocks};
use crate::error::{Error, Result};
use crate::optim::{from_interval, nelder_mead, to_interval, NelderMeadOptions};
use crate::series::ForecastBundle;

const SMOOTH_LO: f64 = 1e-4;
const SMOOTH_HI: f64 = 0.9999;
const LAMBDA_BOUND: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DshwParams {
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
    pub omega: f64,
    pub lambda: f64,
}

impl Default for DshwParams {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            gamma: 0.01,
            delta: 0.1,
            omega: 0.1,
            lambda: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DshwState {
    level: f64,
    trend: f64,
    /// Indexed by observation position modulo `s1`.
    short: Vec<f64>,
    /// Indexed by observation position modulo `s2`.
    long: Vec<f64>,
    /// Error of the unadjusted one-step forecast at the last step.
    last_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DshwModel {
    pub params: DshwParams,
    pub periods: (usize, usize),
    pub use_ar: bool,
    pub n_obs: usize,
    pub sse: f64,
    pub sigma2: f64,
    initial: DshwState,
    last: DshwState,
}

impl DshwModel {
    pub fn label(&self) -> String {
        let (s1, s2) = self.periods;
        if self.use_ar {
            format!("DSHW({s1},{s2})+AR1")
        } else {
            format!("DSHW({s1},{s2})")
        }
    }

    pub fn level(&self) -> f64 {
        self.last.level
    }

    pub fn trend(&self) -> f64 {
        self.last.trend
    }

    /// Short-cycle indices at the end of the sample, ordered by observation position mod `s1`.
    pub fn short_indices(&self) -> &[f64] {
        &self.last.short
    }

    pub fn long_indices(&self) -> &[f64] {
        &self.last.long
    }

    /// Same model with different parameters, states rerun over `train`.
    pub fn refit_with(&self, train: &[f64], params: DshwParams) -> Result<Self> {
        finish(
            train,
            self.periods,
            self.use_ar,
            params,
            self.initial.clone(),
        )
    }

    /// Point forecasts plus simulated prediction intervals.
    pub fn forecast(
        &self,
        h: usize,
        level: f64,
        paths: usize,
        seed: u64,
    ) -> Result<ForecastBundle> {
        check_forecast_args(h, level, paths)?;
        let (s1, s2) = self.periods;
        let n = self.n_obs;
        let st = &self.last;
        let lambda = if self.use_ar { self.params.lambda } else { 0.0 };

        let mut ar = 1.0;
        let points: Vec<f64> = (1..=h)
            .map(|k| {
                ar *= lambda;
                let pos = n + k - 1;
                (st.level + k as f64 * st.trend) * st.short[pos % s1] * st.long[pos % s2]
                    + ar * st.last_error
            })
            .collect();

        let (lower, upper) = if self.sigma2 > 0.0 {
            let sigma = self.sigma2.sqrt();
            let shocks = stratified_shocks(&mut rng_from_seed(seed), h, paths);
            let mut samples = vec![Vec::with_capacity(paths); h];
            for path in 0..paths {
                let mut sim = st.clone();
                for (k, (column, z)) in samples.iter_mut().zip(&shocks).enumerate() {
                    let y = step(
                        &self.params,
                        self.use_ar,
                        &mut sim,
                        (s1, s2),
                        n + k,
                        None,
                        sigma * z[path],
                    );
                    column.push(y);
                }
            }
            interval_bounds(&mut samples, level)
        } else {
            (points.clone(), points.clone())
        };
        Ok(ForecastBundle::new(points, lower, upper, level)?.with_label(self.label()))
    }
}

/// One recursion step at observation position `pos`. With `y = None`, the
/// observation is simulated as prediction plus `shock`. Returns the
/// observation used, or NaN when the states become inadmissible.
#[inline]
fn step(
    p: &DshwParams,
    use_ar: bool,
    st: &mut DshwState,
    (s1, s2): (usize, usize),
    pos: usize,
    y: Option<f64>,
    shock: f64,
) -> f64 {
    let d = st.short[pos % s1];
    let w = st.long[pos % s2];
    let smoothed = st.level + st.trend;
    let base = smoothed * d * w;
    let pred = if use_ar {
        base + p.lambda * st.last_error
    } else {
        base
    };
    let y = y.unwrap_or(pred + shock);
    if d <= 0.0 || w <= 0.0 {
        return f64::NAN;
    }
    let level = p.alpha * y / (d * w) + (1.0 - p.alpha) * smoothed;
    if level.abs() < 1e-12 {
        return f64::NAN;
    }
    st.trend = p.gamma * (level - st.level) + (1.0 - p.gamma) * st.trend;
    st.level = level;
    st.short[pos % s1] = p.delta * y / (level * w) + (1.0 - p.delta) * d;
    st.long[pos % s2] = p.omega * y / (level * d) + (1.0 - p.omega) * w;
    st.last_error = y - base;
    y
}

fn sse_of(
    train: &[f64],
    periods: (usize, usize),
    use_ar: bool,
    p: &DshwParams,
    init: &DshwState,
) -> (f64, DshwState) {
    let mut st = init.clone();
    let mut sse = 0.0;
    for (i, &y) in train.iter().enumerate() {
        let pred = (st.level + st.trend) * st.short[i % periods.0] * st.long[i % periods.1]
            + if use_ar {
                p.lambda * st.last_error
            } else {
                0.0
            };
        if step(p, use_ar, &mut st, periods, i, Some(y), 0.0).is_nan() {
            return (f64::INFINITY, st);
        }
        let e = y - pred;
        sse += e * e;
    }
    if !sse.is_finite() {
        sse = f64::INFINITY;
    }
    (sse, st)
}

/// Starting states from the first two long cycles: level and trend from the
/// cycle means, short indices from the averaged detrended ratios, long indices
/// from what the short indices leave unexplained. Both index vectors average
/// to one; their scale factors are folded into level and trend.
fn initial_state(train: &[f64], (s1, s2): (usize, usize)) -> DshwState {
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let first = mean(&train[..s2]);
    let second = mean(&train[s2..2 * s2]);
    let mut trend = (second - first) / s2 as f64;
    let mut level = first - trend * (s2 as f64 + 1.0) / 2.0;
    if (0..2 * s2).any(|t| level + trend * (t + 1) as f64 <= 0.0) {
        trend = 0.0;
        level = mean(&train[..2 * s2]);
    }
    let ratios: Vec<f64> = (0..2 * s2)
        .map(|t| train[t] / (level + trend * (t + 1) as f64))
        .collect();

    let mut short: Vec<f64> = (0..s1)
        .map(|j| {
            let picked: Vec<f64> = ratios.iter().skip(j).step_by(s1).copied().collect();
            mean(&picked)
        })
        .collect();
    let short_scale = mean(&short);
    short.iter_mut().for_each(|v| *v /= short_scale);
    level *= short_scale;
    trend *= short_scale;

    let mut long: Vec<f64> = (0..s2)
        .map(|k| (ratios[k] + ratios[k + s2]) / 2.0 / short_scale / short[k % s1])
        .collect();
    let long_scale = mean(&long);
    long.iter_mut().for_each(|v| *v /= long_scale);
    level *= long_scale;
    trend *= long_scale;

    DshwState {
        level,
        trend,
        short,
        long,
        last_error: 0.0,
    }
}

fn finish(
    train: &[f64],
    periods: (usize, usize),
    use_ar: bool,
    params: DshwParams,
    initial: DshwState,
) -> Result<DshwModel> {
    let (sse, last) = sse_of(train, periods, use_ar, &params, &initial);
    if !sse.is_finite() {
        return Err(Error::Fit("double-seasonal recursion diverged".into()));
    }
    let k = 4 + usize::from(use_ar);
    let n = train.len();
    let sigma2 = if sse == 0.0 {
        0.0
    } else {
        sse / n.saturating_sub(k).max(1) as f64
    };
    Ok(DshwModel {
        params,
        periods,
        use_ar,
        n_obs: n,
        sse,
        sigma2,
        initial,
        last,
    })
}

fn encode(p: &DshwParams, use_ar: bool) -> Vec<f64> {
    let mut v = vec![
        from_interval(p.alpha, SMOOTH_LO, SMOOTH_HI),
        from_interval(p.gamma, SMOOTH_LO, SMOOTH_HI),
        from_interval(p.delta, SMOOTH_LO, SMOOTH_HI),
        from_interval(p.omega, SMOOTH_LO, SMOOTH_HI),
    ];
    if use_ar {
        v.push(from_interval(p.lambda, -LAMBDA_BOUND, LAMBDA_BOUND));
    }
    v
}

fn decode(v: &[f64], use_ar: bool) -> DshwParams {
    DshwParams {
        alpha: to_interval(v[0], SMOOTH_LO, SMOOTH_HI),
        gamma: to_interval(v[1], SMOOTH_LO, SMOOTH_HI),
        delta: to_interval(v[2], SMOOTH_LO, SMOOTH_HI),
        omega: to_interval(v[3], SMOOTH_LO, SMOOTH_HI),
        lambda: if use_ar {
            to_interval(v[4], -LAMBDA_BOUND, LAMBDA_BOUND)
        } else {
            0.0
        },
    }
}

/// Fits the smoothing parameters (and λ when `use_ar`) by one-step SSE minimization.
pub fn fit_dshw(train: &[f64], periods: (usize, usize), use_ar: bool) -> Result<DshwModel> {
    let (s1, s2) = periods;
    if s1 == 0 || s2 == 0 || s2 % s1 != 0 {
        return Err(Error::NonNestedPeriods {
            short: s1,
            long: s2,
        });
    }
    if train.len() < 2 * s2 {
        return Err(Error::SeriesTooShort {
            needed: 2 * s2,
            got: train.len(),
        });
    }
    if train.iter().any(|&v| v <= 0.0 || !v.is_finite()) {
        return Err(Error::NonPositiveValues);
    }

    let initial = initial_state(train, periods);
    let start = encode(&DshwParams::default(), use_ar);
    let best = nelder_mead(
        |x| sse_of(train, periods, use_ar, &decode(x, use_ar), &initial).0,
        &start,
        &vec![1.0; start.len()],
        NelderMeadOptions::default(),
    );
    finish(train, periods, use_ar, decode(&best.x, use_ar), initial)
}
