//! Equal-weight pooling of aligned subseries forecasts.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::ForecastBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CombineMode {
    /// Mean over every forecast instance covering a step; the full-width
    /// forecast enters `multiplicity` times.
    #[default]
    FlatPooled,
    /// Mean within each information level first, then equal weight per level.
    LevelEqual,
}

impl fmt::Display for CombineMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CombineMode::FlatPooled => "pooled",
            CombineMode::LevelEqual => "level-equal",
        })
    }
}

impl FromStr for CombineMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" | "flat" | "flat-pooled" => Ok(CombineMode::FlatPooled),
            "level-equal" | "level" => Ok(CombineMode::LevelEqual),
            other => Err(Error::InvalidArgument(format!(
                "unknown combine mode '{other}'"
            ))),
        }
    }
}

/// A subseries forecast and the number of copies it contributes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedBundle {
    pub bundle: ForecastBundle,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedForecast {
    pub points: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub instance_counts: Vec<usize>,
    pub mode: CombineMode,
}

impl CombinedForecast {
    pub fn as_bundle(&self, level: f64) -> Result<ForecastBundle> {
        Ok(ForecastBundle::new(
            self.points.clone(),
            self.lower.clone(),
            self.upper.clone(),
            level,
        )?
        .with_label(format!("combined[{}]", self.mode)))
    }
}

/// Per-step mean point forecast of each information level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    /// Widths present, ascending.
    pub levels: Vec<usize>,
    /// `means[t][i]` is the mean of level `levels[i]` at step `t + 1`, if it covers that step.
    pub means: Vec<Vec<Option<f64>>>,
}

struct Entry<'a> {
    width: usize,
    start: usize,
    multiplicity: usize,
    bundle: &'a ForecastBundle,
    alignment: &'a [usize],
}

fn validated(bundles: &[WeightedBundle], h: usize) -> Result<Vec<Entry<'_>>> {
    if h == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    let mut entries = Vec::with_capacity(bundles.len());
    for wb in bundles {
        let b = &wb.bundle;
        let (Some(window), Some(alignment)) = (b.source_window, b.alignment.as_deref()) else {
            return Err(Error::InvalidArgument(
                "bundle lacks a window or alignment".into(),
            ));
        };
        if alignment.len() != b.points.len() || alignment.iter().any(|&t| t == 0 || t > h) {
            return Err(Error::InvalidArgument(format!(
                "alignment of window (start {}, width {}) does not fit horizon {h}",
                window.start_season, window.width
            )));
        }
        if wb.multiplicity == 0 {
            return Err(Error::InvalidArgument(
                "multiplicity must be positive".into(),
            ));
        }
        b.check()?;
        entries.push(Entry {
            width: window.width,
            start: window.start_season,
            multiplicity: wb.multiplicity,
            bundle: b,
            alignment,
        });
    }
    if !bundles
        .iter()
        .any(|wb| wb.bundle.source_window.is_some_and(|w| w.is_full()))
    {
        return Err(Error::InvalidArgument(
            "the full-width forecast is missing".into(),
        ));
    }
    // Canonical order makes the floating-point sums independent of input order.
    entries.sort_by(|a, b| {
        (a.width, a.start)
            .cmp(&(b.width, b.start))
            .then_with(|| compare_values(&a.bundle.points, &b.bundle.points))
    });
    Ok(entries)
}

fn compare_values(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Weighted mean; returns the common value exactly when all values agree.
fn weighted_mean(items: &[(f64, usize)]) -> f64 {
    let first = items[0].0;
    if items.iter().all(|&(v, _)| v == first) {
        return first;
    }
    let total: usize = items.iter().map(|&(_, w)| w).sum();
    let sum: f64 = items.iter().map(|&(v, w)| v * w as f64).sum();
    sum / total as f64
}

/// `(bundle, forecast index)` pairs grouped by horizon step.
fn per_step<'a>(entries: &'a [Entry<'a>], h: usize) -> Vec<Vec<(&'a Entry<'a>, usize)>> {
    let mut steps = vec![Vec::new(); h];
    for e in entries {
        for (j, &t) in e.alignment.iter().enumerate() {
            steps[t - 1].push((e, j));
        }
    }
    steps
}

fn pooled(
    cover: &[(&Entry<'_>, usize)],
    mode: CombineMode,
    pick: impl Fn(&ForecastBundle, usize) -> f64,
) -> f64 {
    match mode {
        CombineMode::FlatPooled => {
            let items: Vec<(f64, usize)> = cover
                .iter()
                .map(|(e, j)| (pick(e.bundle, *j), e.multiplicity))
                .collect();
            weighted_mean(&items)
        }
        CombineMode::LevelEqual => {
            let mut levels: BTreeMap<usize, Vec<(f64, usize)>> = BTreeMap::new();
            for (e, j) in cover {
                levels
                    .entry(e.width)
                    .or_default()
                    .push((pick(e.bundle, *j), 1));
            }
            let level_means: Vec<(f64, usize)> =
                levels.values().map(|v| (weighted_mean(v), 1)).collect();
            weighted_mean(&level_means)
        }
    }
}

/// Combines subseries forecasts into one forecast per original step `1..=h`.
/// Lower and upper bounds are pooled with the same weights as the points.
pub fn combine(
    bundles: &[WeightedBundle],
    h: usize,
    mode: CombineMode,
) -> Result<CombinedForecast> {
    let entries = validated(bundles, h)?;
    let steps = per_step(&entries, h);
    let mut out = CombinedForecast {
        points: Vec::with_capacity(h),
        lower: Vec::with_capacity(h),
        upper: Vec::with_capacity(h),
        instance_counts: Vec::with_capacity(h),
        mode,
    };
    for (t, cover) in steps.iter().enumerate() {
        if cover.is_empty() {
            return Err(Error::NoCoverage(t + 1));
        }
        out.points.push(pooled(cover, mode, |b, j| b.points[j]));
        let lower = pooled(cover, mode, |b, j| b.lower[j]);
        // the exact-agreement shortcut can leave the bounds one rounding step apart
        let upper = pooled(cover, mode, |b, j| b.upper[j]).max(lower);
        out.lower.push(lower);
        out.upper.push(upper);
        out.instance_counts
            .push(cover.iter().map(|(e, _)| e.multiplicity).sum());
    }
    Ok(out)
}

/// Groups bundles by width and reports each level's mean point forecast per step.
pub fn combine_levels_report(bundles: &[WeightedBundle], h: usize) -> Result<LevelReport> {
    let entries = validated(bundles, h)?;
    let mut levels: Vec<usize> = entries.iter().map(|e| e.width).collect();
    levels.dedup();
    let steps = per_step(&entries, h);
    let means = steps
        .iter()
        .map(|cover| {
            levels
                .iter()
                .map(|&width| {
                    let items: Vec<(f64, usize)> = cover
                        .iter()
                        .filter(|(e, _)| e.width == width)
                        .map(|(e, j)| (e.bundle.points[*j], 1))
                        .collect();
                    (!items.is_empty()).then(|| weighted_mean(&items))
                })
                .collect()
        })
        .collect();
    Ok(LevelReport { levels, means })
}
