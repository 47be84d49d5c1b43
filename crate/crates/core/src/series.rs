//! Value types shared by every stage of the pipeline: seasonal series,
//! double-seasonal series and per-series forecast containers.
//!
//! All indices exposed by these types are 1-based. Season numbers run from
//! `1` to `m` and the first observation sits at `start_phase`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subsample::SeasonWindow;

/// A single-seasonal series with its calendar phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeasonalSeries {
    pub id: String,
    pub values: Vec<f64>,
    /// Observations per seasonal cycle.
    pub frequency: usize,
    /// Season index of the first observation, in `1..=frequency`.
    pub start_phase: usize,
    pub category: Option<String>,
}

/// One invariant violation found by [`validate_series`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesViolation {
    Empty,
    NonFinite { index: usize },
    ZeroFrequency,
    PhaseOutOfRange { phase: usize, frequency: usize },
}

impl fmt::Display for SeriesViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesViolation::Empty => write!(f, "empty series"),
            SeriesViolation::NonFinite { index } => write!(f, "non-finite at index {index}"),
            SeriesViolation::ZeroFrequency => write!(f, "frequency must be positive"),
            SeriesViolation::PhaseOutOfRange { phase, frequency } => {
                write!(f, "phase out of range ({phase} not in 1..={frequency})")
            }
        }
    }
}

impl SeasonalSeries {
    /// Builds a series and checks its invariants.
    pub fn new(
        id: impl Into<String>,
        values: Vec<f64>,
        frequency: usize,
        start_phase: usize,
    ) -> Result<Self> {
        let series = Self {
            id: id.into(),
            values,
            frequency,
            start_phase,
            category: None,
        };
        series.check()?;
        Ok(series)
    }

    pub fn with_category(mut self, category: impl Into<String>) -> Self {
        self.category = Some(category.into());
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Season of the 1-based `index`; indices past the end address future slots.
    pub fn season_of(&self, index: usize) -> usize {
        season_of(self.frequency, self.start_phase, index)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let violations = validate_series(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSeries {
                id: self.id.clone(),
                reasons: join_violations(&violations),
            })
        }
    }
}

pub(crate) fn join_violations(violations: &[SeriesViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Calendar arithmetic: `((start_phase - 1 + index - 1) mod m) + 1`.
///
/// `index` is 1-based. A frequency of zero is treated as one.
pub fn season_of(frequency: usize, start_phase: usize, index: usize) -> usize {
    debug_assert!(index >= 1, "indices are 1-based");
    let m = frequency.max(1);
    (start_phase.saturating_sub(1) + index.saturating_sub(1)) % m + 1
}

/// Returns every invariant violation; an empty list means the series is valid.
pub fn validate_series(series: &SeasonalSeries) -> Vec<SeriesViolation> {
    let mut out = Vec::new();
    if series.values.is_empty() {
        out.push(SeriesViolation::Empty);
    }
    for (i, v) in series.values.iter().enumerate() {
        if !v.is_finite() {
            out.push(SeriesViolation::NonFinite { index: i + 1 });
        }
    }
    if series.frequency == 0 {
        out.push(SeriesViolation::ZeroFrequency);
    } else if series.start_phase < 1 || series.start_phase > series.frequency {
        out.push(SeriesViolation::PhaseOutOfRange {
            phase: series.start_phase,
            frequency: series.frequency,
        });
    }
    out
}

/// A series with two nested seasonal cycles, e.g. hour-of-day (24) inside
/// hour-of-week (168).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSeasonalSeries {
    pub id: String,
    pub values: Vec<f64>,
    /// `(short, long)` periods; `long` is a multiple of `short`.
    pub periods: (usize, usize),
    /// Position of the first observation within the long cycle, in `1..=long`.
    pub start_phase: usize,
}

impl MultiSeasonalSeries {
    pub fn new(
        id: impl Into<String>,
        values: Vec<f64>,
        periods: (usize, usize),
        start_phase: usize,
    ) -> Result<Self> {
        let (short, long) = periods;
        if short < 2 || long == 0 || long % short != 0 {
            return Err(Error::NonNestedPeriods { short, long });
        }
        if start_phase < 1 || start_phase > long {
            return Err(Error::InvalidArgument(format!(
                "start phase {start_phase} not in 1..={long}"
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite at index {}",
                i + 1
            )));
        }
        Ok(Self {
            id: id.into(),
            values,
            periods,
            start_phase,
        })
    }

    /// Phase within the short cycle of the first observation.
    pub fn short_phase(&self) -> usize {
        (self.start_phase - 1) % self.periods.0 + 1
    }

    /// Number of short cycles per long cycle (7 for day-within-week).
    pub fn cycles_per_long(&self) -> usize {
        self.periods.1 / self.periods.0
    }

    /// The first `len` observations viewed as a single-seasonal series over the short cycle.
    pub fn head_as_seasonal(&self, len: usize) -> Result<SeasonalSeries> {
        SeasonalSeries::new(
            self.id.clone(),
            self.values[..len.min(self.values.len())].to_vec(),
            self.periods.0,
            self.short_phase(),
        )
    }
}

/// Point forecasts and prediction-interval bounds for one (sub)series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastBundle {
    pub points: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Nominal coverage of the interval, e.g. 0.95.
    pub level: f64,
    pub model_label: String,
    pub source_window: Option<SeasonWindow>,
    /// `alignment[j]` is the original horizon step (1-based) of forecast `j`.
    pub alignment: Option<Vec<usize>>,
}

impl ForecastBundle {
    pub fn new(points: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>, level: f64) -> Result<Self> {
        let bundle = Self {
            points,
            lower,
            upper,
            level,
            model_label: String::new(),
            source_window: None,
            alignment: None,
        };
        bundle.check()?;
        Ok(bundle)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.model_label = label.into();
        self
    }

    pub fn horizon(&self) -> usize {
        self.points.len()
    }

    /// Attaches the window and step alignment this bundle was produced for.
    pub fn aligned(mut self, window: SeasonWindow, alignment: Vec<usize>) -> Result<Self> {
        if alignment.len() != self.points.len() {
            return Err(Error::InvalidArgument(format!(
                "alignment has {} steps but bundle has {} forecasts",
                alignment.len(),
                self.points.len()
            )));
        }
        if alignment.windows(2).any(|w| w[0] >= w[1]) || alignment.first() == Some(&0) {
            return Err(Error::InvalidArgument(
                "alignment must be strictly increasing and 1-based".into(),
            ));
        }
        self.source_window = Some(window);
        self.alignment = Some(alignment);
        Ok(self)
    }

    pub(crate) fn check(&self) -> Result<()> {
        let h = self.points.len();
        if self.lower.len() != h || self.upper.len() != h {
            return Err(Error::InvalidArgument(
                "points, lower and upper must have equal length".into(),
            ));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "coverage level {} not in (0, 1)",
                self.level
            )));
        }
        if let Some(i) = (0..h).find(|&i| self.lower[i] > self.upper[i]) {
            return Err(Error::InvalidArgument(format!(
                "lower bound exceeds upper bound at step {}",
                i + 1
            )));
        }
        Ok(())
    }
}
