//! Sub-seasonal window enumeration and extraction.
//!
//! A window is a block of `width` adjacent seasons, possibly wrapping past the
//! last season (seasons `{m, 1}` form the window starting at `m` with width 2).
//! The subseries of a window keeps only the observations whose season lies in
//! it, in their original order, and has frequency `width`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{season_of, MultiSeasonalSeries, SeasonalSeries};

/// A contiguous, possibly wrapping, block of seasons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeasonWindow {
    pub start_season: usize,
    pub width: usize,
    pub m: usize,
}

impl SeasonWindow {
    /// Builds a window in canonical form; a full-width window always starts at season 1.
    pub fn new(start_season: usize, width: usize, m: usize) -> Result<Self> {
        if m == 0 || width == 0 || width > m || start_season == 0 || start_season > m {
            return Err(Error::InvalidArgument(format!(
                "window (start {start_season}, width {width}) invalid for frequency {m}"
            )));
        }
        let start_season = if width == m { 1 } else { start_season };
        Ok(Self {
            start_season,
            width,
            m,
        })
    }

    pub fn full(m: usize) -> Self {
        Self {
            start_season: 1,
            width: m.max(1),
            m: m.max(1),
        }
    }

    pub fn is_full(&self) -> bool {
        self.width == self.m
    }

    pub fn contains(&self, season: usize) -> bool {
        (season + self.m - self.start_season) % self.m < self.width
    }

    /// Covered seasons in window order, starting at `start_season`.
    pub fn seasons(&self) -> Vec<usize> {
        (0..self.width)
            .map(|j| (self.start_season - 1 + j) % self.m + 1)
            .collect()
    }

    /// 1-based position of `season` inside the window, if covered.
    pub fn position_of(&self, season: usize) -> Option<usize> {
        let offset = (season + self.m - self.start_season) % self.m;
        (offset < self.width).then_some(offset + 1)
    }
}

/// A window together with the number of identical copies it contributes to the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedWindow {
    pub window: SeasonWindow,
    pub multiplicity: usize,
}

/// Every window that has to be forecast for one series and horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubseriesPlan {
    pub windows: Vec<PlannedWindow>,
    pub expected_count: usize,
    /// Sorted distinct seasons among the future steps `1..=h`.
    pub horizon_seasons: Vec<usize>,
    pub horizon: usize,
}

/// A window's training subseries plus the map from its forecast steps to
/// original horizon steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedSubseries {
    pub window: SeasonWindow,
    pub sub_values: Vec<f64>,
    pub sub_frequency: usize,
    /// Position inside the window of the first retained observation (1-based).
    pub sub_phase: usize,
    pub sub_horizon: usize,
    pub alignment: Vec<usize>,
}

/// Number of distinct subseries to forecast for frequency `m` and horizon `h`.
pub fn count_subseries(m: usize, h: usize) -> Result<usize> {
    if m == 0 || h == 0 {
        return Err(Error::InvalidArgument(format!(
            "frequency and horizon must be positive (m = {m}, h = {h})"
        )));
    }
    Ok(if h < m {
        (m - h) * (m + h - 1) / 2 + (h - 1) * m + 1
    } else {
        m * (m - 1) + 1
    })
}

fn horizon_seasons(frequency: usize, start_phase: usize, len: usize, h: usize) -> Vec<usize> {
    let mut seasons: Vec<usize> = (1..=h)
        .map(|t| season_of(frequency, start_phase, len + t))
        .collect();
    seasons.sort_unstable();
    seasons.dedup();
    seasons
}

/// Lists the windows, by increasing width then start season, whose seasons
/// meet the horizon; the full window comes last with multiplicity `m`.
pub fn enumerate_plan(series: &SeasonalSeries, h: usize) -> Result<SubseriesPlan> {
    series.check()?;
    plan_for(series.frequency, series.start_phase, series.len(), h)
}

pub(crate) fn plan_for(
    m: usize,
    start_phase: usize,
    len: usize,
    h: usize,
) -> Result<SubseriesPlan> {
    let expected_count = count_subseries(m, h)?;
    let targets = horizon_seasons(m, start_phase, len, h);
    let mut windows = Vec::with_capacity(expected_count);
    for width in 1..m {
        for start in 1..=m {
            let window = SeasonWindow::new(start, width, m)?;
            if targets.iter().any(|&s| window.contains(s)) {
                windows.push(PlannedWindow {
                    window,
                    multiplicity: 1,
                });
            }
        }
    }
    windows.push(PlannedWindow {
        window: SeasonWindow::full(m),
        multiplicity: m,
    });
    debug_assert_eq!(windows.len(), expected_count);
    Ok(SubseriesPlan {
        windows,
        expected_count,
        horizon_seasons: targets,
        horizon: h,
    })
}

/// Cuts the subseries of `window` out of `series` and aligns it to steps `1..=h`.
pub fn extract(
    series: &SeasonalSeries,
    window: SeasonWindow,
    h: usize,
) -> Result<AlignedSubseries> {
    if window.m != series.frequency {
        return Err(Error::InvalidArgument(format!(
            "window frequency {} does not match series frequency {}",
            window.m, series.frequency
        )));
    }
    extract_values(&series.values, series.start_phase, window, h)
}

pub(crate) fn extract_values(
    values: &[f64],
    start_phase: usize,
    window: SeasonWindow,
    h: usize,
) -> Result<AlignedSubseries> {
    let m = window.m;
    let mut sub_values = Vec::with_capacity(values.len() * window.width / m + 1);
    let mut sub_phase = None;
    for (i, &v) in values.iter().enumerate() {
        let season = season_of(m, start_phase, i + 1);
        if let Some(pos) = window.position_of(season) {
            sub_phase.get_or_insert(pos);
            sub_values.push(v);
        }
    }
    let Some(sub_phase) = sub_phase else {
        return Err(Error::EmptySubseries {
            start: window.start_season,
            width: window.width,
        });
    };
    let alignment: Vec<usize> = (1..=h)
        .filter(|&t| window.contains(season_of(m, start_phase, values.len() + t)))
        .collect();
    if alignment.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "window (start {}, width {}) covers no horizon step",
            window.start_season, window.width
        )));
    }
    Ok(AlignedSubseries {
        window,
        sub_frequency: window.width,
        sub_phase,
        sub_horizon: alignment.len(),
        sub_values,
        alignment,
    })
}

/// Seasonal structure assigned to a load subseries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoadSeasonality {
    /// One period (day-of-week for single-hour subseries).
    Single(usize),
    /// Nested `(short, long)` periods.
    Double(usize, usize),
}

/// One window of the double-seasonal plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadWindow {
    pub window: SeasonWindow,
    pub multiplicity: usize,
    pub seasonality: LoadSeasonality,
}

/// Windows over the short-cycle seasons of a double-seasonal series.
///
/// `series` holds the training data up to the forecast origin. A width-1
/// subseries keeps one observation per short cycle and gets the single period
/// `s2 / s1`; width `w ≥ 2` gets the periods `(w, w·s2/s1)`.
pub fn enumerate_load_plan(series: &MultiSeasonalSeries, h: usize) -> Result<Vec<LoadWindow>> {
    load_plan_for(series.periods, series.short_phase(), series.values.len(), h)
}

pub(crate) fn load_plan_for(
    periods: (usize, usize),
    short_phase: usize,
    len: usize,
    h: usize,
) -> Result<Vec<LoadWindow>> {
    let (s1, s2) = periods;
    if s1 < 2 || s2 % s1 != 0 {
        return Err(Error::NonNestedPeriods {
            short: s1,
            long: s2,
        });
    }
    if h == 0 || h > s1 {
        return Err(Error::InvalidArgument(format!(
            "load horizon {h} must lie in 1..={s1}"
        )));
    }
    let cycles = s2 / s1;
    let plan = plan_for(s1, short_phase, len, h)?;
    Ok(plan
        .windows
        .into_iter()
        .map(|pw| {
            let w = pw.window.width;
            let seasonality = if w == 1 {
                LoadSeasonality::Single(cycles)
            } else {
                LoadSeasonality::Double(w, w * cycles)
            };
            LoadWindow {
                window: pw.window,
                multiplicity: pw.multiplicity,
                seasonality,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn quarterly(len: usize, phase: usize) -> SeasonalSeries {
        SeasonalSeries::new("q", (1..=len).map(|v| v as f64).collect(), 4, phase).unwrap()
    }

    /// Counts windows by explicit set intersection over every (start, width).
    fn brute_force_count(m: usize, h: usize) -> usize {
        let targets: BTreeSet<usize> = (0..h).map(|t| t % m).collect();
        let mut distinct = BTreeSet::new();
        for width in 1..=m {
            for start in 0..m {
                let set: BTreeSet<usize> = (0..width).map(|j| (start + j) % m).collect();
                if !set.is_disjoint(&targets) {
                    distinct.insert(set);
                }
            }
        }
        distinct.len()
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_subseries(4, 8).unwrap(), 13);
        assert_eq!(count_subseries(1, 5).unwrap(), 1);
        assert_eq!(count_subseries(12, 1).unwrap(), 67);
        assert!(count_subseries(0, 3).is_err());
        assert!(count_subseries(4, 0).is_err());
    }

    #[test]
    fn count_matches_brute_force() {
        for m in 1..=24 {
            for h in 1..=2 * m {
                assert_eq!(
                    count_subseries(m, h).unwrap(),
                    brute_force_count(m, h),
                    "m={m} h={h}"
                );
            }
        }
    }

    #[test]
    fn quarterly_full_plan() {
        let plan = enumerate_plan(&quarterly(12, 1), 8).unwrap();
        assert_eq!(plan.windows.len(), 13);
        for width in 1..=3 {
            assert_eq!(
                plan.windows
                    .iter()
                    .filter(|w| w.window.width == width)
                    .count(),
                4
            );
        }
        let last = plan.windows.last().unwrap();
        assert_eq!((last.window.width, last.multiplicity), (4, 4));
    }

    #[test]
    fn one_step_plan_covers_next_season_only() {
        let plan = enumerate_plan(&quarterly(12, 1), 1).unwrap();
        assert_eq!(plan.horizon_seasons, vec![1]);
        assert_eq!(plan.windows.len(), 7);
        assert!(plan.windows.iter().all(|w| w.window.contains(1)));
    }

    #[test]
    fn smallest_seasonal_case() {
        let s = SeasonalSeries::new("b", vec![1.0; 6], 2, 1).unwrap();
        let plan = enumerate_plan(&s, 4).unwrap();
        let got: Vec<_> = plan
            .windows
            .iter()
            .map(|w| (w.window.seasons(), w.multiplicity))
            .collect();
        assert_eq!(got, vec![(vec![1], 1), (vec![2], 1), (vec![1, 2], 2)]);
    }

    #[test]
    fn extract_single_quarter() {
        let s = quarterly(12, 1);
        let sub = extract(&s, SeasonWindow::new(1, 1, 4).unwrap(), 8).unwrap();
        assert_eq!(sub.sub_values, vec![1.0, 5.0, 9.0]);
        assert_eq!(sub.alignment, vec![1, 5]);
        assert_eq!(sub.sub_horizon, 2);
        assert_eq!(sub.sub_frequency, 1);
    }

    #[test]
    fn extract_wrapping_window() {
        let s = quarterly(12, 1);
        let sub = extract(&s, SeasonWindow::new(4, 2, 4).unwrap(), 8).unwrap();
        assert_eq!(sub.sub_values, vec![1.0, 4.0, 5.0, 8.0, 9.0, 12.0]);
        assert_eq!(sub.alignment, vec![1, 4, 5, 8]);
        // first retained observation is Q1, the second season of {Q4, Q1}
        assert_eq!(sub.sub_phase, 2);
    }

    #[test]
    fn extract_full_window_is_identity() {
        let s = quarterly(10, 3);
        let sub = extract(&s, SeasonWindow::full(4), 6).unwrap();
        assert_eq!(sub.sub_values, s.values);
        assert_eq!(sub.alignment, (1..=6).collect::<Vec<_>>());
        assert_eq!(sub.sub_phase, 3);
    }

    #[test]
    fn extract_rejects_empty_subseries() {
        let s = quarterly(2, 1);
        let err = extract(&s, SeasonWindow::new(3, 1, 4).unwrap(), 4).unwrap_err();
        assert!(matches!(err, Error::EmptySubseries { start: 3, width: 1 }));
    }

    #[test]
    fn width_one_subseries_partition_and_interleave() {
        let s = SeasonalSeries::new("p", (0..23).map(|v| v as f64 * 1.5).collect(), 5, 4).unwrap();
        let subs: Vec<_> = (1..=5)
            .map(|st| extract(&s, SeasonWindow::new(st, 1, 5).unwrap(), 5).unwrap())
            .collect();
        assert_eq!(
            subs.iter().map(|x| x.sub_values.len()).sum::<usize>(),
            s.len()
        );
        let mut cursors = [0usize; 5];
        let rebuilt: Vec<f64> = (1..=s.len())
            .map(|t| {
                let k = s.season_of(t) - 1;
                cursors[k] += 1;
                subs[k].sub_values[cursors[k] - 1]
            })
            .collect();
        assert_eq!(rebuilt, s.values);
    }

    #[test]
    fn load_plan_tags_periods() {
        let load = MultiSeasonalSeries::new("l", vec![1.0; 336], (24, 168), 1).unwrap();
        let plan = enumerate_load_plan(&load, 24).unwrap();
        assert_eq!(plan.len(), 553);
        assert!(plan
            .iter()
            .filter(|w| w.window.width == 1)
            .all(|w| w.seasonality == LoadSeasonality::Single(7)));
        assert!(plan
            .iter()
            .filter(|w| w.window.width == 2)
            .all(|w| w.seasonality == LoadSeasonality::Double(2, 14)));
        let last = plan.last().unwrap();
        assert_eq!(last.seasonality, LoadSeasonality::Double(24, 168));
        assert_eq!(last.multiplicity, 24);
    }

    #[test]
    fn small_load_plan() {
        let load = MultiSeasonalSeries::new("l", vec![1.0; 28], (2, 14), 1).unwrap();
        let plan = enumerate_load_plan(&load, 2).unwrap();
        let tags: Vec<_> = plan
            .iter()
            .map(|w| (w.seasonality, w.multiplicity))
            .collect();
        assert_eq!(
            tags,
            vec![
                (LoadSeasonality::Single(7), 1),
                (LoadSeasonality::Single(7), 1),
                (LoadSeasonality::Double(2, 14), 2)
            ]
        );
        assert!(load_plan_for((24, 100), 1, 10, 24).is_err());
    }

    proptest! {
        #[test]
        fn coverage_identity(m in 2usize..=24, extra in 0usize..24, phase_seed in 0usize..24, len in 1usize..60) {
            let h = m + extra;
            let phase = phase_seed % m + 1;
            let plan = plan_for(m, phase, len, h).unwrap();
            for t in 1..=h {
                let season = season_of(m, phase, len + t);
                for k in 1..m {
                    let covering = plan.windows.iter()
                        .filter(|w| w.window.width == k && w.window.contains(season))
                        .count();
                    prop_assert_eq!(covering, k);
                }
                let instances: usize = plan.windows.iter()
                    .filter(|w| w.window.contains(season))
                    .map(|w| w.multiplicity)
                    .sum();
                prop_assert_eq!(instances, m * (m + 1) / 2);
            }
        }

        #[test]
        fn full_window_reextraction_is_idempotent(m in 1usize..8, len in 1usize..40, phase_seed in 0usize..8) {
            let phase = phase_seed % m + 1;
            let s = SeasonalSeries::new("i", (0..len).map(|v| v as f64).collect(), m, phase).unwrap();
            let once = extract(&s, SeasonWindow::full(m), m).unwrap();
            let again = extract_values(&once.sub_values, phase, SeasonWindow::full(m), m).unwrap();
            prop_assert_eq!(once, again);
        }
    }
}
