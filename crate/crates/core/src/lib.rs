//! Forecasting with sub-seasonal series.
//!
//! A seasonal series of frequency `m` is cut into every contiguous window of
//! seasons that meets the forecast horizon. Each window's subseries is
//! forecast on its own, and the aligned forecasts are pooled with the
//! original series repeated `m` times.
//!
//! ```
//! use subseasonal::count_subseries;
//! assert_eq!(count_subseries(4, 8).unwrap(), 13);
//! ```

pub mod combine;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod models;
pub mod optim;
pub mod series;
pub mod subsample;

pub use combine::{
    combine, combine_levels_report, CombineMode, CombinedForecast, LevelReport, WeightedBundle,
};
pub use error::{Error, Result};
pub use metrics::{
    amse, dm_test, horizon_buckets, mase, msis, DmLoss, DmResult, DmVerdict, FrequencyClass,
    HorizonRange, MetricInput,
};
pub use models::{Components, ForecastOutput, ForecastRequest, Forecaster};
pub use series::{ForecastBundle, MultiSeasonalSeries, SeasonalSeries};
pub use subsample::{
    count_subseries, enumerate_load_plan, enumerate_plan, extract, SeasonWindow, SubseriesPlan,
};
