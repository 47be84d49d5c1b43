use thiserror::Error;

/// Errors raised by the forecasting library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("empty subseries for window starting at season {start} with width {width}")]
    EmptySubseries { start: usize, width: usize },

    #[error("non-positive values are not allowed by the multiplicative form")]
    NonPositiveValues,

    #[error("series shorter than two long cycles ({needed} observations needed, got {got})")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("periods ({short}, {long}) are not nested")]
    NonNestedPeriods { short: usize, long: usize },

    #[error("zero scaled denominator")]
    ZeroScaledDenominator,

    #[error("zero train mean")]
    ZeroTrainMean,

    #[error("no coverage at horizon step {0}")]
    NoCoverage(usize),

    #[error("invalid series {id}: {reasons}")]
    InvalidSeries { id: String, reasons: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("model fitting failed: {0}")]
    Fit(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
