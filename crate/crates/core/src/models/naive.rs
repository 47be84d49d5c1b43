use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::series::ForecastBundle;

/// Seasonal naïve forecast: each step repeats the last observation of its season.
///
/// Intervals are Gaussian with the root-mean-square in-sample seasonal
/// difference as scale, widened by `sqrt(ceil(t / period))` at step `t`.
pub fn seasonal_naive(
    train: &[f64],
    period: usize,
    h: usize,
    level: f64,
) -> Result<ForecastBundle> {
    if period == 0 {
        return Err(Error::InvalidArgument("period must be positive".into()));
    }
    if train.len() < period || train.is_empty() {
        return Err(Error::InsufficientData {
            needed: period.max(1),
            got: train.len(),
        });
    }
    super::check_forecast_args(h, level, 1)?;

    let n = train.len();
    let last_cycle = &train[n - period..];
    let points: Vec<f64> = (0..h).map(|k| last_cycle[k % period]).collect();

    let diffs: Vec<f64> = (period..n).map(|t| train[t] - train[t - period]).collect();
    let sigma = if diffs.is_empty() {
        0.0
    } else {
        (diffs.iter().map(|d| d * d).sum::<f64>() / diffs.len() as f64).sqrt()
    };
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - level) / 2.0);
    let (lower, upper) = points
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let half = z * sigma * (((k + period) / period) as f64).sqrt();
            (p - half, p + half)
        })
        .unzip();
    Ok(ForecastBundle::new(points, lower, upper, level)?.with_label(format!("SNaive[{period}]")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copies_last_cycle() {
        let f = seasonal_naive(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0], 4, 4, 0.95).unwrap();
        assert_eq!(f.points, vec![5.0, 6.0, 7.0, 8.0]);
    }

    #[test]
    fn period_one_is_naive() {
        let f = seasonal_naive(&[3.0, 1.0, 9.0], 1, 3, 0.95).unwrap();
        assert_eq!(f.points, vec![9.0; 3]);
    }

    #[test]
    fn tiles_cycles() {
        let f = seasonal_naive(&[10.0, 20.0, 10.0, 20.0], 2, 5, 0.95).unwrap();
        assert_eq!(f.points, vec![10.0, 20.0, 10.0, 20.0, 10.0]);
        // perfectly periodic history gives zero-width intervals
        assert_eq!(f.lower, f.points);
    }

    #[test]
    fn rejects_short_training() {
        assert!(matches!(
            seasonal_naive(&[1.0, 2.0], 4, 2, 0.9),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn intervals_widen_per_cycle() {
        let train = [1.0, 2.0, 2.0, 4.0, 3.0, 5.0];
        let f = seasonal_naive(&train, 2, 5, 0.95).unwrap();
        // diffs: 1, 2, 1, 1 -> rms sqrt(7/4)
        let sigma = (7.0f64 / 4.0).sqrt();
        let z = 1.959963984540054;
        let widths: Vec<f64> = (0..5).map(|k| f.upper[k] - f.points[k]).collect();
        assert!((widths[0] - z * sigma).abs() < 1e-9);
        assert!((widths[1] - z * sigma).abs() < 1e-9);
        assert!((widths[2] - z * sigma * 2f64.sqrt()).abs() < 1e-9);
        assert!((widths[4] - z * sigma * 3f64.sqrt()).abs() < 1e-9);
    }
}
