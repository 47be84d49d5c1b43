//! Deterministic inputs for the benchmarks.

/// Trend plus a smooth seasonal cycle plus a bounded pseudo-random wiggle.
pub fn seasonal_series(len: usize, m: usize) -> Vec<f64> {
    (0..len)
        .map(|t| {
            let angle = std::f64::consts::TAU * (t % m) as f64 / m as f64;
            100.0 + 0.4 * t as f64 + 8.0 * angle.sin() + ((t * 7919) % 13) as f64 * 0.3
        })
        .collect()
}

/// Positive hourly demand with daily and weekly cycles.
pub fn load_series(len: usize) -> Vec<f64> {
    (0..len)
        .map(|t| {
            let day = 1.0 + 0.25 * (std::f64::consts::TAU * (t % 24) as f64 / 24.0).sin();
            let week = if (t / 24) % 7 >= 5 { 0.85 } else { 1.0 };
            1000.0 * day * week + ((t * 7919) % 17) as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_positive() {
        assert!(load_series(500).iter().all(|&v| v > 0.0));
        assert_eq!(seasonal_series(48, 12).len(), 48);
    }
}
