//! Seeded synthetic data shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use subseasonal::harness::{Dataset, DatasetSeries};
use subseasonal::{FrequencyClass, SeasonalSeries};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Trend plus additive seasonal pattern plus Gaussian noise, split into
/// `cycles` seasons of training data and `h` test points.
pub struct SeasonalGenerator {
    pub m: usize,
    pub cycles: usize,
    pub h: usize,
    pub slope: (f64, f64),
    /// Seasonal amplitude relative to the noise standard deviation.
    pub amplitude: (f64, f64),
    pub noise: f64,
}

impl SeasonalGenerator {
    pub fn series(&self, id: &str, rng: &mut ChaCha8Rng) -> DatasetSeries {
        let n = self.m * self.cycles + self.h;
        let slope = rng.random_range(self.slope.0..=self.slope.1);
        let amp = self.noise * rng.random_range(self.amplitude.0..=self.amplitude.1);
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let noise = Normal::new(0.0, self.noise).unwrap();
        let values: Vec<f64> = (0..n)
            .map(|t| {
                let angle = std::f64::consts::TAU * (t % self.m) as f64 / self.m as f64 + phase;
                100.0 + slope * t as f64 + amp * angle.sin() + noise.sample(rng)
            })
            .collect();
        let split = self.m * self.cycles;
        DatasetSeries {
            series: SeasonalSeries::new(id, values[..split].to_vec(), self.m, 1).unwrap(),
            test: values[split..].to_vec(),
            horizon: self.h,
        }
    }

    pub fn dataset(&self, count: usize, seed: u64, class: FrequencyClass) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Dataset {
            frequency_class: class,
            series: (0..count)
                .map(|i| self.series(&format!("S{i:04}"), &mut rng))
                .collect(),
            skipped: Vec::new(),
        }
    }
}

pub fn quarterly(count: usize, seed: u64) -> Dataset {
    SeasonalGenerator {
        m: 4,
        cycles: 6,
        h: 8,
        slope: (-0.5, 1.5),
        amplitude: (0.0, 4.0),
        noise: 2.0,
    }
    .dataset(count, seed, FrequencyClass::Quarterly)
}

pub fn monthly(count: usize, seed: u64) -> Dataset {
    SeasonalGenerator {
        m: 12,
        cycles: 4,
        h: 18,
        slope: (-0.3, 0.8),
        amplitude: (0.0, 4.0),
        noise: 2.0,
    }
    .dataset(count, seed, FrequencyClass::Monthly)
}

/// Non-seasonal series (frequency 1) with a random-walk level.
pub fn yearly(count: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let series = (0..count)
        .map(|i| {
            let mut level = 50.0;
            let values: Vec<f64> = (0..30)
                .map(|_| {
                    level += 0.4 + noise.sample(&mut rng);
                    level
                })
                .collect();
            DatasetSeries {
                series: SeasonalSeries::new(format!("Y{i:03}"), values[..24].to_vec(), 1, 1)
                    .unwrap(),
                test: values[24..].to_vec(),
                horizon: 6,
            }
        })
        .collect();
    Dataset {
        frequency_class: FrequencyClass::Quarterly,
        series,
        skipped: Vec::new(),
    }
}
