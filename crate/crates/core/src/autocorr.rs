//! Correlograms.
//!
//! For a series `Y_1..Y_T` and maximum lag `K`,
//!
//! ```text
//! r_k = sum_{t=K+1..T} (Y_t - mean)(Y_{t-k} - mean) / sum_{t=K+1..T} (Y_t - mean)^2
//! ```
//!
//! The mean is taken over the whole series and every lag sums over the same
//! range `t = K+1..T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const DEFAULT_MAX_LAG: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correlogram {
    pub max_lag: usize,
    /// `(k, r_k)` for `k = 0..=max_lag`.
    pub coefficients: Vec<(usize, f64)>,
}

impl Correlogram {
    pub fn get(&self, lag: usize) -> Option<f64> {
        self.coefficients.get(lag).map(|&(_, r)| r)
    }
}

pub fn correlogram(s: &TimeSeries, max_lag: usize) -> Result<Correlogram> {
    s.require_len(max_lag + 2)?;
    let y = s.values();
    let mean = s.mean().unwrap();
    let dev: Vec<f64> = y.iter().map(|v| v - mean).collect();

    let lagged_sum = |k: usize| -> f64 {
        (max_lag..dev.len()).map(|t| dev[t] * dev[t - k]).sum()
    };
    let denom = lagged_sum(0);
    if denom == 0.0 {
        return Err(Error::ConstantSeries {
            label: s.label().to_string(),
        });
    }
    let coefficients = (0..=max_lag)
        .map(|k| {
            let r = if k == 0 { 1.0 } else { lagged_sum(k) / denom };
            (k, r)
        })
        .collect();
    Ok(Correlogram {
        max_lag,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lag_zero_is_one() {
        let s = TimeSeries::new("s", (0..30).map(|i| ((i * 37) % 11) as f64).collect());
        let c = correlogram(&s, 10).unwrap();
        assert_eq!(c.get(0), Some(1.0));
        assert_eq!(c.coefficients.len(), 11);
        assert!(c.coefficients.iter().enumerate().all(|(i, &(k, _))| i == k));
    }

    #[test]
    fn constant_series_rejected() {
        let s = TimeSeries::new("flat", vec![3.0; 20]);
        assert!(matches!(correlogram(&s, 10), Err(Error::ConstantSeries { .. })));
    }

    #[test]
    fn too_short_rejected() {
        let s = TimeSeries::new("s", vec![1.0, 2.0, 3.0]);
        assert!(matches!(correlogram(&s, 2), Err(Error::SeriesTooShort { .. })));
        assert!(correlogram(&s, 1).is_ok());
    }

    #[test]
    fn trending_series_decays() {
        // fixed small wobble on a straight line
        let s = TimeSeries::new(
            "trend",
            (0..200)
                .map(|t| t as f64 + 0.3 * ((t * 7919) % 13) as f64 / 13.0)
                .collect(),
        );
        let c = correlogram(&s, 10).unwrap();
        for w in c.coefficients.windows(2) {
            assert!(w[1].1 < w[0].1, "{:?}", c.coefficients);
        }
    }

    #[test]
    fn coefficients_bounded() {
        let s = TimeSeries::new("saw", (0..50).map(|t| (t % 7) as f64).collect());
        let c = correlogram(&s, 10).unwrap();
        assert!(c.coefficients.iter().all(|&(_, r)| r.abs() <= 1.0 + 1e-9));
    }
}
