//! One-sided magnitude spectra.
//!
//! Transforms run at the exact series length (mixed-radix, or Bluestein for
//! awkward prime factors); nothing is zero-padded.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Cycles per day.
    pub frequencies: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub dc_zeroed: bool,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    /// Bin with the largest magnitude; the earliest wins ties.
    pub fn dominant_bin(&self) -> Option<usize> {
        self.magnitudes
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (i, &m)| match best {
                Some((_, bm)) if bm >= m => best,
                _ => Some((i, m)),
            })
            .map(|(i, _)| i)
    }
}

/// Full two-sided discrete Fourier transform `X_k = sum_t x_t e^{-2 pi i k t / n}`.
pub fn fourier_transform(values: &[f64]) -> Vec<Complex64> {
    let mut buffer: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    if buffer.is_empty() {
        return buffer;
    }
    FftPlanner::new()
        .plan_fft_forward(buffer.len())
        .process(&mut buffer);
    buffer
}

/// Magnitudes of bins `0..=n/2`, with frequencies in cycles per day.
pub fn dft_magnitude(s: &TimeSeries) -> Result<Spectrum> {
    s.require_len(2)?;
    let n = s.len();
    let spectrum = fourier_transform(s.values());
    let bins = n / 2 + 1;
    let span_days = n as f64 / s.step().samples_per_day();
    Ok(Spectrum {
        frequencies: (0..bins).map(|k| k as f64 / span_days).collect(),
        magnitudes: spectrum[..bins].iter().map(|c| c.norm()).collect(),
        dc_zeroed: false,
    })
}

/// Sets the zero-frequency magnitude to 0.
pub fn zero_dc(sp: &Spectrum) -> Spectrum {
    let mut out = sp.clone();
    if let Some(dc) = out.magnitudes.first_mut() {
        *dc = 0.0;
    }
    out.dc_zeroed = true;
    out
}

/// Spectrum of a daily admission series after splitting each day into
/// `parts` equal sub-daily counts.
pub fn expanded_spectrum(daily: &TimeSeries, parts: u32) -> Result<Spectrum> {
    if !daily.step().is_daily() {
        return Err(Error::InvalidParameter(format!(
            "`{}` is not a daily series",
            daily.label()
        )));
    }
    dft_magnitude(&daily.expand_to_subdaily(parts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Step;
    use std::f64::consts::PI;

    #[test]
    fn constant_series_is_all_dc() {
        let s = TimeSeries::new("c", vec![3.0; 40]);
        let sp = dft_magnitude(&s).unwrap();
        assert!((sp.magnitudes[0] - 120.0).abs() < 1e-9);
        assert!(sp.magnitudes[1..].iter().all(|&m| m < 1e-9));
        let z = zero_dc(&sp);
        assert!(z.magnitudes.iter().all(|&m| m < 1e-9));
        assert!(z.dc_zeroed);
    }

    #[test]
    fn impulse_is_flat() {
        let mut v = vec![0.0; 16];
        v[0] = 1.0;
        let sp = dft_magnitude(&TimeSeries::new("i", v)).unwrap();
        assert_eq!(sp.len(), 9);
        assert!(sp.magnitudes.iter().all(|&m| (m - 1.0).abs() < 1e-12));
    }

    #[test]
    fn sinusoid_lands_in_its_bin() {
        let n = 256;
        let v = (0..n).map(|t| (2.0 * PI * 5.0 * t as f64 / n as f64).sin()).collect();
        let sp = dft_magnitude(&TimeSeries::new("sin", v)).unwrap();
        assert_eq!(sp.dominant_bin(), Some(5));
        let peak = sp.magnitudes[5];
        for (k, &m) in sp.magnitudes.iter().enumerate() {
            if k != 5 {
                assert!(m < 1e-6 * peak, "bin {k}: {m}");
            }
        }
    }

    #[test]
    fn zero_dc_touches_only_bin_zero() {
        let sp = Spectrum {
            frequencies: vec![0.0, 1.0, 2.0],
            magnitudes: vec![1e6, 2.5, 0.125],
            dc_zeroed: false,
        };
        let z = zero_dc(&sp);
        assert_eq!(z.magnitudes, vec![0.0, 2.5, 0.125]);
        assert_eq!(z.frequencies, sp.frequencies);
        let again = zero_dc(&z);
        assert_eq!(again, z);
    }

    #[test]
    fn frequency_axis_in_cycles_per_day() {
        let daily = TimeSeries::new("d", vec![1.0; 10]);
        let sp = dft_magnitude(&daily).unwrap();
        assert!((sp.frequencies[1] - 0.1).abs() < 1e-15);
        let semi = TimeSeries::new("s", vec![1.0; 96]).with_step(Step::SEMI_HOURLY);
        let sp = dft_magnitude(&semi).unwrap();
        assert!((sp.frequencies[1] - 0.5).abs() < 1e-15);
        assert!((sp.frequencies[48] - 24.0).abs() < 1e-12);
        assert!(sp.frequencies.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn too_short() {
        assert!(dft_magnitude(&TimeSeries::new("x", vec![1.0])).is_err());
    }

    #[test]
    fn expanded_admissions_keep_the_daily_grid() {
        let daily = TimeSeries::new("h", vec![0.0, 2.0, 1.0, 3.0]);
        let sp = expanded_spectrum(&daily, 48).unwrap();
        assert_eq!(sp.len(), 4 * 48 / 2 + 1);
        assert!((sp.magnitudes[0] - 6.0).abs() < 1e-12);
        assert!((sp.frequencies[1] - 0.25).abs() < 1e-15);
    }
}
