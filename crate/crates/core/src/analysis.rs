//! Multi-step pipelines shared by the command line and the examples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{align_pair, Step, TimeSeries};
use crate::spectral::{dft_magnitude, zero_dc, Spectrum};
use crate::stats::{correlate, CorrelationResult};
use crate::variation::{delta_series, window_variation_report, DailyProfile, VariationReport};

/// Moving-mean windows (days) used for the seasonal comparison grid.
pub const MOBILE_WINDOWS: [usize; 4] = [7, 30, 120, 365];

/// Semi-hourly samples per day.
pub const SEMI_HOURLY_PARTS: u32 = 48;

#[derive(Debug, Clone, Serialize)]
pub struct MobileCorrelation {
    pub window: usize,
    pub result: CorrelationResult,
}

/// Correlates trailing moving means of `x` and `y` for each window length.
pub fn mobile_correlation(
    x: &TimeSeries,
    y: &TimeSeries,
    windows: &[usize],
) -> Result<Vec<MobileCorrelation>> {
    windows
        .iter()
        .map(|&window| {
            let mx = x.mobile_mean(window, None)?;
            let my = y.mobile_mean(window, None)?;
            let (ax, ay) = align_pair(&mx, &my, 0)?;
            Ok(MobileCorrelation {
                window,
                result: correlate(&ax, &ay)?,
            })
        })
        .collect()
}

/// Daily-variation reports for each interval length, over the days where
/// both the profiles and the admissions exist.
pub fn variation_grid(
    profiles: &[DailyProfile],
    hosp: &TimeSeries,
    lengths: &[usize],
) -> Result<Vec<VariationReport>> {
    let deltas = delta_series(profiles)?;
    let (deltas, hosp) = align_pair(&deltas, hosp, 0)?;
    lengths
        .iter()
        .map(|&l| window_variation_report(&deltas, &hosp, l))
        .collect()
}

/// Concatenated semi-hourly readings of contiguous profiles.
pub fn semi_hourly_series(profiles: &[DailyProfile]) -> Result<TimeSeries> {
    // delta_series validates contiguity
    let first = delta_series(profiles)?.start_date().unwrap();
    let values = profiles.iter().flat_map(|p| p.readings().iter().copied()).collect();
    Ok(TimeSeries::daily("pressure_semi_hourly", first, values).with_step(Step::SEMI_HOURLY))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumPair {
    pub pressure: Spectrum,
    pub hospitalizations: Spectrum,
}

/// Spectra of semi-hourly pressure and of admissions expanded to the same
/// semi-hourly grid, optionally with the zero-frequency bin cleared.
pub fn spectrum_pair(
    profiles: &[DailyProfile],
    hosp: &TimeSeries,
    clear_dc: bool,
) -> Result<SpectrumPair> {
    let pressure = semi_hourly_series(profiles)?;
    let expanded = hosp.expand_to_subdaily(SEMI_HOURLY_PARTS)?;
    let (pressure, expanded) = align_pair(&pressure, &expanded, 0)?;
    if pressure.len() % SEMI_HOURLY_PARTS as usize != 0 {
        return Err(Error::Misaligned("partial days in spectrum input".into()));
    }
    let (p, h) = (dft_magnitude(&pressure)?, dft_magnitude(&expanded)?);
    Ok(if clear_dc {
        SpectrumPair {
            pressure: zero_dc(&p),
            hospitalizations: zero_dc(&h),
        }
    } else {
        SpectrumPair {
            pressure: p,
            hospitalizations: h,
        }
    })
}
