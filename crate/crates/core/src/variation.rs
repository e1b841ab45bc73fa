//! Intra-day pressure variation and its aggregation against admissions.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const READINGS_PER_DAY: usize = 48;

/// One calendar day of semi-hourly pressure readings (mbar).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyProfile {
    date: NaiveDate,
    readings: Vec<f64>,
}

impl DailyProfile {
    pub fn new(date: NaiveDate, readings: Vec<f64>) -> Result<DailyProfile> {
        if readings.len() != READINGS_PER_DAY {
            return Err(Error::IncompleteDay {
                date,
                readings: readings.len(),
            });
        }
        if let Some(bad) = readings.iter().find(|r| !r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{date}: non-finite reading {bad}"
            )));
        }
        Ok(DailyProfile { date, readings })
    }

    /// A flat day at `value` mbar.
    pub fn constant(date: NaiveDate, value: f64) -> DailyProfile {
        DailyProfile {
            date,
            readings: vec![value; READINGS_PER_DAY],
        }
    }

    pub fn date(&self) -> NaiveDate {
        self.date
    }

    pub fn readings(&self) -> &[f64] {
        &self.readings
    }

    pub fn mean(&self) -> f64 {
        self.readings.iter().sum::<f64>() / READINGS_PER_DAY as f64
    }
}

/// Sum of absolute consecutive differences across the day's readings.
pub fn daily_delta(profile: &DailyProfile) -> f64 {
    profile
        .readings
        .windows(2)
        .map(|p| (p[1] - p[0]).abs())
        .sum()
}

/// Daily deltas for contiguous profiles, as a dated daily series.
pub fn delta_series(profiles: &[DailyProfile]) -> Result<TimeSeries> {
    let first = profiles.first().ok_or_else(|| Error::EmptySeries {
        label: "daily_delta".into(),
    })?;
    for (i, p) in profiles.iter().enumerate() {
        let expected = first.date + chrono::Days::new(i as u64);
        if p.date != expected {
            return Err(Error::Misaligned(format!(
                "profile {i} is dated {}, expected {expected}",
                p.date
            )));
        }
    }
    Ok(TimeSeries::daily(
        "daily_delta",
        first.date,
        profiles.iter().map(daily_delta).collect(),
    ))
}

/// Mean window variation grouped by the admission count on the window's
/// last day.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountGroup {
    pub count: u32,
    pub windows: usize,
    pub mean_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationReport {
    pub interval_length: usize,
    pub groups: Vec<CountGroup>,
    pub windows: usize,
    pub overall_mean: f64,
    /// Mean over windows ending on a day with two or more admissions.
    pub mean_ge2: Option<f64>,
    /// `100 * (mean_ge2 / overall_mean - 1)`, absent when undefined.
    pub pct_increase_ge2: Option<f64>,
}

impl VariationReport {
    pub fn per_count_means(&self) -> BTreeMap<u32, f64> {
        self.groups
            .iter()
            .map(|g| (g.count, g.mean_variation))
            .collect()
    }

    /// The headline percentage, or [`Error::NoQualifyingDays`].
    pub fn require_pct_increase(&self) -> Result<f64> {
        self.pct_increase_ge2.ok_or(Error::NoQualifyingDays)
    }
}

fn admission_count(value: f64, day: usize) -> Result<u32> {
    if value < 0.0 || value.fract() != 0.0 || value > f64::from(u32::MAX) {
        return Err(Error::InvalidParameter(format!(
            "admission count {value} on day {day} is not a non-negative integer"
        )));
    }
    Ok(value as u32)
}

/// Windows of `length` days ending on each day `t`: the day itself plus the
/// `length - 1` preceding ones. Days whose window would start before the
/// sample are dropped.
pub fn window_variation_report(
    deltas: &TimeSeries,
    hosp: &TimeSeries,
    length: usize,
) -> Result<VariationReport> {
    if length == 0 {
        return Err(Error::InvalidParameter("interval length must be positive".into()));
    }
    if deltas.len() != hosp.len() {
        return Err(Error::LengthMismatch {
            left: deltas.len(),
            right: hosp.len(),
        });
    }
    if deltas.start() != hosp.start() || deltas.step() != hosp.step() {
        return Err(Error::Misaligned(format!(
            "`{}` and `{}` cover different dates",
            deltas.label(),
            hosp.label()
        )));
    }
    let window_means = deltas.mobile_mean(length, None)?;

    let mut groups: BTreeMap<u32, (usize, f64)> = BTreeMap::new();
    let mut total = 0.0;
    for (i, &m) in window_means.values().iter().enumerate() {
        let day = i + length - 1;
        let count = admission_count(hosp.values()[day], day)?;
        let entry = groups.entry(count).or_insert((0, 0.0));
        entry.0 += 1;
        entry.1 += m;
        total += m;
    }
    let windows = window_means.len();
    let overall_mean = total / windows as f64;

    let (n_ge2, sum_ge2) = groups
        .range(2..)
        .fold((0usize, 0.0), |(n, s), (_, &(gn, gs))| (n + gn, s + gs));
    let mean_ge2 = (n_ge2 > 0).then(|| sum_ge2 / n_ge2 as f64);
    let pct_increase_ge2 = mean_ge2
        .filter(|_| overall_mean != 0.0)
        .map(|m| 100.0 * (m / overall_mean - 1.0));

    Ok(VariationReport {
        interval_length: length,
        groups: groups
            .into_iter()
            .map(|(count, (n, s))| CountGroup {
                count,
                windows: n,
                mean_variation: s / n as f64,
            })
            .collect(),
        windows,
        overall_mean,
        mean_ge2,
        pct_increase_ge2,
    })
}
