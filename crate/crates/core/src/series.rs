//! The [`TimeSeries`] carrier and the transformations every analysis is
//! built from.
//!
//! Transformations that consume a window of points (variation, moving mean)
//! are *trailing*: output value `t` is dated at the last point of its
//! window, so derived series stay aligned with the day they describe.

use std::fmt;

use chrono::{NaiveDate, NaiveDateTime, TimeDelta};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MINUTES_PER_DAY: u32 = 1440;

/// Sampling interval, stored in whole minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step(u32);

impl Step {
    pub const DAILY: Step = Step(MINUTES_PER_DAY);
    pub const SEMI_HOURLY: Step = Step(30);

    /// A step of `minutes`; must divide a day evenly.
    pub fn from_minutes(minutes: u32) -> Result<Step> {
        if minutes == 0 || !MINUTES_PER_DAY.is_multiple_of(minutes) {
            return Err(Error::InvalidParameter(format!(
                "step of {minutes} minutes does not divide a day"
            )));
        }
        Ok(Step(minutes))
    }

    pub fn minutes(self) -> u32 {
        self.0
    }

    pub fn samples_per_day(self) -> f64 {
        f64::from(MINUTES_PER_DAY) / f64::from(self.0)
    }

    pub fn is_daily(self) -> bool {
        self.0 == MINUTES_PER_DAY
    }

    fn delta(self, count: i64) -> TimeDelta {
        TimeDelta::minutes(i64::from(self.0) * count)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_daily() {
            write!(f, "1d")
        } else {
            write!(f, "{}min", self.0)
        }
    }
}

/// Target interval `[a, b]` for min-max normalisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    a: f64,
    b: f64,
}

impl Range {
    pub fn new(a: f64, b: f64) -> Result<Range> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!(
                "range [{a}, {b}] must satisfy a < b"
            )));
        }
        Ok(Range { a, b })
    }

    pub fn unit() -> Range {
        Range { a: 0.0, b: 1.0 }
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.b
    }
}

impl Default for Range {
    fn default() -> Self {
        Range::unit()
    }
}

/// A labeled, evenly sampled sequence of real values.
///
/// When a start timestamp is present, value `i` sits at `start + i * step`
/// with no gaps. Gaps are resolved before a series is built.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    label: String,
    values: Vec<f64>,
    start: Option<NaiveDateTime>,
    step: Step,
}

impl TimeSeries {
    /// An undated daily series.
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> TimeSeries {
        TimeSeries {
            label: label.into(),
            values,
            start: None,
            step: Step::DAILY,
        }
    }

    /// A daily series whose first value falls on `start`.
    pub fn daily(label: impl Into<String>, start: NaiveDate, values: Vec<f64>) -> TimeSeries {
        TimeSeries::new(label, values).with_start_date(start)
    }

    pub fn with_start(mut self, start: Option<NaiveDateTime>) -> TimeSeries {
        self.start = start;
        self
    }

    pub fn with_start_date(self, start: NaiveDate) -> TimeSeries {
        self.with_start(Some(start.and_time(chrono::NaiveTime::MIN)))
    }

    pub fn with_step(mut self, step: Step) -> TimeSeries {
        self.step = step;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> TimeSeries {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> Step {
        self.step
    }

    pub fn start(&self) -> Option<NaiveDateTime> {
        self.start
    }

    pub fn start_date(&self) -> Option<NaiveDate> {
        self.start.map(|s| s.date())
    }

    /// Timestamp of value `i`, when the series is dated.
    pub fn time_at(&self, i: usize) -> Option<NaiveDateTime> {
        self.start.map(|s| s + self.step.delta(i as i64))
    }

    pub fn date_at(&self, i: usize) -> Option<NaiveDate> {
        self.time_at(i).map(|t| t.date())
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> Option<f64> {
        if self.values.is_empty() {
            None
        } else {
            Some(self.sum() / self.values.len() as f64)
        }
    }

    pub fn min(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::min)
    }

    pub fn max(&self) -> Option<f64> {
        self.values.iter().copied().reduce(f64::max)
    }

    pub(crate) fn require_len(&self, needed: usize) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::EmptySeries {
                label: self.label.clone(),
            });
        }
        if self.values.len() < needed {
            return Err(Error::SeriesTooShort {
                label: self.label.clone(),
                len: self.values.len(),
                needed,
            });
        }
        Ok(())
    }

    /// Same metadata, new values, start moved forward by `offset` steps.
    pub(crate) fn derive(&self, offset: usize, values: Vec<f64>) -> TimeSeries {
        TimeSeries {
            label: self.label.clone(),
            values,
            start: self.time_at(offset),
            step: self.step,
        }
    }

    /// Contiguous sub-series `[from, to)`, keeping dates consistent.
    pub fn slice(&self, from: usize, to: usize) -> TimeSeries {
        self.derive(from, self.values[from..to].to_vec())
    }

    /// Min-max normalisation onto `range`.
    pub fn normalise(&self, range: Range) -> Result<TimeSeries> {
        self.require_len(1)?;
        let (min, max) = (self.min().unwrap(), self.max().unwrap());
        if max == min {
            return Err(Error::ConstantSeries {
                label: self.label.clone(),
            });
        }
        let span = max - min;
        let width = range.b - range.a;
        let values = self
            .values
            .iter()
            .map(|x| (x - min) / span * width + range.a)
            .collect();
        Ok(self.derive(0, values))
    }

    /// Variation over windows of `length` consecutive points.
    ///
    /// Signed mode yields last-minus-first; unsigned mode sums the absolute
    /// differences between consecutive points inside the window.
    pub fn variation_series(&self, length: usize, unsigned: bool) -> Result<TimeSeries> {
        if length < 2 {
            return Err(Error::InvalidParameter(format!(
                "variation length must be at least 2, got {length}"
            )));
        }
        self.require_len(length)?;
        let v = &self.values;
        let values = if unsigned {
            let steps: Vec<f64> = v.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
            steps
                .windows(length - 1)
                .map(|w| w.iter().sum())
                .collect()
        } else {
            v.windows(length).map(|w| w[length - 1] - w[0]).collect()
        };
        Ok(self.derive(length - 1, values))
    }

    /// Trailing moving mean, optionally weighted.
    ///
    /// Weighted windows are normalised by the weight sum, so
    /// `out_t = sum_j w_j * a_{t+j} / sum_j w_j`.
    pub fn mobile_mean(&self, window: usize, weights: Option<&[f64]>) -> Result<TimeSeries> {
        if window == 0 {
            return Err(Error::InvalidParameter("window must be positive".into()));
        }
        self.require_len(window)?;
        let values = match weights {
            None => self
                .values
                .windows(window)
                .map(|w| w.iter().sum::<f64>() / window as f64)
                .collect(),
            Some(ws) => {
                if ws.len() != window {
                    return Err(Error::BadWeights(format!(
                        "{} weights for a window of {window}",
                        ws.len()
                    )));
                }
                let total: f64 = ws.iter().sum();
                if !(total > 0.0) || ws.iter().any(|w| !w.is_finite()) {
                    return Err(Error::BadWeights(format!(
                        "weights must be finite with a positive sum, got sum {total}"
                    )));
                }
                self.values
                    .windows(window)
                    .map(|w| w.iter().zip(ws).map(|(a, b)| a * b).sum::<f64>() / total)
                    .collect()
            }
        };
        Ok(self.derive(window - 1, values))
    }

    /// 0 where the input is 0, 1 elsewhere.
    pub fn eventuality(&self) -> Result<TimeSeries> {
        self.require_len(1)?;
        let values = self
            .values
            .iter()
            .map(|&x| if x == 0.0 { 0.0 } else { 1.0 })
            .collect();
        Ok(self.derive(0, values))
    }

    /// Splits each daily value into `parts` equal sub-daily values.
    pub fn expand_to_subdaily(&self, parts: u32) -> Result<TimeSeries> {
        self.require_len(1)?;
        if !self.step.is_daily() {
            return Err(Error::InvalidParameter(format!(
                "series `{}` has step {}, expected daily",
                self.label, self.step
            )));
        }
        if parts == 0 || !MINUTES_PER_DAY.is_multiple_of(parts) {
            return Err(Error::InvalidParameter(format!(
                "cannot split a day into {parts} equal parts"
            )));
        }
        let share = f64::from(parts);
        let values = self
            .values
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v / share, parts as usize))
            .collect();
        Ok(TimeSeries {
            label: self.label.clone(),
            values,
            start: self.start,
            step: Step(MINUTES_PER_DAY / parts),
        })
    }

    fn grid_position(&self) -> Option<i64> {
        let epoch = NaiveDate::from_ymd_opt(1970, 1, 1)?.and_time(chrono::NaiveTime::MIN);
        self.start
            .map(|s| (s - epoch).num_minutes().div_euclid(i64::from(self.step.0)))
    }
}

/// Trims two series to the stretch where they overlap.
///
/// Value `i` of `lead` is paired with the value of `follow` that lies `lag`
/// steps later. Undated series are treated as starting together.
pub fn align_pair(
    lead: &TimeSeries,
    follow: &TimeSeries,
    lag: i64,
) -> Result<(TimeSeries, TimeSeries)> {
    if lead.step != follow.step {
        return Err(Error::Misaligned(format!(
            "`{}` steps by {} but `{}` by {}",
            lead.label, lead.step, follow.label, follow.step
        )));
    }
    let offset = match (lead.grid_position(), follow.grid_position()) {
        (Some(a), Some(b)) => {
            let diff = (follow.start.unwrap() - lead.start.unwrap()).num_minutes();
            if diff % i64::from(lead.step.0) != 0 {
                return Err(Error::Misaligned(format!(
                    "`{}` and `{}` start off the common sampling grid",
                    lead.label, follow.label
                )));
            }
            b - a
        }
        (None, None) => 0,
        _ => {
            return Err(Error::Misaligned(format!(
                "only one of `{}` and `{}` carries dates",
                lead.label, follow.label
            )))
        }
    };
    // lead[i] pairs with follow[i + lag - offset]
    let shift = lag - offset;
    let from = (-shift).max(0);
    let to = (lead.len() as i64).min(follow.len() as i64 - shift);
    if to <= from {
        return Err(Error::Misaligned(format!(
            "`{}` and `{}` do not overlap at lag {lag}",
            lead.label, follow.label
        )));
    }
    let (from, to) = (from as usize, to as usize);
    let f_from = (from as i64 + shift) as usize;
    let f_to = (to as i64 + shift) as usize;
    Ok((lead.slice(from, to), follow.slice(f_from, f_to)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const WORKED: [f64; 10] = [
        900.0, 900.0, 900.0, 900.0, 900.0, 900.0, 1020.0, 900.0, 1000.0, 900.0,
    ];

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::new("x", values.to_vec())
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn normalise_examples() {
        let out = ts(&[0.0, 5.0, 10.0]).normalise(Range::unit()).unwrap();
        assert_eq!(out.values(), &[0.0, 0.5, 1.0]);

        let out = ts(&WORKED).normalise(Range::unit()).unwrap();
        let expected = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 100.0 / 120.0, 0.0];
        assert!(close(out.values(), &expected, 1e-12));

        let err = ts(&[7.0, 7.0, 7.0]).normalise(Range::new(-1.0, 1.0).unwrap());
        assert!(matches!(err, Err(Error::ConstantSeries { .. })));
        assert!(matches!(
            ts(&[]).normalise(Range::unit()),
            Err(Error::EmptySeries { .. })
        ));
    }

    #[test]
    fn range_requires_order() {
        assert!(Range::new(1.0, 1.0).is_err());
        assert!(Range::new(2.0, 1.0).is_err());
        assert!(Range::new(-3.0, 2.0).is_ok());
    }

    #[test]
    fn variation_examples() {
        let s = ts(&[1.0, 3.0, 2.0]);
        assert_eq!(s.variation_series(2, false).unwrap().values(), &[2.0, -1.0]);
        assert_eq!(s.variation_series(3, true).unwrap().values(), &[3.0]);
        let flat = ts(&[5.0; 4]);
        for len in 2..=4 {
            for unsigned in [false, true] {
                let out = flat.variation_series(len, unsigned).unwrap();
                assert!(out.values().iter().all(|&v| v == 0.0));
            }
        }
        assert!(matches!(
            s.variation_series(4, false),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            s.variation_series(1, false),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn mobile_mean_examples() {
        let out = ts(&WORKED).mobile_mean(7, None).unwrap();
        assert!(close(
            out.values(),
            &[917.14, 917.14, 931.43, 931.43],
            0.01
        ));
        assert_eq!(
            ts(&[1.0, 2.0, 3.0]).mobile_mean(1, None).unwrap().values(),
            &[1.0, 2.0, 3.0]
        );
        let weighted = ts(&[1.0, 2.0]).mobile_mean(2, Some(&[1.0, 3.0])).unwrap();
        assert_eq!(weighted.values(), &[1.75]);
    }

    #[test]
    fn mobile_mean_rejects_bad_input() {
        let s = ts(&[1.0, 2.0, 3.0]);
        assert!(matches!(s.mobile_mean(4, None), Err(Error::SeriesTooShort { .. })));
        assert!(matches!(s.mobile_mean(2, Some(&[1.0])), Err(Error::BadWeights(_))));
        assert!(matches!(
            s.mobile_mean(2, Some(&[1.0, -1.0])),
            Err(Error::BadWeights(_))
        ));
        assert!(matches!(s.mobile_mean(0, None), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn eventuality_examples() {
        let out = ts(&[0.0, 2.0, 0.0, 5.0]).eventuality().unwrap();
        assert_eq!(out.values(), &[0.0, 1.0, 0.0, 1.0]);
        assert_eq!(ts(&[0.0; 3]).eventuality().unwrap().values(), &[0.0; 3]);
        assert_eq!(ts(&[-1.0, 0.5]).eventuality().unwrap().values(), &[1.0, 1.0]);
        assert!(ts(&[]).eventuality().is_err());
    }

    #[test]
    fn expand_examples() {
        let out = ts(&[48.0]).expand_to_subdaily(48).unwrap();
        assert_eq!(out.values(), &[1.0; 48]);
        assert_eq!(out.step(), Step::SEMI_HOURLY);

        let out = ts(&[2.0]).expand_to_subdaily(48).unwrap();
        assert!(out.values().iter().all(|&v| v == 2.0 / 48.0));

        let out = ts(&[0.0, 48.0]).expand_to_subdaily(48).unwrap();
        assert_eq!(&out.values()[..48], &[0.0; 48]);
        assert_eq!(&out.values()[48..], &[1.0; 48]);
        assert_eq!(out.sum(), 48.0);

        assert!(out.expand_to_subdaily(2).is_err());
        assert!(ts(&[1.0]).expand_to_subdaily(7).is_err());
    }

    #[test]
    fn derived_series_are_dated_at_window_end() {
        let start = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
        let s = TimeSeries::daily("p", start, WORKED.to_vec());
        let mm = s.mobile_mean(7, None).unwrap();
        assert_eq!(mm.start_date(), NaiveDate::from_ymd_opt(2016, 1, 7));
        let var = s.variation_series(3, false).unwrap();
        assert_eq!(var.start_date(), NaiveDate::from_ymd_opt(2016, 1, 3));
        let sub = s.expand_to_subdaily(48).unwrap();
        assert_eq!(
            sub.time_at(49).unwrap(),
            start.and_hms_opt(0, 30, 0).unwrap() + TimeDelta::days(1)
        );
    }

    #[test]
    fn align_pair_by_dates_and_lag() {
        let d = |day| NaiveDate::from_ymd_opt(2016, 1, day).unwrap();
        let a = TimeSeries::daily("a", d(3), vec![3.0, 4.0, 5.0, 6.0]);
        let b = TimeSeries::daily("b", d(1), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let (x, y) = align_pair(&a, &b, 0).unwrap();
        assert_eq!(x.values(), y.values());
        assert_eq!(x.start_date(), Some(d(3)));

        // a on day t against b on day t + 2
        let (x, y) = align_pair(&a, &b, 2).unwrap();
        assert_eq!(x.values(), &[3.0, 4.0]);
        assert_eq!(y.values(), &[5.0, 6.0]);

        let undated = TimeSeries::new("u", vec![1.0, 2.0]);
        assert!(matches!(
            align_pair(&a, &undated, 0),
            Err(Error::Misaligned(_))
        ));
        assert!(align_pair(&a, &b, 10).is_err());
    }

    fn values_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0e3..1.0e3f64, 2..60)
    }

    proptest! {
        #[test]
        fn normalise_is_idempotent(v in values_strategy(), a in -10.0..10.0f64, w in 0.1..10.0f64) {
            let s = ts(&v);
            prop_assume!(s.max() > s.min());
            let r = Range::new(a, a + w).unwrap();
            let once = s.normalise(r).unwrap();
            let twice = once.normalise(r).unwrap();
            for (x, y) in once.values().iter().zip(twice.values()) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
            }
        }

        #[test]
        fn normalise_keeps_extreme_positions(v in values_strategy()) {
            let s = ts(&v);
            prop_assume!(s.max() > s.min());
            let out = s.normalise(Range::unit()).unwrap();
            let argmax = |xs: &[f64]| xs.iter().enumerate().fold(0, |b, (i, &x)| if x > xs[b] { i } else { b });
            let argmin = |xs: &[f64]| xs.iter().enumerate().fold(0, |b, (i, &x)| if x < xs[b] { i } else { b });
            prop_assert_eq!(argmax(s.values()), argmax(out.values()));
            prop_assert_eq!(argmin(s.values()), argmin(out.values()));
            prop_assert_eq!(out.min(), Some(0.0));
            prop_assert!((out.max().unwrap() - 1.0).abs() < 1e-15);
        }

        #[test]
        fn variation_of_monotone_series_is_non_negative(mut v in values_strategy(), len in 2usize..6) {
            prop_assume!(v.len() >= len);
            v.sort_by(f64::total_cmp);
            let out = ts(&v).variation_series(len, false).unwrap();
            prop_assert_eq!(out.len(), v.len() - len + 1);
            prop_assert!(out.values().iter().all(|&x| x >= 0.0));
        }

        #[test]
        fn mobile_mean_stays_within_window(v in values_strategy(), window in 1usize..10) {
            prop_assume!(v.len() >= window);
            let out = ts(&v).mobile_mean(window, None).unwrap();
            prop_assert_eq!(out.len(), v.len() - window + 1);
            for (t, m) in out.values().iter().enumerate() {
                let w = &v[t..t + window];
                let lo = w.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let slack = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
                prop_assert!(*m >= lo - slack && *m <= hi + slack);
            }
        }

        #[test]
        fn eventuality_is_idempotent(v in prop::collection::vec(prop_oneof![Just(0.0), -5.0..5.0f64], 1..40)) {
            let once = ts(&v).eventuality().unwrap();
            prop_assert_eq!(once.eventuality().unwrap(), once.clone());
            prop_assert_eq!(once.len(), v.len());
        }

        #[test]
        fn expansion_preserves_sum(v in prop::collection::vec(0.0..20.0f64, 1..50), parts in prop::sample::select(vec![1u32, 2, 24, 48, 96])) {
            let s = ts(&v);
            let out = s.expand_to_subdaily(parts).unwrap();
            prop_assert_eq!(out.len(), v.len() * parts as usize);
            let (a, b) = (s.sum(), out.sum());
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }
}
