//! Peak detection and peak-pattern occurrence series.
//!
//! A value `a_i` is a positive peak when it exceeds the mean of its trailing
//! window `a_{i-w+1}..a_i` by more than `f` population standard deviations of
//! that window, and a negative peak when it falls below by more than the same
//! margin. The window includes the candidate value itself and the
//! inequalities are strict.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Step, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakParams {
    window: usize,
    factor: f64,
}

impl PeakParams {
    pub fn new(window: usize, factor: f64) -> Result<PeakParams> {
        if window < 2 {
            return Err(Error::InvalidParameter(format!(
                "peak window must be at least 2, got {window}"
            )));
        }
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "peak factor must be positive, got {factor}"
            )));
        }
        Ok(PeakParams { window, factor })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }
}

impl Default for PeakParams {
    /// `w = 7`, `f = 1`.
    fn default() -> Self {
        PeakParams {
            window: 7,
            factor: 1.0,
        }
    }
}

/// Ternary peak series. Index 0 corresponds to source index `w - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakSeries {
    values: Vec<i8>,
    source_label: String,
    params: PeakParams,
    start: Option<NaiveDateTime>,
    step: Step,
}

impl PeakSeries {
    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source_label(&self) -> &str {
        &self.source_label
    }

    pub fn params(&self) -> PeakParams {
        self.params
    }

    /// Offset of index 0 within the source series.
    pub fn source_offset(&self) -> usize {
        self.params.window - 1
    }

    pub fn count(&self, sign: i8) -> usize {
        self.values.iter().filter(|&&v| v == sign).count()
    }

    pub fn to_series(&self) -> TimeSeries {
        TimeSeries::new(
            format!("peaks({})", self.source_label),
            self.values.iter().map(|&v| f64::from(v)).collect(),
        )
        .with_start(self.start)
        .with_step(self.step)
    }
}

/// A tuple of peak values to search for, e.g. `(1, 0, -1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern(Vec<i8>);

impl Pattern {
    pub fn new(elements: Vec<i8>) -> Result<Pattern> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter("empty peak pattern".into()));
        }
        if let Some(bad) = elements.iter().find(|v| !(-1..=1).contains(*v)) {
            return Err(Error::InvalidParameter(format!(
                "pattern element {bad} is not one of -1, 0, 1"
            )));
        }
        Ok(Pattern(elements))
    }

    pub fn elements(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(1,-1,1)`, `(1,0,1)` and `(1,0,-1)`: the sharpest short swings.
    pub fn defaults() -> Vec<Pattern> {
        vec![
            Pattern(vec![1, -1, 1]),
            Pattern(vec![1, 0, 1]),
            Pattern(vec![1, 0, -1]),
        ]
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pattern> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let elements = trimmed
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i8>()
                    .map_err(|_| Error::InvalidParameter(format!("bad pattern element `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(elements)
    }
}

/// Binary series marking where a [`Pattern`] occurs in a [`PeakSeries`].
///
/// An occurrence is dated at the last peak of the matched tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSeries {
    values: Vec<u8>,
    pattern: Pattern,
    source_label: String,
    start: Option<NaiveDateTime>,
    step: Step,
}

impl PatternSeries {
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn occurrences(&self) -> usize {
        self.values.iter().filter(|&&v| v == 1).count()
    }

    pub fn to_series(&self) -> TimeSeries {
        TimeSeries::new(
            format!("pattern{}({})", self.pattern, self.source_label),
            self.values.iter().map(|&v| f64::from(v)).collect(),
        )
        .with_start(self.start)
        .with_step(self.step)
    }
}

/// Mean and population standard deviation of every trailing window.
pub fn window_stats(s: &TimeSeries, window: usize) -> Result<Vec<(f64, f64)>> {
    if window == 0 {
        return Err(Error::InvalidParameter("window must be positive".into()));
    }
    s.require_len(window)?;
    let w = window as f64;
    Ok(s.values()
        .windows(window)
        .map(|win| {
            let mean = win.iter().sum::<f64>() / w;
            let var = win.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / w;
            (mean, var.sqrt())
        })
        .collect())
}

pub fn detect_peaks(s: &TimeSeries, params: PeakParams) -> Result<PeakSeries> {
    let stats = window_stats(s, params.window)?;
    let offset = params.window - 1;
    let values = stats
        .iter()
        .zip(&s.values()[offset..])
        .map(|(&(mean, std), &a)| {
            let margin = params.factor * std;
            if a > mean + margin {
                1
            } else if a < mean - margin {
                -1
            } else {
                0
            }
        })
        .collect();
    Ok(PeakSeries {
        values,
        source_label: s.label().to_string(),
        params,
        start: s.time_at(offset),
        step: s.step(),
    })
}

pub fn pattern_series(peaks: &PeakSeries, pattern: &Pattern) -> Result<PatternSeries> {
    if pattern.len() > peaks.len() {
        return Err(Error::PatternTooLong {
            pattern: pattern.len(),
            series: peaks.len(),
        });
    }
    let values = peaks
        .values
        .windows(pattern.len())
        .map(|w| u8::from(w == pattern.elements()))
        .collect();
    let start = peaks.start.map(|s| {
        s + chrono::TimeDelta::minutes(i64::from(peaks.step.minutes()) * (pattern.len() as i64 - 1))
    });
    Ok(PatternSeries {
        values,
        pattern: pattern.clone(),
        source_label: peaks.source_label.clone(),
        start,
        step: peaks.step,
    })
}

/// Number of source-series samples covered by one pattern occurrence.
pub fn pattern_span(params: PeakParams, pattern_len: usize) -> usize {
    params.window + pattern_len - 1
}
