//! Automatic scan of weather series and their transformations for the
//! strongest Pearson or Spearman correlation with daily admissions.

use std::fmt;

use log::{debug, warn};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ingest::{Weather, WeatherVar};
use crate::peaks::{detect_peaks, pattern_series, Pattern, PeakParams};
use crate::series::{align_pair, TimeSeries};
use crate::stats::{correlate, CorrelationResult};

pub const DEFAULT_THRESHOLD: f64 = 0.2;
pub const DEFAULT_MAX_LAG: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Transform {
    Raw,
    /// Signed change over `days` days: `a_t - a_{t-days}`.
    Variation { days: usize },
    /// Peak series against admissions `lag` days later.
    Peaks { lag: usize },
    Pattern(Pattern),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CandidateSpec {
    pub source: WeatherVar,
    pub transform: Transform,
}

impl CandidateSpec {
    pub fn lag(&self) -> usize {
        match self.transform {
            Transform::Peaks { lag } => lag,
            _ => 0,
        }
    }
}

impl fmt::Display for CandidateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.transform {
            Transform::Raw => write!(f, "{}", self.source),
            Transform::Variation { days } => write!(f, "{}:variation({days})", self.source),
            Transform::Peaks { lag } => write!(f, "{}:peaks+lag{lag}", self.source),
            Transform::Pattern(p) => write!(f, "{}:pattern{p}", self.source),
        }
    }
}

impl Serialize for CandidateSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinderConfig {
    pub sources: Vec<WeatherVar>,
    pub include_raw: bool,
    pub variation_days: Vec<usize>,
    pub include_peaks: bool,
    pub peak_params: PeakParams,
    pub max_lag: usize,
    pub patterns: Vec<Pattern>,
    pub threshold: f64,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig {
            sources: vec![
                WeatherVar::Pressure,
                WeatherVar::TempMin,
                WeatherVar::TempAvg,
                WeatherVar::TempMax,
                WeatherVar::WindAvg,
                WeatherVar::WindMax,
            ],
            include_raw: true,
            variation_days: (1..=7).collect(),
            include_peaks: true,
            peak_params: PeakParams::default(),
            max_lag: DEFAULT_MAX_LAG,
            patterns: Pattern::defaults(),
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

fn dedup_in_order<T: PartialEq + Clone>(items: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(items.len());
    for item in items {
        if !out.contains(item) {
            out.push(item.clone());
        }
    }
    out
}

/// Lists candidates in a fixed order: per source, raw, then variations,
/// then peak lags, then patterns. A pattern is only listed when it occurs
/// at least once in the source's peak series.
pub fn enumerate_candidates(config: &FinderConfig, weather: &Weather) -> Result<Vec<CandidateSpec>> {
    if config.sources.is_empty() {
        return Err(Error::EmptyConfig("no weather series selected".into()));
    }
    if !config.include_raw
        && config.variation_days.is_empty()
        && !config.include_peaks
        && config.patterns.is_empty()
    {
        return Err(Error::EmptyConfig("no transformation selected".into()));
    }
    if let Some(bad) = config.variation_days.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidParameter(format!("variation of {bad} days")));
    }
    let mut days = dedup_in_order(&config.variation_days);
    days.sort_unstable();
    let patterns = dedup_in_order(&config.patterns);

    let mut out = Vec::new();
    for source in dedup_in_order(&config.sources) {
        let series = weather.require(source)?;
        let mut push = |transform| out.push(CandidateSpec { source, transform });
        if config.include_raw {
            push(Transform::Raw);
        }
        for &d in &days {
            push(Transform::Variation { days: d });
        }
        if config.include_peaks {
            for lag in 0..=config.max_lag {
                push(Transform::Peaks { lag });
            }
        }
        if patterns.is_empty() {
            continue;
        }
        let peaks = match detect_peaks(series, config.peak_params) {
            Ok(p) => p,
            Err(e) => {
                warn!("{source}: no peak series ({e}), patterns skipped");
                continue;
            }
        };
        for pattern in &patterns {
            match pattern_series(&peaks, pattern) {
                Ok(ps) if ps.occurrences() > 0 => push(Transform::Pattern(pattern.clone())),
                Ok(_) => debug!("{source}: pattern {pattern} never occurs"),
                Err(e) => debug!("{source}: pattern {pattern}: {e}"),
            }
        }
    }
    Ok(out)
}

/// The transformed weather series a candidate stands for, dated at the end
/// of each window.
pub fn candidate_series(
    spec: &CandidateSpec,
    weather: &Weather,
    peak_params: PeakParams,
) -> Result<TimeSeries> {
    let source = weather.require(spec.source)?;
    let label = spec.to_string();
    let series = match &spec.transform {
        Transform::Raw => source.clone(),
        Transform::Variation { days } => source.variation_series(days + 1, false)?,
        Transform::Peaks { .. } => detect_peaks(source, peak_params)?.to_series(),
        Transform::Pattern(p) => pattern_series(&detect_peaks(source, peak_params)?, p)?.to_series(),
    };
    Ok(series.with_label(label))
}

/// Correlation of one candidate against admissions over their overlap.
pub fn evaluate(
    spec: &CandidateSpec,
    weather: &Weather,
    peak_params: PeakParams,
    hosp: &TimeSeries,
) -> Result<CorrelationResult> {
    let series = candidate_series(spec, weather, peak_params)?;
    let (x, y) = align_pair(&series, hosp, spec.lag() as i64)?;
    correlate(&x, &y)
}

#[derive(Debug, Clone, Serialize)]
pub struct Evaluation {
    pub candidate: CandidateSpec,
    pub result: Option<CorrelationResult>,
    /// Why the candidate could not be scored.
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Best {
    pub candidate: CandidateSpec,
    pub result: CorrelationResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct FinderReport {
    pub candidates_evaluated: usize,
    pub threshold: f64,
    pub best_pearson: Option<Best>,
    pub best_spearman: Option<Best>,
    pub relevant: bool,
    /// Every candidate in enumeration order.
    pub evaluations: Vec<Evaluation>,
}

impl FinderReport {
    /// Scored candidates by decreasing `max(|r|, |rho|)`; enumeration order
    /// breaks ties.
    pub fn ranked(&self) -> Vec<(&CandidateSpec, &CorrelationResult)> {
        let mut rows: Vec<_> = self
            .evaluations
            .iter()
            .filter_map(|e| e.result.as_ref().map(|r| (&e.candidate, r)))
            .collect();
        rows.sort_by(|a, b| b.1.strength().total_cmp(&a.1.strength()));
        rows
    }
}

pub fn run_finder(
    candidates: &[CandidateSpec],
    weather: &Weather,
    hosp: &TimeSeries,
    config: &FinderConfig,
) -> Result<FinderReport> {
    if candidates.is_empty() {
        return Err(Error::NoCandidates);
    }
    let evaluations: Vec<Evaluation> = candidates
        .par_iter()
        .map(|spec| match evaluate(spec, weather, config.peak_params, hosp) {
            Ok(r) => Evaluation {
                candidate: spec.clone(),
                result: Some(r),
                skipped: None,
            },
            Err(e) => {
                warn!("{spec}: skipped ({e})");
                Evaluation {
                    candidate: spec.clone(),
                    result: None,
                    skipped: Some(e.to_string()),
                }
            }
        })
        .collect();

    let pick = |key: fn(&CorrelationResult) -> f64| -> Option<Best> {
        let mut best: Option<Best> = None;
        for e in &evaluations {
            if let Some(r) = &e.result {
                if best.as_ref().is_none_or(|b| key(r).abs() > key(&b.result).abs()) {
                    best = Some(Best {
                        candidate: e.candidate.clone(),
                        result: *r,
                    });
                }
            }
        }
        best
    };
    let best_pearson = pick(|r| r.pearson_r);
    let best_spearman = pick(|r| r.spearman_rho);
    let top = best_pearson
        .as_ref()
        .map_or(0.0, |b| b.result.pearson_r.abs())
        .max(best_spearman.as_ref().map_or(0.0, |b| b.result.spearman_rho.abs()));
    Ok(FinderReport {
        candidates_evaluated: evaluations.len(),
        threshold: config.threshold,
        best_pearson,
        best_spearman,
        relevant: top >= config.threshold,
        evaluations,
    })
}
