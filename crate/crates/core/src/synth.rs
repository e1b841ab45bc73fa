//! Seeded synthetic datasets with planted effects.
//!
//! Each knob controls one phenomenon: a long-run pressure trend, an annual
//! pressure cycle, a trend in admissions, and bursts of intra-day pressure
//! oscillation that precede designated days carrying extra admissions.

use chrono::{Datelike, Days, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Dataset, Weather, WeatherVar};
use crate::series::TimeSeries;
use crate::variation::{DailyProfile, READINGS_PER_DAY};

const DAYS_PER_YEAR: f64 = 365.25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub start: NaiveDate,
    pub days: usize,
    /// Mean sea-level pressure at the start (mbar).
    pub pressure_base: f64,
    /// mbar per year.
    pub pressure_trend: f64,
    /// Half peak-to-peak of the annual pressure cycle (mbar).
    pub seasonal_amplitude: f64,
    /// Standard deviation of day-to-day weather systems (mbar).
    pub synoptic_sd: f64,
    /// Lag-one autocorrelation of the weather-system component.
    pub synoptic_persistence: f64,
    /// Step standard deviation of the semi-hourly random walk (mbar).
    pub intraday_sd: f64,
    /// Expected daily admissions at the start.
    pub hosp_base: f64,
    /// Change in expected daily admissions per year.
    pub hosp_trend: f64,
    /// Probability that a day is designated as an admission burst.
    pub episode_rate: f64,
    /// Days of extra oscillation ending on (or `episode_lag` days before) a burst.
    pub episode_days: usize,
    /// Amplitude of the injected semi-hourly oscillation (mbar).
    pub episode_amplitude: f64,
    /// Extra admissions on a designated day.
    pub episode_admissions: u32,
    /// Days between the end of the oscillation and the burst.
    pub episode_lag: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 42,
            start: NaiveDate::from_ymd_opt(2016, 1, 1).unwrap(),
            days: 1096,
            pressure_base: 1016.0,
            pressure_trend: -3.0,
            seasonal_amplitude: 4.0,
            synoptic_sd: 4.0,
            synoptic_persistence: 0.6,
            intraday_sd: 0.3,
            hosp_base: 0.6,
            hosp_trend: 0.25,
            episode_rate: 0.04,
            episode_days: 4,
            episode_amplitude: 0.15,
            episode_admissions: 2,
            episode_lag: 0,
        }
    }
}

impl SynthConfig {
    /// Same weather process with every planted coupling and trend switched off.
    pub fn uncoupled(seed: u64) -> SynthConfig {
        SynthConfig {
            seed,
            pressure_trend: 0.0,
            hosp_trend: 0.0,
            episode_rate: 0.0,
            episode_amplitude: 0.0,
            episode_admissions: 0,
            ..SynthConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.days < 2 {
            return bad("synthetic dataset needs at least 2 days");
        }
        if !(0.0..=1.0).contains(&self.episode_rate) {
            return bad("episode rate must lie in [0, 1]");
        }
        if self.episode_days == 0 {
            return bad("episode length must be positive");
        }
        if !(0.0..1.0).contains(&self.synoptic_persistence) {
            return bad("synoptic persistence must lie in [0, 1)");
        }
        if self.synoptic_sd < 0.0 || self.intraday_sd < 0.0 || self.episode_amplitude < 0.0 {
            return bad("standard deviations and amplitudes must be non-negative");
        }
        Ok(())
    }
}

/// A generated dataset and the ground truth behind it.
#[derive(Debug, Clone)]
pub struct Synthetic {
    pub dataset: Dataset,
    /// Days that received `episode_admissions` extra admissions.
    pub burst_days: Vec<NaiveDate>,
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (x * scale).round() / scale
}

fn normal(sd: f64) -> Normal<f64> {
    Normal::new(0.0, sd).expect("non-negative standard deviation")
}

pub fn generate(cfg: &SynthConfig) -> Result<Synthetic> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.days;
    let two_pi = 2.0 * std::f64::consts::PI;
    let date = |i: usize| cfg.start + Days::new(i as u64);

    // designate bursts first so the oscillation can be placed before them
    let mut burst = vec![false; n];
    let first_possible = cfg.episode_days - 1 + cfg.episode_lag;
    for (i, b) in burst.iter_mut().enumerate() {
        let roll: f64 = rng.random();
        *b = i >= first_possible && roll < cfg.episode_rate;
    }
    let mut oscillating = vec![false; n];
    for i in (0..n).filter(|&i| burst[i]) {
        let end = i - cfg.episode_lag;
        for day in oscillating[end + 1 - cfg.episode_days..=end].iter_mut() {
            *day = true;
        }
    }

    let synoptic = normal(cfg.synoptic_sd * (1.0 - cfg.synoptic_persistence.powi(2)).sqrt());
    let step = normal(cfg.intraday_sd);
    let mut weather_state = 0.0;
    let mut profiles = Vec::with_capacity(n);
    let mut pressure = Vec::with_capacity(n);
    for i in 0..n {
        let years = i as f64 / DAYS_PER_YEAR;
        let doy = f64::from(date(i).ordinal0());
        weather_state = cfg.synoptic_persistence * weather_state + synoptic.sample(&mut rng);
        let level = cfg.pressure_base
            + cfg.pressure_trend * years
            + cfg.seasonal_amplitude * (two_pi * doy / DAYS_PER_YEAR).cos()
            + weather_state;

        let mut walk = 0.0;
        let mut path: Vec<f64> = (0..READINGS_PER_DAY)
            .map(|k| {
                walk += step.sample(&mut rng);
                walk + 0.4 * (two_pi * k as f64 / READINGS_PER_DAY as f64).sin()
            })
            .collect();
        let centre = path.iter().sum::<f64>() / READINGS_PER_DAY as f64;
        if oscillating[i] {
            for (k, r) in path.iter_mut().enumerate() {
                let swing = cfg.episode_amplitude * rng.random_range(0.5..1.0);
                *r += if k % 2 == 0 { swing } else { -swing };
            }
        }
        let readings: Vec<f64> = path.iter().map(|r| round_to(level + r - centre, 1)).collect();
        let profile = DailyProfile::new(date(i), readings)?;
        pressure.push(round_to(profile.mean(), 2));
        profiles.push(profile);
    }

    let temp_noise = normal(2.0);
    let spread = normal(1.5);
    let wind_noise = normal(4.0);
    let mut temps = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut winds = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for i in 0..n {
        let doy = f64::from(date(i).ordinal0());
        let avg = 15.0 - 9.0 * (two_pi * doy / DAYS_PER_YEAR).cos() + temp_noise.sample(&mut rng);
        let low = avg - 4.0 - spread.sample(&mut rng).abs();
        let high = avg + 4.0 + spread.sample(&mut rng).abs();
        temps[0].push(round_to(low, 1));
        temps[1].push(round_to(avg, 1));
        temps[2].push(round_to(high, 1));

        let wavg = 8.0 + wind_noise.sample(&mut rng).abs();
        let wmin = wavg * rng.random_range(0.1..0.6);
        let wmax = wavg + 4.0 + 1.5 * wind_noise.sample(&mut rng).abs();
        winds[0].push(round_to(wmin, 1));
        winds[1].push(round_to(wavg, 1));
        winds[2].push(round_to(wmax, 1));
    }

    let mut admissions = Vec::with_capacity(n);
    for (i, &is_burst) in burst.iter().enumerate() {
        let rate = (cfg.hosp_base + cfg.hosp_trend * i as f64 / DAYS_PER_YEAR).max(1e-6);
        let base = Poisson::new(rate)
            .map_err(|e| Error::InvalidParameter(format!("admission rate {rate}: {e}")))?
            .sample(&mut rng);
        let extra = if is_burst { cfg.episode_admissions } else { 0 };
        admissions.push(base + f64::from(extra));
    }

    let [tmin, tavg, tmax] = temps;
    let [wmin, wavg, wmax] = winds;
    let columns = [
        (WeatherVar::Pressure, pressure),
        (WeatherVar::TempMin, tmin),
        (WeatherVar::TempAvg, tavg),
        (WeatherVar::TempMax, tmax),
        (WeatherVar::WindMin, wmin),
        (WeatherVar::WindAvg, wavg),
        (WeatherVar::WindMax, wmax),
    ];
    let weather = Weather::new(
        columns
            .into_iter()
            .map(|(v, values)| (v, TimeSeries::daily(v.column(), cfg.start, values))),
    )?;
    let hosp = TimeSeries::daily("hospitalizations", cfg.start, admissions);
    let burst_days = (0..n).filter(|&i| burst[i]).map(date).collect();
    Ok(Synthetic {
        dataset: Dataset::assemble(hosp, weather, profiles)?,
        burst_days,
    })
}
