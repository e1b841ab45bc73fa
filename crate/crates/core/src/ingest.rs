//! CSV loading, validation, alignment and gap filling.
//!
//! Three file families are understood, all with ISO 8601 dates and
//! dot-decimal numbers:
//!
//! | file                     | header                                                               |
//! |--------------------------|----------------------------------------------------------------------|
//! | `weather.csv`            | `date,pressure,temp_min,temp_avg,temp_max,wind_min,wind_avg,wind_max` |
//! | `hospitalizations.csv`   | `date,count`                                                         |
//! | `pressure_semi_hourly.csv` | `timestamp,pressure` (`YYYY-MM-DDTHH:MM`, on the hour or half hour) |

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{Days, NaiveDate, NaiveDateTime, Timelike};
use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::variation::{DailyProfile, READINGS_PER_DAY};

pub const WEATHER_FILE: &str = "weather.csv";
pub const HOSPITALIZATIONS_FILE: &str = "hospitalizations.csv";
pub const SEMI_HOURLY_FILE: &str = "pressure_semi_hourly.csv";

/// Pressure assigned to days with no semi-hourly record.
pub const DEFAULT_FILL_MBAR: f64 = 1000.0;

const DATE_FORMAT: &str = "%Y-%m-%d";
const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M";

/// Columns of the daily weather file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum WeatherVar {
    Pressure,
    TempMin,
    TempAvg,
    TempMax,
    WindMin,
    WindAvg,
    WindMax,
}

impl WeatherVar {
    pub const ALL: [WeatherVar; 7] = [
        WeatherVar::Pressure,
        WeatherVar::TempMin,
        WeatherVar::TempAvg,
        WeatherVar::TempMax,
        WeatherVar::WindMin,
        WeatherVar::WindAvg,
        WeatherVar::WindMax,
    ];

    pub fn column(self) -> &'static str {
        match self {
            WeatherVar::Pressure => "pressure",
            WeatherVar::TempMin => "temp_min",
            WeatherVar::TempAvg => "temp_avg",
            WeatherVar::TempMax => "temp_max",
            WeatherVar::WindMin => "wind_min",
            WeatherVar::WindAvg => "wind_avg",
            WeatherVar::WindMax => "wind_max",
        }
    }
}

impl fmt::Display for WeatherVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for WeatherVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<WeatherVar> {
        WeatherVar::ALL
            .into_iter()
            .find(|v| v.column() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown weather series `{s}`")))
    }
}

/// Daily weather series sharing one date range.
#[derive(Debug, Clone, PartialEq)]
pub struct Weather {
    series: BTreeMap<WeatherVar, TimeSeries>,
}

impl Weather {
    pub fn new(series: impl IntoIterator<Item = (WeatherVar, TimeSeries)>) -> Result<Weather> {
        let series: BTreeMap<_, _> = series.into_iter().collect();
        let mut it = series.values();
        if let Some(first) = it.next() {
            for s in it {
                if s.start() != first.start() || s.len() != first.len() {
                    return Err(Error::Misaligned(format!(
                        "weather series `{}` and `{}` cover different dates",
                        first.label(),
                        s.label()
                    )));
                }
            }
        }
        Ok(Weather { series })
    }

    pub fn get(&self, var: WeatherVar) -> Option<&TimeSeries> {
        self.series.get(&var)
    }

    pub fn require(&self, var: WeatherVar) -> Result<&TimeSeries> {
        self.get(var)
            .ok_or_else(|| Error::InvalidParameter(format!("weather series `{var}` not loaded")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (WeatherVar, &TimeSeries)> {
        self.series.iter().map(|(k, v)| (*k, v))
    }

    fn any(&self) -> Option<&TimeSeries> {
        self.series.values().next()
    }
}

/// How to treat a day with fewer than 48 semi-hourly readings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillMode {
    #[default]
    Strict,
    /// Missing slots repeat the previous reading of the same day.
    RepeatLast,
}

fn parse_error(path: &Path, row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    match err.position() {
        Some(pos) => parse_error(path, pos.line() as usize, "*", err.to_string()),
        None => Error::Csv {
            path: path.to_path_buf(),
            source: err,
        },
    }
}

fn column_indices(path: &Path, reader: &mut csv::Reader<File>, wanted: &[&str]) -> Result<Vec<usize>> {
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    wanted
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| parse_error(path, 1, name, "column missing from header"))
        })
        .collect()
}

fn parse_date(path: &Path, row: usize, column: &str, raw: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(raw, DATE_FORMAT)
        .map_err(|e| parse_error(path, row, column, format!("`{raw}` is not a YYYY-MM-DD date: {e}")))
}

fn parse_real(path: &Path, row: usize, column: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| parse_error(path, row, column, format!("`{raw}` is not a dot-decimal number")))?;
    if !v.is_finite() {
        return Err(parse_error(path, row, column, format!("`{raw}` is not finite")));
    }
    Ok(v)
}

/// Reads `date` plus the requested columns, enforcing strictly increasing,
/// gap-free dates.
fn read_daily_table<T>(
    path: &Path,
    columns: &[&str],
    parse: impl Fn(&Path, usize, &str, &str) -> Result<T>,
) -> Result<(NaiveDate, Vec<Vec<T>>)> {
    let mut reader = open_reader(path)?;
    let mut wanted = vec!["date"];
    wanted.extend_from_slice(columns);
    let idx = column_indices(path, &mut reader, &wanted)?;

    let mut start: Option<NaiveDate> = None;
    let mut last: Option<NaiveDate> = None;
    let mut table: Vec<Vec<T>> = (0..columns.len()).map(|_| Vec::new()).collect();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(idx[i]).unwrap_or("");
        let date = parse_date(path, row, "date", field(0))?;
        if let Some(prev) = last {
            if date == prev {
                return Err(Error::DuplicateDate {
                    path: path.to_path_buf(),
                    date: date.to_string(),
                });
            }
            if date < prev {
                return Err(Error::NonMonotonicDates {
                    path: path.to_path_buf(),
                    row,
                    date: date.to_string(),
                });
            }
            let gap = (date - prev).num_days() - 1;
            if gap > 0 {
                return Err(Error::MissingDates {
                    path: path.to_path_buf(),
                    first: prev + Days::new(1),
                    count: gap,
                });
            }
        }
        start.get_or_insert(date);
        last = Some(date);
        for (c, col) in columns.iter().enumerate() {
            table[c].push(parse(path, row, col, field(c + 1))?);
        }
    }
    let start = start.ok_or_else(|| Error::EmptySeries {
        label: path.display().to_string(),
    })?;
    Ok((start, table))
}

/// One value column of a daily file as a dated series labeled by the column.
pub fn load_daily_csv(path: impl AsRef<Path>, column: &str) -> Result<TimeSeries> {
    let (start, mut table) = read_daily_table(path.as_ref(), &[column], parse_real)?;
    Ok(TimeSeries::daily(column, start, table.remove(0)))
}

pub fn load_weather_csv(path: impl AsRef<Path>) -> Result<Weather> {
    let columns: Vec<&str> = WeatherVar::ALL.iter().map(|v| v.column()).collect();
    let (start, table) = read_daily_table(path.as_ref(), &columns, parse_real)?;
    Weather::new(
        WeatherVar::ALL
            .into_iter()
            .zip(table)
            .map(|(var, values)| (var, TimeSeries::daily(var.column(), start, values))),
    )
}

/// Daily admission counts; only non-negative integers are accepted.
pub fn load_hospitalizations_csv(path: impl AsRef<Path>) -> Result<TimeSeries> {
    let parse_count = |path: &Path, row: usize, column: &str, raw: &str| -> Result<f64> {
        raw.parse::<u32>().map(f64::from).map_err(|_| {
            parse_error(path, row, column, format!("`{raw}` is not a non-negative integer count"))
        })
    };
    let (start, mut table) = read_daily_table(path.as_ref(), &["count"], parse_count)?;
    Ok(TimeSeries::daily("hospitalizations", start, table.remove(0)))
}

/// Buckets semi-hourly readings into calendar days.
pub fn load_semi_hourly_csv(path: impl AsRef<Path>, mode: FillMode) -> Result<Vec<DailyProfile>> {
    let path = path.as_ref();
    let mut reader = open_reader(path)?;
    let idx = column_indices(path, &mut reader, &["timestamp", "pressure"])?;

    let mut days: BTreeMap<NaiveDate, [Option<f64>; READINGS_PER_DAY]> = BTreeMap::new();
    let mut last: Option<NaiveDateTime> = None;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        let raw = record.get(idx[0]).unwrap_or("");
        let ts = NaiveDateTime::parse_from_str(raw, TIMESTAMP_FORMAT).map_err(|e| {
            parse_error(path, row, "timestamp", format!("`{raw}` is not YYYY-MM-DDTHH:MM: {e}"))
        })?;
        if ts.minute() % 30 != 0 {
            return Err(parse_error(path, row, "timestamp", format!("`{raw}` is not on a half hour")));
        }
        if let Some(prev) = last {
            if ts == prev {
                return Err(Error::DuplicateDate {
                    path: path.to_path_buf(),
                    date: raw.to_string(),
                });
            }
            if ts < prev {
                return Err(Error::NonMonotonicDates {
                    path: path.to_path_buf(),
                    row,
                    date: raw.to_string(),
                });
            }
        }
        last = Some(ts);
        let value = parse_real(path, row, "pressure", record.get(idx[1]).unwrap_or(""))?;
        let slot = (ts.hour() * 2 + ts.minute() / 30) as usize;
        days.entry(ts.date()).or_insert([None; READINGS_PER_DAY])[slot] = Some(value);
    }

    days.into_iter()
        .map(|(date, slots)| {
            let present = slots.iter().flatten().count();
            if present == READINGS_PER_DAY {
                return DailyProfile::new(date, slots.iter().map(|s| s.unwrap()).collect());
            }
            match mode {
                FillMode::Strict => Err(Error::IncompleteDay {
                    date,
                    readings: present,
                }),
                FillMode::RepeatLast => {
                    warn!("{date}: {present} of {READINGS_PER_DAY} readings, repeating previous values");
                    let first = slots.iter().flatten().next().copied().unwrap();
                    let mut prev = first;
                    let readings = slots
                        .iter()
                        .map(|s| {
                            prev = s.unwrap_or(prev);
                            prev
                        })
                        .collect();
                    DailyProfile::new(date, readings)
                }
            }
        })
        .collect()
}

/// Inserts a flat `default_mbar` profile for every day in `from..=to` that has
/// no record. Profiles outside the range are kept as they are.
pub fn gap_fill_pressure(
    profiles: &[DailyProfile],
    from: NaiveDate,
    to: NaiveDate,
    default_mbar: f64,
) -> Vec<DailyProfile> {
    let mut by_date: BTreeMap<NaiveDate, DailyProfile> =
        profiles.iter().map(|p| (p.date(), p.clone())).collect();
    let mut day = from;
    while day <= to {
        by_date.entry(day).or_insert_with(|| {
            warn!("{day}: no semi-hourly pressure, filled with {default_mbar} mbar");
            DailyProfile::constant(day, default_mbar)
        });
        day = day + Days::new(1);
    }
    by_date.into_values().collect()
}

fn create(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

fn finish(path: &Path, mut w: csv::Writer<File>) -> Result<()> {
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn date_column(start: Option<NaiveDate>, label: &str) -> Result<NaiveDate> {
    start.ok_or_else(|| Error::InvalidParameter(format!("series `{label}` has no dates")))
}

/// Writes `date,<label>` rows for a dated daily series.
pub fn write_daily_csv(path: impl AsRef<Path>, s: &TimeSeries) -> Result<()> {
    let path = path.as_ref();
    let start = date_column(s.start_date(), s.label())?;
    let mut w = create(path)?;
    let io = |e| csv_error(path, e);
    w.write_record(["date", s.label()]).map_err(io)?;
    for (i, v) in s.values().iter().enumerate() {
        let date = start + Days::new(i as u64);
        w.write_record([date.to_string(), v.to_string()]).map_err(io)?;
    }
    finish(path, w)
}

pub fn write_weather_csv(path: impl AsRef<Path>, weather: &Weather) -> Result<()> {
    let path = path.as_ref();
    let series: Vec<&TimeSeries> = WeatherVar::ALL
        .iter()
        .map(|&v| weather.require(v))
        .collect::<Result<_>>()?;
    let start = date_column(series[0].start_date(), series[0].label())?;
    let mut w = create(path)?;
    let io = |e| csv_error(path, e);
    let mut header = vec!["date"];
    header.extend(WeatherVar::ALL.iter().map(|v| v.column()));
    w.write_record(&header).map_err(io)?;
    for i in 0..series[0].len() {
        let mut row = vec![(start + Days::new(i as u64)).to_string()];
        row.extend(series.iter().map(|s| s.values()[i].to_string()));
        w.write_record(&row).map_err(io)?;
    }
    finish(path, w)
}

pub fn write_hospitalizations_csv(path: impl AsRef<Path>, hosp: &TimeSeries) -> Result<()> {
    let path = path.as_ref();
    let start = date_column(hosp.start_date(), hosp.label())?;
    let mut w = create(path)?;
    let io = |e| csv_error(path, e);
    w.write_record(["date", "count"]).map_err(io)?;
    for (i, &v) in hosp.values().iter().enumerate() {
        if v < 0.0 || v.fract() != 0.0 {
            return Err(Error::InvalidParameter(format!("admission count {v} is not an integer")));
        }
        w.write_record([(start + Days::new(i as u64)).to_string(), (v as u64).to_string()])
            .map_err(io)?;
    }
    finish(path, w)
}

pub fn write_semi_hourly_csv(path: impl AsRef<Path>, profiles: &[DailyProfile]) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let io = |e| csv_error(path, e);
    w.write_record(["timestamp", "pressure"]).map_err(io)?;
    for p in profiles {
        for (slot, v) in p.readings().iter().enumerate() {
            let ts = p
                .date()
                .and_hms_opt(slot as u32 / 2, (slot as u32 % 2) * 30, 0)
                .unwrap();
            w.write_record([ts.format(TIMESTAMP_FORMAT).to_string(), v.to_string()])
                .map_err(io)?;
        }
    }
    finish(path, w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOptions {
    pub fill_mode: FillMode,
    /// Value for days with no semi-hourly record; `None` leaves gaps.
    pub gap_fill_mbar: Option<f64>,
    /// Skip the semi-hourly file entirely.
    pub daily_only: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            fill_mode: FillMode::Strict,
            gap_fill_mbar: Some(DEFAULT_FILL_MBAR),
            daily_only: false,
        }
    }
}

/// Admissions, daily weather and semi-hourly pressure over one date range.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub hospitalizations: TimeSeries,
    pub weather: Weather,
    pub semi_hourly_pressure: Vec<DailyProfile>,
}

impl Dataset {
    /// Trims every daily series to the common date range and drops
    /// profiles outside it.
    pub fn assemble(
        hospitalizations: TimeSeries,
        weather: Weather,
        semi_hourly_pressure: Vec<DailyProfile>,
    ) -> Result<Dataset> {
        let (from, to) = {
            let w = weather
                .any()
                .ok_or_else(|| Error::InvalidParameter("no weather series".into()))?;
            let span = |s: &TimeSeries| -> Result<(NaiveDate, NaiveDate)> {
                let a = date_column(s.start_date(), s.label())?;
                Ok((a, s.date_at(s.len() - 1).unwrap()))
            };
            hospitalizations.require_len(1)?;
            w.require_len(1)?;
            let (ha, hb) = span(&hospitalizations)?;
            let (wa, wb) = span(w)?;
            (ha.max(wa), hb.min(wb))
        };
        if from > to {
            return Err(Error::Misaligned(
                "admissions and weather do not share any date".into(),
            ));
        }
        let ds = Dataset {
            hospitalizations,
            weather,
            semi_hourly_pressure,
        };
        ds.restrict(Some(from), Some(to))
    }

    /// Keeps only `from..=to` (either bound optional).
    pub fn restrict(&self, from: Option<NaiveDate>, to: Option<NaiveDate>) -> Result<Dataset> {
        let trim = |s: &TimeSeries| -> Result<TimeSeries> {
            let start = date_column(s.start_date(), s.label())?;
            let lo = from.map_or(0, |f| (f - start).num_days().max(0)) as usize;
            let hi = to.map_or(s.len() as i64, |t| ((t - start).num_days() + 1).min(s.len() as i64));
            if hi <= lo as i64 {
                return Err(Error::EmptySeries {
                    label: s.label().to_string(),
                });
            }
            Ok(s.slice(lo.min(s.len()), hi as usize))
        };
        let hospitalizations = trim(&self.hospitalizations)?;
        let weather = Weather::new(
            self.weather
                .iter()
                .map(|(v, s)| trim(s).map(|t| (v, t)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let lo = hospitalizations.start_date().unwrap();
        let hi = hospitalizations.date_at(hospitalizations.len() - 1).unwrap();
        let semi_hourly_pressure = self
            .semi_hourly_pressure
            .iter()
            .filter(|p| p.date() >= lo && p.date() <= hi)
            .cloned()
            .collect();
        Ok(Dataset {
            hospitalizations,
            weather,
            semi_hourly_pressure,
        })
    }

    pub fn first_date(&self) -> NaiveDate {
        self.hospitalizations.start_date().unwrap()
    }

    pub fn last_date(&self) -> NaiveDate {
        self.hospitalizations
            .date_at(self.hospitalizations.len() - 1)
            .unwrap()
    }

    /// Loads the three standard files from `dir`. The semi-hourly file is
    /// optional; when present, missing days are filled per `options`.
    pub fn load_dir(dir: impl AsRef<Path>, options: LoadOptions) -> Result<Dataset> {
        let dir = dir.as_ref();
        let hosp = load_hospitalizations_csv(dir.join(HOSPITALIZATIONS_FILE))?;
        let weather = load_weather_csv(dir.join(WEATHER_FILE))?;
        let semi_path = dir.join(SEMI_HOURLY_FILE);
        let profiles = if options.daily_only {
            Vec::new()
        } else if semi_path.exists() {
            load_semi_hourly_csv(&semi_path, options.fill_mode)?
        } else {
            warn!("{}: not found, no semi-hourly pressure", semi_path.display());
            Vec::new()
        };
        let mut ds = Dataset::assemble(hosp, weather, profiles)?;
        if let (Some(mbar), false) = (options.gap_fill_mbar, ds.semi_hourly_pressure.is_empty()) {
            ds.semi_hourly_pressure =
                gap_fill_pressure(&ds.semi_hourly_pressure, ds.first_date(), ds.last_date(), mbar);
        }
        Ok(ds)
    }

    /// Writes the three standard files into `dir`, returning their paths.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        let paths = [WEATHER_FILE, HOSPITALIZATIONS_FILE, SEMI_HOURLY_FILE].map(|f| dir.join(f));
        write_weather_csv(&paths[0], &self.weather)?;
        write_hospitalizations_csv(&paths[1], &self.hospitalizations)?;
        write_semi_hourly_csv(&paths[2], &self.semi_hourly_pressure)?;
        Ok(paths.to_vec())
    }
}

/// Writes raw text, used for small fixtures.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}
