//! Command-line surface. Every subcommand loads the standard input files,
//! runs one analysis and writes CSV, JSON and/or SVG files into `--out-dir`.
//!
//! Failures print a single `E_<CLASS>: message` line on stderr and exit with
//! a class-specific status (see [`ErrorClass`]).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::{self, MOBILE_WINDOWS};
use crate::autocorr::{correlogram, DEFAULT_MAX_LAG};
use crate::error::{Error, ErrorClass, Result};
use crate::finder::{self, FinderConfig, DEFAULT_THRESHOLD};
use crate::ingest::{write_text, Dataset, FillMode, LoadOptions, WeatherVar, DEFAULT_FILL_MBAR};
use crate::peaks::{detect_peaks, pattern_series, Pattern, PeakParams};
use crate::plot::{Figure, BLUE, GREEN, ORANGE, RED};
use crate::series::{align_pair, Range, TimeSeries};
use crate::stats::correlate;
use crate::synth::{self, SynthConfig};

#[derive(Debug, Parser)]
#[command(name = "meteocorr", version, about = "Weather vs. hospital admissions time-series analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plot,
}

/// A daily input series: admissions or one weather column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesName {
    Hospitalizations,
    Weather(WeatherVar),
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<SeriesName> {
        if s == "hospitalizations" {
            Ok(SeriesName::Hospitalizations)
        } else {
            s.parse().map(SeriesName::Weather)
        }
    }
}

impl std::fmt::Display for SeriesName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeriesName::Hospitalizations => f.write_str("hospitalizations"),
            SeriesName::Weather(v) => write!(f, "{v}"),
        }
    }
}

/// Inclusive list of lengths: `2..7`, `1,3,5` or a single value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lengths(pub Vec<usize>);

impl FromStr for Lengths {
    type Err = Error;

    fn from_str(s: &str) -> Result<Lengths> {
        let bad = || Error::InvalidParameter(format!("bad length list `{s}`"));
        let num = |p: &str| p.trim().parse::<usize>().map_err(|_| bad());
        let values: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            (a..=b).collect()
        } else {
            s.split(',').map(num).collect::<Result<_>>()?
        };
        if values.is_empty() {
            return Err(bad());
        }
        Ok(Lengths(values))
    }
}

fn parse_date(s: &str) -> std::result::Result<NaiveDate, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| format!("`{s}` is not YYYY-MM-DD: {e}"))
}

fn parse_with<T: FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Directory holding weather.csv, hospitalizations.csv and pressure_semi_hourly.csv
    #[arg(long, default_value = "data")]
    pub input_dir: PathBuf,
    /// Directory receiving the output files
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
    /// First date to analyse (YYYY-MM-DD)
    #[arg(long, value_parser = parse_date)]
    pub from: Option<NaiveDate>,
    /// Last date to analyse (YYYY-MM-DD)
    #[arg(long, value_parser = parse_date)]
    pub to: Option<NaiveDate>,
    /// Output formats; repeat for several
    #[arg(long = "format", value_enum, default_values_t = [Format::Csv])]
    pub formats: Vec<Format>,
    /// Complete semi-hourly days with missing readings by repeating the previous reading
    #[arg(long)]
    pub fill_incomplete: bool,
}

#[derive(Debug, Clone, Args)]
pub struct PeakArgs {
    /// Peak window length in days
    #[arg(long, default_value_t = 7)]
    pub peak_w: usize,
    /// Peak threshold in standard deviations
    #[arg(long, default_value_t = 1.0)]
    pub peak_f: f64,
}

impl PeakArgs {
    fn params(&self) -> Result<PeakParams> {
        PeakParams::new(self.peak_w, self.peak_f)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Autocorrelation coefficients r_k for k = 0..max-lag
    Correlogram {
        #[command(flatten)]
        common: Common,
        /// Series to analyse; repeat for several
        #[arg(long = "series", value_parser = parse_with::<SeriesName>, default_values = ["pressure", "hospitalizations"])]
        series: Vec<SeriesName>,
        #[arg(long, default_value_t = DEFAULT_MAX_LAG)]
        max_lag: usize,
        /// Min-max normalise onto [0, 1] first
        #[arg(long)]
        normalise: bool,
    },
    /// Trailing moving mean of pressure and admissions
    SeasonalAdjust {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 365)]
        window: usize,
    },
    /// Scatter of a weather series (or its day-to-day variation) against admissions
    Scatter {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_with::<WeatherVar>, default_value = "pressure")]
        series: WeatherVar,
        /// Use the change over this many days instead of raw values
        #[arg(long)]
        variation: Option<usize>,
    },
    /// Correlation of moving means over several window lengths
    MobileCorr {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_with::<WeatherVar>, default_value = "pressure")]
        series: WeatherVar,
        /// Window lengths in days; repeat for several
        #[arg(long = "window", default_values_t = MOBILE_WINDOWS)]
        windows: Vec<usize>,
    },
    /// Positive/negative peak series
    Peaks {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_with::<WeatherVar>, default_value = "pressure")]
        series: WeatherVar,
        #[command(flatten)]
        peak: PeakArgs,
    },
    /// Occurrences of peak patterns overlaid on admissions
    Patterns {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_with::<WeatherVar>, default_value = "pressure")]
        series: WeatherVar,
        #[command(flatten)]
        peak: PeakArgs,
        /// Pattern such as `1,0,-1`; repeat for several
        #[arg(long = "pattern", value_parser = parse_with::<Pattern>, default_values = ["1,-1,1", "1,0,1", "1,0,-1"], allow_hyphen_values = true)]
        patterns: Vec<Pattern>,
    },
    /// Intra-day pressure variation grouped by admissions on the window's last day
    DailyVariation {
        #[command(flatten)]
        common: Common,
        /// Window lengths in days, e.g. `2..7`
        #[arg(long, value_parser = parse_with::<Lengths>, default_value = "2..7")]
        lengths: Lengths,
    },
    /// Magnitude spectra of semi-hourly pressure and expanded admissions
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Keep the zero-frequency bin instead of clearing it
        #[arg(long)]
        no_zero_dc: bool,
    },
    /// Scan weather series and transformations for the strongest correlation
    FindCorrelations {
        #[command(flatten)]
        common: Common,
        /// Weather series to scan; repeat for several
        #[arg(long = "series", value_parser = parse_with::<WeatherVar>, default_values = ["pressure", "temp_min", "temp_avg", "temp_max", "wind_avg", "wind_max"])]
        series: Vec<WeatherVar>,
        /// Variation intervals in days
        #[arg(long, value_parser = parse_with::<Lengths>, default_value = "1..7")]
        lengths: Lengths,
        #[command(flatten)]
        peak: PeakArgs,
        /// Largest lag (days) between a peak series and admissions
        #[arg(long, default_value_t = finder::DEFAULT_MAX_LAG)]
        max_lag: usize,
        /// Relevance threshold on |r| or |rho|
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long = "pattern", value_parser = parse_with::<Pattern>, default_values = ["1,-1,1", "1,0,1", "1,0,-1"], allow_hyphen_values = true)]
        patterns: Vec<Pattern>,
    },
    /// Write a seeded synthetic dataset in the three input formats
    Synth {
        #[arg(long, default_value = "data")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "2016-01-01", value_parser = parse_date)]
        start: NaiveDate,
        #[arg(long, default_value_t = 1096)]
        days: usize,
        /// Pressure trend in mbar per year
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        pressure_trend: f64,
        /// Amplitude of the annual pressure cycle (mbar)
        #[arg(long, default_value_t = 4.0)]
        seasonal_amplitude: f64,
        /// Expected daily admissions at the start
        #[arg(long, default_value_t = 0.6)]
        hosp_base: f64,
        /// Change in expected daily admissions per year
        #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
        hosp_trend: f64,
        /// Daily probability of an admission burst preceded by pressure oscillation
        #[arg(long, default_value_t = 0.04)]
        coupling_rate: f64,
        /// Amplitude of the oscillation preceding a burst (mbar)
        #[arg(long, default_value_t = 0.15)]
        coupling_amplitude: f64,
        /// Days between the oscillation and the burst
        #[arg(long, default_value_t = 0)]
        coupling_lag: usize,
        /// Also write the generator settings (json)
        #[arg(long = "format", value_enum)]
        formats: Vec<Format>,
    },
}

/// Writes the requested formats of each artifact into one directory.
struct Output {
    dir: PathBuf,
    formats: Vec<Format>,
    written: Vec<PathBuf>,
}

/// Shortest round-trip text; switches to exponent form for tiny p-values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl Output {
    fn new(dir: &Path, formats: &[Format]) -> Result<Output> {
        Ok(Output {
            dir: dir.to_path_buf(),
            formats: formats.to_vec(),
            written: Vec::new(),
        })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    // created on first write so a failed run leaves nothing behind
    fn path(&self, name: &str, ext: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.dir).map_err(|source| Error::Io {
            path: self.dir.clone(),
            source,
        })?;
        Ok(self.dir.join(format!("{name}.{ext}")))
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        if !self.wants(Format::Csv) {
            return Ok(());
        }
        let path = self.path(name, "csv")?;
        let mut w = csv::Writer::from_path(&path).map_err(|source| Error::Csv {
            path: path.clone(),
            source,
        })?;
        let err = |source| Error::Csv {
            path: path.clone(),
            source,
        };
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(row).map_err(err)?;
        }
        w.flush().map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        if !self.wants(Format::Json) {
            return Ok(());
        }
        let path = self.path(name, "json")?;
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        write_text(&path, &text)?;
        self.written.push(path);
        Ok(())
    }

    fn plot(&mut self, name: &str, figure: impl FnOnce() -> Figure) -> Result<()> {
        if !self.wants(Format::Plot) {
            return Ok(());
        }
        let path = self.path(name, "svg")?;
        figure().save(&path)?;
        self.written.push(path);
        Ok(())
    }
}

fn load(common: &Common, daily_only: bool) -> Result<Dataset> {
    let options = LoadOptions {
        fill_mode: if common.fill_incomplete {
            FillMode::RepeatLast
        } else {
            FillMode::Strict
        },
        gap_fill_mbar: Some(DEFAULT_FILL_MBAR),
        daily_only,
    };
    let ds = Dataset::load_dir(&common.input_dir, options)?;
    if common.from.is_some() || common.to.is_some() {
        ds.restrict(common.from, common.to)
    } else {
        Ok(ds)
    }
}

fn pick(ds: &Dataset, name: SeriesName) -> Result<TimeSeries> {
    match name {
        SeriesName::Hospitalizations => Ok(ds.hospitalizations.clone()),
        SeriesName::Weather(v) => ds.weather.require(v).cloned(),
    }
}

/// `(day offset from epoch, value)` pairs for dated plots.
fn dated_points(s: &TimeSeries, epoch: NaiveDate) -> Vec<(f64, f64)> {
    s.values()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let day = s.date_at(i).map_or(i as f64, |d| (d - epoch).num_days() as f64);
            (day, v)
        })
        .collect()
}

fn date_cell(s: &TimeSeries, i: usize) -> String {
    s.date_at(i).map(|d| d.to_string()).unwrap_or_else(|| i.to_string())
}

fn pattern_slug(p: &Pattern) -> String {
    p.elements()
        .iter()
        .map(|&e| match e {
            -1 => "m1".to_string(),
            e => e.to_string(),
        })
        .collect::<Vec<_>>()
        .join("_")
}

fn correlation_row(r: &crate::stats::CorrelationResult) -> Vec<String> {
    vec![
        r.n.to_string(),
        num(r.pearson_r),
        num(r.pearson_p),
        num(r.spearman_rho),
        num(r.spearman_p),
    ]
}

const CORRELATION_HEADER: [&str; 5] = ["n", "pearson_r", "pearson_p", "spearman_rho", "spearman_p"];

/// Runs one parsed command, returning the files it wrote.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    match cli.command {
        Command::Correlogram {
            common,
            series,
            max_lag,
            normalise,
        } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            for name in series {
                let mut s = pick(&ds, name)?;
                let mut tag = name.to_string();
                if normalise {
                    s = s.normalise(Range::unit())?;
                    tag.push_str("_normalised");
                }
                let c = correlogram(&s, max_lag)?;
                let rows: Vec<Vec<String>> = c
                    .coefficients
                    .iter()
                    .map(|(k, r)| vec![k.to_string(), r.to_string()])
                    .collect();
                let file = format!("correlogram_{tag}");
                out.csv(&file, &["k", "r_k"], &rows)?;
                out.json(&file, &c)?;
                out.plot(&file, || {
                    Figure::new(format!("Correlogram of {tag}"))
                        .x_label("lag k (days)")
                        .y_label("r_k")
                        .bars(c.coefficients.iter().map(|&(k, r)| (k as f64, r)).collect(), BLUE)
                })?;
            }
            Ok(out.written)
        }

        Command::SeasonalAdjust { common, window } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let epoch = ds.first_date();
            for name in [SeriesName::Weather(WeatherVar::Pressure), SeriesName::Hospitalizations] {
                let raw = pick(&ds, name)?;
                let mm = raw.mobile_mean(window, None)?;
                let rows: Vec<Vec<String>> = (0..mm.len())
                    .map(|i| vec![date_cell(&mm, i), mm.values()[i].to_string()])
                    .collect();
                let file = format!("seasonal_{name}_{window}");
                out.csv(&file, &["date", "moving_mean"], &rows)?;
                out.json(
                    &file,
                    &serde_json::json!({
                        "series": name.to_string(),
                        "window": window,
                        "start": mm.start_date(),
                        "values": mm.values(),
                    }),
                )?;
                out.plot(&file, || {
                    Figure::new(format!("{window}-day moving mean of {name}"))
                        .dated_x(epoch)
                        .y_label(name.to_string())
                        .line(dated_points(&mm, epoch), BLUE, "")
                })?;
            }
            Ok(out.written)
        }

        Command::Scatter {
            common,
            series,
            variation,
        } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let raw = ds.weather.require(series)?;
            let (x, tag) = match variation {
                Some(0) => return Err(Error::InvalidParameter("variation must be at least 1 day".into())),
                Some(days) => (raw.variation_series(days + 1, false)?, format!("{series}_variation{days}")),
                None => (raw.clone(), series.to_string()),
            };
            let (x, y) = align_pair(&x, &ds.hospitalizations, 0)?;
            let r = correlate(&x, &y)?;
            let rows: Vec<Vec<String>> = (0..x.len())
                .map(|i| vec![date_cell(&x, i), x.values()[i].to_string(), y.values()[i].to_string()])
                .collect();
            let file = format!("scatter_{tag}");
            out.csv(&file, &["date", &tag, "hospitalizations"], &rows)?;
            out.csv(&format!("{file}_stats"), &CORRELATION_HEADER, &[correlation_row(&r)])?;
            out.json(&file, &r)?;
            out.plot(&file, || {
                Figure::new(format!("{tag} vs hospitalizations"))
                    .x_label(tag.clone())
                    .y_label("hospitalizations")
                    .scatter(x.values().iter().copied().zip(y.values().iter().copied()).collect(), BLUE)
            })?;
            Ok(out.written)
        }

        Command::MobileCorr {
            common,
            series,
            windows,
        } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let x = ds.weather.require(series)?;
            let grid = analysis::mobile_correlation(x, &ds.hospitalizations, &windows)?;
            let rows: Vec<Vec<String>> = grid
                .iter()
                .map(|g| {
                    vec![
                        g.window.to_string(),
                        num(g.result.pearson_r),
                        num(g.result.pearson_p),
                        num(g.result.spearman_rho),
                        num(g.result.spearman_p),
                    ]
                })
                .collect();
            out.csv(
                "mobile_corr",
                &["window", "pearson_r", "pearson_p", "spearman_rho", "spearman_p"],
                &rows,
            )?;
            out.json("mobile_corr", &grid)?;
            for g in &grid {
                let mx = x.mobile_mean(g.window, None)?;
                let my = ds.hospitalizations.mobile_mean(g.window, None)?;
                out.plot(&format!("mobile_corr_{}", g.window), || {
                    Figure::new(format!(
                        "{}-day moving means: r = {:.4}, rho = {:.4}",
                        g.window, g.result.pearson_r, g.result.spearman_rho
                    ))
                    .x_label(series.to_string())
                    .y_label("hospitalizations")
                    .scatter(mx.values().iter().copied().zip(my.values().iter().copied()).collect(), BLUE)
                })?;
            }
            Ok(out.written)
        }

        Command::Peaks { common, series, peak } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let s = ds.weather.require(series)?;
            let params = peak.params()?;
            let peaks = detect_peaks(s, params)?;
            let off = peaks.source_offset();
            let rows: Vec<Vec<String>> = peaks
                .values()
                .iter()
                .enumerate()
                .map(|(i, p)| vec![date_cell(s, i + off), s.values()[i + off].to_string(), p.to_string()])
                .collect();
            let file = format!("peaks_{series}");
            out.csv(&file, &["date", series.column(), "peak"], &rows)?;
            out.json(
                &file,
                &serde_json::json!({
                    "series": series.to_string(),
                    "window": params.window(),
                    "factor": params.factor(),
                    "positive": peaks.count(1),
                    "negative": peaks.count(-1),
                    "start": peaks.to_series().start_date(),
                    "peaks": peaks.values(),
                }),
            )?;
            let epoch = ds.first_date();
            out.plot(&file, || {
                let at = |sign: i8| -> Vec<f64> {
                    peaks
                        .values()
                        .iter()
                        .enumerate()
                        .filter(|(_, &p)| p == sign)
                        .map(|(i, _)| (i + off) as f64)
                        .collect()
                };
                Figure::new(format!("Peaks of {series} (w = {}, f = {})", params.window(), params.factor()))
                    .dated_x(epoch)
                    .y_label(series.to_string())
                    .markers(at(1), RED)
                    .markers(at(-1), GREEN)
                    .line(dated_points(s, epoch), BLUE, "")
            })?;
            Ok(out.written)
        }

        Command::Patterns {
            common,
            series,
            peak,
            patterns,
        } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let s = ds.weather.require(series)?;
            let peaks = detect_peaks(s, peak.params()?)?;
            let epoch = ds.first_date();
            let mut summary = Vec::new();
            for pattern in &patterns {
                let occ = pattern_series(&peaks, pattern)?.to_series();
                let (occ, hosp) = align_pair(&occ, &ds.hospitalizations, 0)?;
                let rows: Vec<Vec<String>> = (0..occ.len())
                    .map(|i| {
                        vec![
                            date_cell(&occ, i),
                            occ.values()[i].to_string(),
                            hosp.values()[i].to_string(),
                        ]
                    })
                    .collect();
                let file = format!("pattern_{series}_{}", pattern_slug(pattern));
                out.csv(&file, &["date", "occurrence", "hospitalizations"], &rows)?;
                let count = occ.values().iter().filter(|&&v| v == 1.0).count();
                summary.push(serde_json::json!({
                    "pattern": pattern.to_string(),
                    "occurrences": count,
                    "span_days": crate::peaks::pattern_span(peaks.params(), pattern.len()),
                }));
                out.plot(&file, || {
                    let marks = (0..occ.len())
                        .filter(|&i| occ.values()[i] == 1.0)
                        .filter_map(|i| occ.date_at(i))
                        .map(|d| (d - epoch).num_days() as f64)
                        .collect();
                    Figure::new(format!("Pattern {pattern} of {series} peaks vs hospitalizations"))
                        .dated_x(epoch)
                        .y_label("hospitalizations")
                        .markers(marks, ORANGE)
                        .line(dated_points(&ds.hospitalizations, epoch), BLUE, "")
                })?;
            }
            out.json(&format!("patterns_{series}"), &summary)?;
            Ok(out.written)
        }

        Command::DailyVariation { common, lengths } => {
            let ds = load(&common, false)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let reports = analysis::variation_grid(&ds.semi_hourly_pressure, &ds.hospitalizations, &lengths.0)?;
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.interval_length.to_string(),
                        r.windows.to_string(),
                        r.overall_mean.to_string(),
                        fmt_opt(r.mean_ge2),
                        fmt_opt(r.pct_increase_ge2),
                    ]
                })
                .collect();
            out.csv(
                "daily_variation",
                &["length", "windows", "overall_mean", "mean_ge2", "pct_increase_ge2"],
                &rows,
            )?;
            out.json("daily_variation", &reports)?;
            for r in &reports {
                let file = format!("daily_variation_L{}", r.interval_length);
                let rows: Vec<Vec<String>> = r
                    .groups
                    .iter()
                    .map(|g| vec![g.count.to_string(), g.windows.to_string(), g.mean_variation.to_string()])
                    .collect();
                out.csv(&file, &["hospitalizations", "windows", "mean_variation"], &rows)?;
                out.plot(&file, || {
                    let pts = r.groups.iter().map(|g| (f64::from(g.count), g.mean_variation)).collect();
                    let weights: Vec<f64> = r.groups.iter().map(|g| g.windows as f64).collect();
                    Figure::new(format!(
                        "Mean {}-day pressure variation by admissions on the last day",
                        r.interval_length
                    ))
                    .x_label("hospitalizations")
                    .y_label("mean daily variation (mbar)")
                    .bubbles(pts, &weights, BLUE)
                })?;
            }
            Ok(out.written)
        }

        Command::Spectrum { common, no_zero_dc } => {
            let ds = load(&common, false)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let pair = analysis::spectrum_pair(&ds.semi_hourly_pressure, &ds.hospitalizations, !no_zero_dc)?;
            for (name, sp) in [("pressure", &pair.pressure), ("hospitalizations", &pair.hospitalizations)] {
                let file = format!("spectrum_{name}");
                let rows: Vec<Vec<String>> = sp
                    .frequencies
                    .iter()
                    .zip(&sp.magnitudes)
                    .map(|(f, m)| vec![f.to_string(), m.to_string()])
                    .collect();
                out.csv(&file, &["frequency_per_day", "magnitude"], &rows)?;
                out.json(&file, sp)?;
                out.plot(&file, || {
                    Figure::new(format!("Spectrum of {name}"))
                        .x_label("frequency (1/days)")
                        .y_label("magnitude")
                        .line(sp.frequencies.iter().copied().zip(sp.magnitudes.iter().copied()).collect(), BLUE, "")
                })?;
            }
            Ok(out.written)
        }

        Command::FindCorrelations {
            common,
            series,
            lengths,
            peak,
            max_lag,
            threshold,
            patterns,
        } => {
            let ds = load(&common, true)?;
            let mut out = Output::new(&common.out_dir, &common.formats)?;
            let config = FinderConfig {
                sources: series,
                include_raw: true,
                variation_days: lengths.0,
                include_peaks: true,
                peak_params: peak.params()?,
                max_lag,
                patterns,
                threshold,
            };
            let candidates = finder::enumerate_candidates(&config, &ds.weather)?;
            let report = finder::run_finder(&candidates, &ds.weather, &ds.hospitalizations, &config)?;
            let rows: Vec<Vec<String>> = report
                .ranked()
                .iter()
                .enumerate()
                .map(|(i, (c, r))| {
                    let mut row = vec![(i + 1).to_string(), c.to_string()];
                    row.extend(correlation_row(r));
                    row
                })
                .collect();
            let mut header = vec!["rank", "candidate"];
            header.extend(CORRELATION_HEADER);
            out.csv("find_correlations", &header, &rows)?;
            out.json("find_correlations", &report)?;
            for (tag, best) in [("pearson", &report.best_pearson), ("spearman", &report.best_spearman)] {
                let Some(best) = best else { continue };
                let s = finder::candidate_series(&best.candidate, &ds.weather, config.peak_params)?;
                let (x, y) = align_pair(&s, &ds.hospitalizations, best.candidate.lag() as i64)?;
                let name = best.candidate.to_string();
                out.plot(&format!("find_correlations_best_{tag}_series"), || {
                    let norm = |t: &TimeSeries| t.normalise(Range::unit()).unwrap_or_else(|_| t.clone());
                    let idx = |t: &TimeSeries| t.values().iter().enumerate().map(|(i, &v)| (i as f64, v)).collect();
                    Figure::new(format!("Best {tag}: {name} vs hospitalizations (normalised)"))
                        .x_label("day")
                        .line(idx(&norm(&x)), BLUE, name.clone())
                        .line(idx(&norm(&y)), ORANGE, "hospitalizations")
                })?;
                out.plot(&format!("find_correlations_best_{tag}_scatter"), || {
                    Figure::new(format!(
                        "{name}: r = {:.4}, rho = {:.4}",
                        best.result.pearson_r, best.result.spearman_rho
                    ))
                    .x_label(name.clone())
                    .y_label("hospitalizations")
                    .scatter(x.values().iter().copied().zip(y.values().iter().copied()).collect(), BLUE)
                })?;
            }
            println!(
                "{} candidates evaluated; relevant at threshold {}: {}",
                report.candidates_evaluated, report.threshold, report.relevant
            );
            Ok(out.written)
        }

        Command::Synth {
            out_dir,
            seed,
            start,
            days,
            pressure_trend,
            seasonal_amplitude,
            hosp_base,
            hosp_trend,
            coupling_rate,
            coupling_amplitude,
            coupling_lag,
            formats,
        } => {
            let config = SynthConfig {
                seed,
                start,
                days,
                pressure_trend,
                seasonal_amplitude,
                hosp_base,
                hosp_trend,
                episode_rate: coupling_rate,
                episode_amplitude: coupling_amplitude,
                episode_lag: coupling_lag,
                ..SynthConfig::default()
            };
            let generated = synth::generate(&config)?;
            let mut written = generated.dataset.write_dir(&out_dir)?;
            let mut out = Output::new(&out_dir, &formats)?;
            out.json(
                "synth_config",
                &serde_json::json!({ "config": config, "burst_days": generated.burst_days }),
            )?;
            written.extend(out.written);
            Ok(written)
        }
    }
}

/// Parses arguments, runs, and returns the process exit status.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            0
        }
        Err(e) => {
            let class: ErrorClass = e.class();
            eprintln!("{}: {e}", class.code());
            class.exit_status()
        }
    }
}
