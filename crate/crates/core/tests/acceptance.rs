//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Every numeric comparison is against an oracle written here from first
//! principles (brute-force sums, quadrature, naive DFT) rather than against
//! the library's own helpers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use chrono::{Days, NaiveDate};
use meteocorr::analysis::{mobile_correlation, variation_grid, MOBILE_WINDOWS};
use meteocorr::autocorr::correlogram;
use meteocorr::finder::{enumerate_candidates, run_finder, FinderConfig, Transform};
use meteocorr::ingest::{Dataset, LoadOptions, Weather, WeatherVar, SEMI_HOURLY_FILE};
use meteocorr::peaks::{detect_peaks, pattern_series, window_stats, Pattern, PeakParams};
use meteocorr::spectral::{dft_magnitude, fourier_transform};
use meteocorr::stats::{pearson, spearman};
use meteocorr::synth::{generate, SynthConfig};
use meteocorr::variation::{delta_series, window_variation_report};
use meteocorr::TimeSeries;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2016, 1, 1).unwrap()
}

// ---------------------------------------------------------------- 1

fn worked_example() -> Outcome {
    let input = [900.0, 900.0, 900.0, 900.0, 900.0, 900.0, 1020.0, 900.0, 1000.0, 900.0];
    let s = TimeSeries::new("p", input.to_vec());
    let stats = window_stats(&s, 7).map_err(|e| e.to_string())?;
    let means = [917.14, 917.14, 931.43, 931.43];
    let stds = [41.99, 41.99, 49.97, 49.97];
    let mut worst: f64 = 0.0;
    for (i, &(m, sd)) in stats.iter().enumerate() {
        worst = worst.max((m - means[i]).abs()).max((sd - stds[i]).abs());
    }
    let params = PeakParams::new(7, 1.0).unwrap();
    let peaks = detect_peaks(&s, params).map_err(|e| e.to_string())?;
    let pat = pattern_series(&peaks, &Pattern::new(vec![1, 0, 1]).unwrap()).map_err(|e| e.to_string())?;
    let mut swapped = input;
    swapped.swap(6, 8);
    let peaks_swapped = detect_peaks(&TimeSeries::new("p", swapped.to_vec()), params).map_err(|e| e.to_string())?;
    check(
        stats.len() == 4
            && worst <= 0.01
            && peaks.values() == [1, 0, 1, 0]
            && pat.values() == [1, 0]
            && peaks_swapped.values() == [1, 0, 1, 0],
        format!(
            "max stat error {worst:.4} (tol 0.01), peaks {:?}, pattern {:?}, swapped {:?}",
            peaks.values(),
            pat.values(),
            peaks_swapped.values()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn oracle_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Average rank, 1-based, by counting.
fn oracle_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let below = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    // split into panels so narrow peaks are not missed by the first estimate
    let panels = 64;
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson(f, lo, hi, fa, fm, fb, whole, 1e-15, 40)
        })
        .sum()
}

/// Two-sided Student-t tail by quadrature of the unnormalised density,
/// mapped onto [0, 1) with x = s / (1 - s).
fn oracle_t_tail(t: f64, df: f64) -> f64 {
    let density = |x: f64| (1.0 + x * x / df).powf(-(df + 1.0) / 2.0);
    let mapped = |s: f64| {
        if s >= 1.0 {
            return 0.0;
        }
        let x = s / (1.0 - s);
        density(x) / ((1.0 - s) * (1.0 - s))
    };
    let t = t.abs();
    let total = integrate(&mapped, 0.0, 1.0);
    let tail = integrate(&mapped, t / (1.0 + t), 1.0);
    tail / total
}

fn oracle_p(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    if r.abs() >= 1.0 {
        return 0.0;
    }
    oracle_t_tail(r * (df / (1.0 - r * r)).sqrt(), df)
}

fn stats_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut err_r, mut err_rho, mut err_p) = (0.0f64, 0.0f64, 0.0f64);
    for case in 0..200 {
        let n = rng.random_range(10..=500);
        let slope: f64 = rng.random_range(-1.0..1.0);
        let noise: f64 = rng.random_range(0.05..3.0);
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
        let mut y: Vec<f64> = x.iter().map(|v| slope * v + noise * rng.random_range(-10.0..10.0)).collect();
        if case % 3 == 0 {
            // coarse rounding forces ties
            x.iter_mut().for_each(|v| *v = v.round());
            y.iter_mut().for_each(|v| *v = (*v / 2.0).round());
        }
        let xs = TimeSeries::new("x", x.clone());
        let ys = TimeSeries::new("y", y.clone());
        let p = pearson(&xs, &ys).map_err(|e| e.to_string())?;
        let s = spearman(&xs, &ys).map_err(|e| e.to_string())?;
        let r_oracle = oracle_pearson(&x, &y);
        let rho_oracle = oracle_pearson(&oracle_ranks(&x), &oracle_ranks(&y));
        err_r = err_r.max((p.value - r_oracle).abs());
        err_rho = err_rho.max((s.value - rho_oracle).abs());
        err_p = err_p
            .max((p.p - oracle_p(r_oracle, n)).abs())
            .max((s.p - oracle_p(rho_oracle, n)).abs());
    }
    check(
        err_r <= 1e-9 && err_rho <= 1e-9 && err_p <= 1e-6,
        format!("max |dr| {err_r:.2e}, |drho| {err_rho:.2e} (tol 1e-9), |dp| {err_p:.2e} (tol 1e-6)"),
    )
}

// ---------------------------------------------------------------- 3

fn naive_dft(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                // reduce k*j mod n before the angle to keep it accurate
                let phase = ((k * j) % n) as f64 / n as f64;
                let angle = -2.0 * std::f64::consts::PI * phase;
                re += v * angle.cos();
                im += v * angle.sin();
            }
            (re, im)
        })
        .collect()
}

fn dft_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut worst_rel, mut worst_parseval) = (0.0f64, 0.0f64);
    for &n in &[2usize, 3, 15, 16, 100, 1000] {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0) + 1000.0).collect();
        let oracle = naive_dft(&x);
        let mag: Vec<f64> = oracle.iter().map(|(re, im)| re.hypot(*im)).collect();
        let sp = dft_magnitude(&TimeSeries::new("x", x.clone())).map_err(|e| e.to_string())?;
        if sp.len() != n / 2 + 1 {
            return Err(format!("n = {n}: {} bins, expected {}", sp.len(), n / 2 + 1));
        }
        for (k, &m) in sp.magnitudes.iter().enumerate() {
            worst_rel = worst_rel.max((m - mag[k]).abs() / mag[k].max(f64::MIN_POSITIVE));
        }
        let full = fourier_transform(&x);
        for (k, c) in full.iter().enumerate() {
            worst_rel = worst_rel.max((c.norm() - mag[k]).abs() / mag[k].max(f64::MIN_POSITIVE));
        }
        let energy: f64 = x.iter().map(|v| v * v).sum();
        let spectral: f64 = full.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
        worst_parseval = worst_parseval.max((energy - spectral).abs() / energy);
    }
    check(
        worst_rel <= 1e-9 && worst_parseval <= 1e-6,
        format!("max relative magnitude error {worst_rel:.2e} (tol 1e-9), Parseval {worst_parseval:.2e} (tol 1e-6)"),
    )
}

// ---------------------------------------------------------------- 4

fn correlogram_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut r0_exact = true;
    for case in 0..50 {
        let n = rng.random_range(12..=400);
        let big_k = rng.random_range(1..=10usize).min(n - 2);
        let period = rng.random_range(2..=30) as f64;
        let y: Vec<f64> = (0..n)
            .map(|t| {
                let saw = (t as f64 % period) / period;
                if case % 2 == 0 {
                    saw * 10.0 + rng.random_range(-1.0..1.0)
                } else {
                    rng.random_range(0.0..100.0)
                }
            })
            .collect();
        let c = correlogram(&TimeSeries::new("y", y.clone()), big_k).map_err(|e| e.to_string())?;
        r0_exact &= c.get(0) == Some(1.0);

        let mean = y.iter().sum::<f64>() / n as f64;
        let mut denom = 0.0;
        for t in big_k..n {
            denom += (y[t] - mean) * (y[t] - mean);
        }
        for k in 0..=big_k {
            let mut num = 0.0;
            for t in big_k..n {
                num += (y[t] - mean) * (y[t - k] - mean);
            }
            worst = worst.max((c.get(k).unwrap() - num / denom).abs());
        }
    }
    check(
        r0_exact && worst <= 1e-12,
        format!("r_0 == 1 on all 50: {r0_exact}, max |r_k - oracle| {worst:.2e} (tol 1e-12)"),
    )
}

// ---------------------------------------------------------------- 5

fn planted_trend() -> Outcome {
    let synth = generate(&SynthConfig::default()).map_err(|e| e.to_string())?;
    let ds = &synth.dataset;
    let pressure = ds.weather.require(WeatherVar::Pressure).map_err(|e| e.to_string())?;
    let grid = mobile_correlation(pressure, &ds.hospitalizations, &MOBILE_WINDOWS).map_err(|e| e.to_string())?;
    let rs: Vec<f64> = grid.iter().map(|g| g.result.pearson_r).collect();
    let non_decreasing = rs.windows(2).all(|w| w[1].abs() >= w[0].abs());
    let last = *rs.last().unwrap();
    check(
        last <= -0.9 && non_decreasing,
        format!(
            "r by window {:?}: {}",
            MOBILE_WINDOWS,
            rs.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

// ---------------------------------------------------------------- 6

fn variation_detection() -> Outcome {
    // hand oracle: windows ending on days 2..5 have means 10, 10, 20, 20;
    // overall 15, the single 2-admission window 20, so +33.33%
    let d = TimeSeries::daily("d", start(), vec![10.0, 10.0, 10.0, 30.0, 10.0]);
    let h = TimeSeries::daily("h", start(), vec![0.0, 0.0, 0.0, 2.0, 0.0]);
    let hand = window_variation_report(&d, &h, 2)
        .and_then(|r| r.require_pct_increase())
        .map_err(|e| e.to_string())?;
    let hand_ok = (hand - 100.0 / 3.0).abs() <= 0.01;

    let pct_l4 = |cfg: &SynthConfig| -> Result<Option<f64>, String> {
        let s = generate(cfg).map_err(|e| e.to_string())?;
        let grid = variation_grid(&s.dataset.semi_hourly_pressure, &s.dataset.hospitalizations, &[4])
            .map_err(|e| e.to_string())?;
        Ok(grid[0].pct_increase_ge2)
    };
    let coupled = pct_l4(&SynthConfig::default())?;
    let control = pct_l4(&SynthConfig::uncoupled(SynthConfig::default().seed))?;
    let ok = match (coupled, control) {
        (Some(c), Some(u)) => c > 0.0 && c > u,
        (Some(c), None) => c > 0.0,
        _ => false,
    };
    check(
        hand_ok && ok,
        format!("hand oracle {hand:.4}% (expect 33.33 +/- 0.01), L=4 coupled {coupled:?}%, control {control:?}%"),
    )
}

// ---------------------------------------------------------------- 7

fn daily(label: &str, values: Vec<f64>) -> TimeSeries {
    TimeSeries::daily(label, start(), values)
}

fn noise_weather(rng: &mut ChaCha8Rng, n: usize, pressure: Option<Vec<f64>>) -> Weather {
    let mut cols = Vec::new();
    for var in WeatherVar::ALL {
        let values = match (&pressure, var) {
            (Some(p), WeatherVar::Pressure) => p.clone(),
            _ => (0..n).map(|_| rng.random_range(0.0..20.0)).collect(),
        };
        cols.push((var, daily(var.column(), values)));
    }
    Weather::new(cols).unwrap()
}

fn naive_occurs(haystack: &[i8], needle: &[i8]) -> bool {
    (0..haystack.len())
        .filter(|&s| s + needle.len() <= haystack.len())
        .any(|s| (0..needle.len()).all(|k| haystack[s + k] == needle[k]))
}

fn finder_checks() -> Outcome {
    let n = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // flat pressure with isolated spikes; admissions follow three days later
    let mut pressure = vec![1015.0; n];
    let mut spike = vec![false; n];
    let mut t = 10;
    while t < n - 3 {
        pressure[t] += 12.0;
        spike[t] = true;
        t += rng.random_range(8..30);
    }
    let hosp: Vec<f64> = (0..n)
        .map(|i| {
            let planted = if i >= 3 && spike[i - 3] { 3.0 } else { 0.0 };
            planted + if rng.random_bool(0.03) { 1.0 } else { 0.0 }
        })
        .collect();
    let weather = noise_weather(&mut rng, n, Some(pressure));
    let config = FinderConfig::default();
    let candidates = enumerate_candidates(&config, &weather).map_err(|e| e.to_string())?;
    let report = run_finder(&candidates, &weather, &daily("hospitalizations", hosp), &config).map_err(|e| e.to_string())?;
    let ranked = report.ranked();
    let (top, top_r) = ranked[0];
    let planted_ok = top.source == WeatherVar::Pressure
        && top.transform == Transform::Peaks { lag: 3 }
        && top_r.pearson_r.abs() > 0.9
        && report.best_pearson.as_ref().map(|b| &b.candidate) == Some(top);

    // independent admissions and weather
    let noise = noise_weather(&mut rng, n, None);
    let hosp_noise: Vec<f64> = (0..n).map(|_| rng.random_range(0..4) as f64).collect();
    let cands = enumerate_candidates(&config, &noise).map_err(|e| e.to_string())?;
    let noise_report = run_finder(&cands, &noise, &daily("hospitalizations", hosp_noise), &config).map_err(|e| e.to_string())?;
    let strongest = noise_report.ranked()[0].1.strength();

    // enumeration counts
    let six_by_seven = FinderConfig {
        include_peaks: false,
        patterns: Vec::new(),
        ..FinderConfig::default()
    };
    let count_48 = enumerate_candidates(&six_by_seven, &noise).map_err(|e| e.to_string())?.len();
    let mut expected_full = 0;
    let mut per_source: BTreeMap<WeatherVar, usize> = BTreeMap::new();
    for &src in &config.sources {
        let peaks = detect_peaks(noise.require(src).unwrap(), config.peak_params).unwrap();
        let present = config.patterns.iter().filter(|p| naive_occurs(peaks.values(), p.elements())).count();
        let c = 1 + config.variation_days.len() + (config.max_lag + 1) + present;
        per_source.insert(src, c);
        expected_full += c;
    }
    let full = cands.len();

    check(
        planted_ok && !noise_report.relevant && count_48 == 48 && full == expected_full,
        format!(
            "top `{top}` r = {:.4}; noise max strength {strongest:.4} relevant = {}; counts {count_48} (expect 48), full {full} (expect {expected_full})",
            top_r.pearson_r, noise_report.relevant
        ),
    )
}

// ---------------------------------------------------------------- 8

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_meteocorr"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim()))
    }
}

fn files_under(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap());
    }
    out
}

const SUBCOMMANDS: [&str; 9] = [
    "correlogram",
    "seasonal-adjust",
    "scatter",
    "mobile-corr",
    "peaks",
    "patterns",
    "daily-variation",
    "spectrum",
    "find-correlations",
];

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut digests = Vec::new();
    for run in 0..2 {
        let root = tmp.path().join(format!("run{run}"));
        let data = root.join("data");
        let data_s = data.to_str().unwrap();
        run_cli(&["synth", "--out-dir", data_s, "--seed", "11", "--days", "800", "--format", "json"])?;
        let mut produced = vec![("synth".to_string(), files_under(&data))];
        for cmd in SUBCOMMANDS {
            let out = root.join(cmd);
            run_cli(&[
                cmd,
                "--input-dir",
                data_s,
                "--out-dir",
                out.to_str().unwrap(),
                "--format",
                "csv",
                "--format",
                "json",
            ])?;
            produced.push((cmd.to_string(), files_under(&out)));
        }
        digests.push(produced);
    }
    let mut files = 0;
    let mut differing = Vec::new();
    for ((cmd, a), (_, b)) in digests[0].iter().zip(&digests[1]) {
        if a.is_empty() || a != b {
            differing.push(cmd.clone());
        }
        files += a.len();
    }
    check(
        differing.is_empty(),
        format!("{} commands, {files} files compared; differing or empty: {differing:?}", digests[0].len()),
    )
}

// ---------------------------------------------------------------- 9

fn ingest_checks() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = SynthConfig {
        days: 60,
        ..SynthConfig::default()
    };
    let ds = generate(&cfg).map_err(|e| e.to_string())?.dataset;
    let a = tmp.path().join("a");
    ds.write_dir(&a).map_err(|e| e.to_string())?;
    let back = Dataset::load_dir(&a, LoadOptions::default()).map_err(|e| e.to_string())?;

    let bits = |s: &TimeSeries| s.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    let mut exact = bits(&back.hospitalizations) == bits(&ds.hospitalizations)
        && back.semi_hourly_pressure.len() == ds.semi_hourly_pressure.len();
    for (var, s) in ds.weather.iter() {
        exact &= back.weather.get(var).map(bits) == Some(bits(s)) && back.weather.get(var).unwrap().start() == s.start();
    }
    for (p, q) in ds.semi_hourly_pressure.iter().zip(&back.semi_hourly_pressure) {
        exact &= p.date() == q.date()
            && p.readings().iter().map(|v| v.to_bits()).eq(q.readings().iter().map(|v| v.to_bits()));
    }
    let b = tmp.path().join("b");
    back.write_dir(&b).map_err(|e| e.to_string())?;
    let bytes_equal = files_under(&a) == files_under(&b);

    // drop one whole day from the semi-hourly file
    let gap = start() + Days::new(20);
    let semi = std::fs::read_to_string(a.join(SEMI_HOURLY_FILE)).unwrap();
    let prefix = gap.format("%Y-%m-%d").to_string();
    let kept: Vec<&str> = semi.lines().filter(|l| !l.starts_with(&prefix)).collect();
    let dropped = semi.lines().count() - kept.len();
    std::fs::write(a.join(SEMI_HOURLY_FILE), kept.join("\n") + "\n").unwrap();
    let filled = Dataset::load_dir(&a, LoadOptions::default()).map_err(|e| e.to_string())?;
    let deltas = delta_series(&filled.semi_hourly_pressure).map_err(|e| e.to_string())?;
    let idx = (gap - deltas.start_date().unwrap()).num_days() as usize;
    let gap_delta = deltas.values()[idx];
    let neighbours_nonzero = deltas.values()[idx - 1] > 0.0 && deltas.values()[idx + 1] > 0.0;

    check(
        exact && bytes_equal && dropped == 48 && gap_delta == 0.0 && neighbours_nonzero,
        format!(
            "round trip bit-exact {exact}, rewritten bytes equal {bytes_equal}; {dropped} readings removed on {gap}, daily_delta there {gap_delta}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked example exactness", worked_example),
        ("statistics oracle equivalence", stats_oracles),
        ("DFT oracle equivalence", dft_oracle),
        ("correlogram", correlogram_oracle),
        ("planted trend recovery", planted_trend),
        ("variation detection", variation_detection),
        ("correlation finder", finder_checks),
        ("CLI determinism", determinism),
        ("ingest round trip and gap fill", ingest_checks),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = f();
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("acceptance {} {name}: PASS ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {} {name}: FAIL ({detail}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
