//! Pearson and Spearman correlation of pressure and admissions, raw and
//! after smoothing with longer and longer moving means.
//!
//! cargo run --example mobile_correlation

use meteocorr::analysis::{mobile_correlation, MOBILE_WINDOWS};
use meteocorr::ingest::WeatherVar;
use meteocorr::stats::correlate;
use meteocorr::synth::{generate, SynthConfig};
use meteocorr::Result;

fn main() -> Result<()> {
    let ds = generate(&SynthConfig::default())?.dataset;
    let pressure = ds.weather.require(WeatherVar::Pressure)?;

    let raw = correlate(pressure, &ds.hospitalizations)?;
    println!(
        "raw daily values: r = {:.4} (p = {:.2e}), rho = {:.4} (p = {:.2e}), n = {}",
        raw.pearson_r, raw.pearson_p, raw.spearman_rho, raw.spearman_p, raw.n
    );

    println!("{:>6} {:>9} {:>11} {:>9} {:>11} {:>6}", "window", "r", "p", "rho", "p", "n");
    for m in mobile_correlation(pressure, &ds.hospitalizations, &MOBILE_WINDOWS)? {
        let r = &m.result;
        println!(
            "{:>6} {:>9.4} {:>11.2e} {:>9.4} {:>11.2e} {:>6}{}",
            m.window,
            r.pearson_r,
            r.pearson_p,
            r.spearman_rho,
            r.spearman_p,
            r.n,
            if r.small_sample { "  (small sample)" } else { "" }
        );
    }
    Ok(())
}
