//! Magnitude spectra of semi-hourly pressure and of admissions expanded to
//! the same grid.
//!
//! cargo run --example spectrum

use meteocorr::analysis::spectrum_pair;
use meteocorr::spectral::Spectrum;
use meteocorr::synth::{generate, SynthConfig};
use meteocorr::Result;

fn strongest(sp: &Spectrum, count: usize) -> Vec<(f64, f64)> {
    let mut bins: Vec<(f64, f64)> = sp.frequencies.iter().copied().zip(sp.magnitudes.iter().copied()).collect();
    bins.sort_by(|a, b| b.1.total_cmp(&a.1));
    bins.truncate(count);
    bins
}

fn main() -> Result<()> {
    let ds = generate(&SynthConfig {
        days: 365,
        ..SynthConfig::default()
    })?
    .dataset;
    let pair = spectrum_pair(&ds.semi_hourly_pressure, &ds.hospitalizations, true)?;
    for (name, sp) in [("pressure", &pair.pressure), ("admissions", &pair.hospitalizations)] {
        println!("{name}: {} bins up to {} cycles/day", sp.len(), sp.frequencies.last().unwrap());
        for (f, m) in strongest(sp, 5) {
            println!("  {f:>9.4} cycles/day (period {:>7.2} days): {m:.1}", 1.0 / f);
        }
    }
    Ok(())
}
