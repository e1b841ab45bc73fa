//! Scans every weather series and transformation for the strongest link
//! to admissions.
//!
//! cargo run --release --example correlation_finder

use meteocorr::finder::{enumerate_candidates, run_finder, FinderConfig};
use meteocorr::synth::{generate, SynthConfig};
use meteocorr::Result;

fn main() -> Result<()> {
    let ds = generate(&SynthConfig::default())?.dataset;
    let config = FinderConfig::default();
    let candidates = enumerate_candidates(&config, &ds.weather)?;
    let report = run_finder(&candidates, &ds.weather, &ds.hospitalizations, &config)?;

    println!("{} candidates", report.candidates_evaluated);
    for (c, r) in report.ranked().into_iter().take(10) {
        println!("{:<28} r = {:>8.4}  rho = {:>8.4}", c.to_string(), r.pearson_r, r.spearman_rho);
    }
    if let Some(b) = &report.best_pearson {
        println!("best Pearson:  {} ({:.4})", b.candidate, b.result.pearson_r);
    }
    if let Some(b) = &report.best_spearman {
        println!("best Spearman: {} ({:.4})", b.candidate, b.result.spearman_rho);
    }
    println!("relevant at |r| >= {}: {}", report.threshold, report.relevant);
    Ok(())
}
