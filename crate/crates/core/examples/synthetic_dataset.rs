//! Generates a synthetic dataset, writes it in the standard input layout
//! and reads it back.
//!
//! cargo run --example synthetic_dataset -- /tmp/meteocorr-data

use meteocorr::ingest::{Dataset, LoadOptions};
use meteocorr::synth::{generate, SynthConfig};
use meteocorr::Result;

fn main() -> Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data".to_string());
    let synth = generate(&SynthConfig::default())?;
    for p in synth.dataset.write_dir(&dir)? {
        println!("wrote {}", p.display());
    }
    let back = Dataset::load_dir(&dir, LoadOptions::default())?;
    assert_eq!(back, synth.dataset);
    println!(
        "{} days from {} to {}, {} admissions, {} planted bursts",
        back.hospitalizations.len(),
        back.first_date(),
        back.last_date(),
        back.hospitalizations.sum(),
        synth.burst_days.len()
    );
    Ok(())
}
