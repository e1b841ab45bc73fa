//! Correlograms of a trending series and of noise.
//!
//! cargo run --example correlogram

use meteocorr::autocorr::correlogram;
use meteocorr::synth::{generate, SynthConfig};
use meteocorr::{Result, TimeSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let trend = TimeSeries::new("trend", (0..200).map(|t| t as f64 + rng.random_range(-5.0..5.0)).collect());
    let noise = TimeSeries::new("noise", (0..200).map(|_| rng.random_range(-1.0..1.0)).collect());
    let synth = generate(&SynthConfig::default())?;
    let pressure = synth.dataset.weather.require(meteocorr::ingest::WeatherVar::Pressure)?;

    println!("{:>3} {:>9} {:>9} {:>9}", "k", "trend", "noise", "pressure");
    let cs = [correlogram(&trend, 10)?, correlogram(&noise, 10)?, correlogram(pressure, 10)?];
    for k in 0..=10 {
        println!(
            "{k:>3} {:>9.4} {:>9.4} {:>9.4}",
            cs[0].get(k).unwrap(),
            cs[1].get(k).unwrap(),
            cs[2].get(k).unwrap()
        );
    }
    Ok(())
}
