//! Peak detection and pattern occurrence on a short pressure record.
//!
//! cargo run --example peaks_and_patterns

use meteocorr::peaks::{detect_peaks, pattern_series, pattern_span, window_stats, Pattern, PeakParams};
use meteocorr::{Result, TimeSeries};

fn main() -> Result<()> {
    let s = TimeSeries::new(
        "pressure",
        vec![900.0, 900.0, 900.0, 900.0, 900.0, 900.0, 1020.0, 900.0, 1000.0, 900.0],
    );
    let params = PeakParams::default();
    for (i, (mean, sd)) in window_stats(&s, params.window())?.into_iter().enumerate() {
        println!("window ending at {}: mean {mean:.2}, std {sd:.2}", i + params.window() - 1);
    }
    let peaks = detect_peaks(&s, params)?;
    println!("peaks: {:?}", peaks.values());

    for p in Pattern::defaults() {
        let occ = pattern_series(&peaks, &p)?;
        println!(
            "pattern {p}: {:?} ({} occurrence(s), spans {} days)",
            occ.values(),
            occ.occurrences(),
            pattern_span(params, p.len())
        );
    }
    Ok(())
}
