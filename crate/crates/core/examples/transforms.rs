//! Series transformations: normalisation, variation, moving mean,
//! eventuality and sub-daily expansion.
//!
//! cargo run --example transforms

use chrono::NaiveDate;
use meteocorr::{Range, Result, TimeSeries};

fn show(s: &TimeSeries) {
    let vals: Vec<String> = s.values().iter().map(|v| format!("{v:.2}")).collect();
    let from = s.start_date().map(|d| d.to_string()).unwrap_or_default();
    println!("{:<28} from {from}: [{}]", s.label(), vals.join(", "));
}

fn main() -> Result<()> {
    let start = NaiveDate::from_ymd_opt(2016, 1, 1).unwrap();
    let pressure = TimeSeries::daily(
        "pressure",
        start,
        vec![1012.0, 1015.5, 1009.0, 1003.5, 1011.0, 1018.0, 1016.5, 1014.0],
    );
    let admissions = TimeSeries::daily("admissions", start, vec![0.0, 2.0, 0.0, 1.0, 0.0, 0.0, 3.0, 1.0]);

    show(&pressure);
    show(&pressure.normalise(Range::unit())?.with_label("normalised [0,1]"));
    show(&pressure.normalise(Range::new(-1.0, 1.0)?)?.with_label("normalised [-1,1]"));
    // change over 2 days, then total absolute movement over the same span
    show(&pressure.variation_series(3, false)?.with_label("signed variation, 3 pts"));
    show(&pressure.variation_series(3, true)?.with_label("unsigned variation, 3 pts"));
    show(&pressure.mobile_mean(3, None)?.with_label("moving mean, 3 days"));
    show(&pressure.mobile_mean(3, Some(&[1.0, 2.0, 3.0]))?.with_label("weighted moving mean"));
    show(&admissions.eventuality()?.with_label("admission on day"));

    let semi_hourly = admissions.expand_to_subdaily(48)?;
    println!(
        "expanded admissions: {} samples every {}, total {:.6} (was {})",
        semi_hourly.len(),
        semi_hourly.step(),
        semi_hourly.sum(),
        admissions.sum()
    );
    Ok(())
}
