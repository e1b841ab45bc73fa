use chrono::{Days, NaiveDate};
use meteocorr::ingest::{
    load_daily_csv, load_semi_hourly_csv, write_daily_csv, write_semi_hourly_csv, FillMode,
};
use meteocorr::variation::DailyProfile;
use meteocorr::TimeSeries;
use proptest::prelude::*;

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2019, 12, 30).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn daily_values_survive_a_write_read_cycle(values in prop::collection::vec(-1e6..1e6f64, 1..50)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let s = TimeSeries::daily("temp_avg", start(), values.clone());
        write_daily_csv(&path, &s).unwrap();
        let back = load_daily_csv(&path, "temp_avg").unwrap();
        prop_assert_eq!(back.start_date(), Some(start()));
        let a: Vec<u64> = values.iter().map(|v| v.to_bits()).collect();
        let b: Vec<u64> = back.values().iter().map(|v| v.to_bits()).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn semi_hourly_profiles_survive_a_write_read_cycle(
        days in 1usize..4,
        seed in prop::collection::vec(900.0..1100.0f64, 48),
        jitter in 0.0..1.0f64,
    ) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let profiles: Vec<DailyProfile> = (0..days)
            .map(|d| {
                let r = seed.iter().map(|v| v + jitter * d as f64).collect();
                DailyProfile::new(start() + Days::new(d as u64), r).unwrap()
            })
            .collect();
        write_semi_hourly_csv(&path, &profiles).unwrap();
        let back = load_semi_hourly_csv(&path, FillMode::Strict).unwrap();
        prop_assert_eq!(back, profiles);
    }
}
