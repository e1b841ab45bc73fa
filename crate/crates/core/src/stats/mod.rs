//! Pearson and Spearman correlation with two-sided p-values.
//!
//! Both p-values come from the Student-t transform with `n - 2` degrees of
//! freedom. For Spearman this is only reliable for roughly 500 or more
//! observations; [`CorrelationResult::small_sample`] flags shorter inputs.

pub mod special;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Sample size below which the Spearman p-value is flagged as approximate.
pub const SPEARMAN_RELIABLE_N: usize = 500;

/// p-values below this are reported as exactly zero.
const P_UNDERFLOW: f64 = 1e-300;

/// A correlation coefficient together with its two-sided p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub value: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub pearson_r: f64,
    pub pearson_p: f64,
    pub spearman_rho: f64,
    pub spearman_p: f64,
    pub n: usize,
    /// Set when `n` is below [`SPEARMAN_RELIABLE_N`].
    pub small_sample: bool,
}

impl CorrelationResult {
    /// The larger of `|r|` and `|rho|`.
    pub fn strength(&self) -> f64 {
        self.pearson_r.abs().max(self.spearman_rho.abs())
    }
}

fn check_pair(x: &TimeSeries, y: &TimeSeries) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    x.require_len(3)?;
    y.require_len(3)?;
    Ok(())
}

fn centered_sums(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    x.iter().zip(y).fold((0.0, 0.0, 0.0), |(sxy, sxx, syy), (a, b)| {
        let (dx, dy) = (a - mx, b - my);
        (sxy + dx * dy, sxx + dx * dx, syy + dy * dy)
    })
}

/// Two-sided p-value of a correlation coefficient over `n` pairs.
pub fn correlation_p_value(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let df = (n - 2) as f64;
    // df / (df + t^2) with t = r * sqrt(df / (1 - r^2)) reduces to 1 - r^2
    let p = special::incomplete_beta(df / 2.0, 0.5, 1.0 - r * r).clamp(0.0, 1.0);
    if p < P_UNDERFLOW {
        0.0
    } else {
        p
    }
}

fn pearson_values(x: &TimeSeries, y: &TimeSeries) -> Result<Coefficient> {
    let (sxy, sxx, syy) = centered_sums(x.values(), y.values());
    for (s, ss) in [(x, sxx), (y, syy)] {
        if ss == 0.0 {
            return Err(Error::ConstantSeries {
                label: s.label().to_string(),
            });
        }
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok(Coefficient {
        value: r,
        p: correlation_p_value(r, x.len()),
    })
}

/// Pearson's r and its two-sided p-value.
pub fn pearson(x: &TimeSeries, y: &TimeSeries) -> Result<Coefficient> {
    check_pair(x, y)?;
    pearson_values(x, y)
}

/// 1-based ranks; ties share the average of the ranks they span.
pub fn rank(x: &TimeSeries) -> Result<TimeSeries> {
    x.require_len(1)?;
    let v = x.values();
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && v[order[j]] == v[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &idx in &order[i..j] {
            ranks[idx] = avg;
        }
        i = j;
    }
    Ok(x.derive(0, ranks))
}

/// Spearman's rho (Pearson on ranks) and its two-sided p-value.
pub fn spearman(x: &TimeSeries, y: &TimeSeries) -> Result<Coefficient> {
    check_pair(x, y)?;
    pearson_values(&rank(x)?, &rank(y)?)
}

/// Both coefficients over the same pair of equal-length series.
pub fn correlate(x: &TimeSeries, y: &TimeSeries) -> Result<CorrelationResult> {
    let p = pearson(x, y)?;
    let s = spearman(x, y)?;
    Ok(CorrelationResult {
        pearson_r: p.value,
        pearson_p: p.p,
        spearman_rho: s.value,
        spearman_p: s.p,
        n: x.len(),
        small_sample: x.len() < SPEARMAN_RELIABLE_N,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new("s", v.to_vec())
    }

    #[test]
    fn pearson_exact_relations() {
        let c = pearson(&ts(&[1.0, 2.0, 3.0, 4.0, 5.0]), &ts(&[2.0, 4.0, 6.0, 8.0, 10.0])).unwrap();
        assert_eq!(c.value, 1.0);
        assert_eq!(c.p, 0.0);
        let c = pearson(&ts(&[1.0, 2.0, 3.0]), &ts(&[3.0, 2.0, 1.0])).unwrap();
        assert_eq!(c.value, -1.0);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&ts(&[1.0, 2.0, 3.0]), &ts(&[1.0, 2.0])),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            pearson(&ts(&[1.0, 2.0]), &ts(&[1.0, 2.0])),
            Err(Error::SeriesTooShort { .. })
        ));
        assert!(matches!(
            pearson(&ts(&[1.0, 1.0, 1.0]), &ts(&[1.0, 2.0, 3.0])),
            Err(Error::ConstantSeries { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&ts(&[10.0, 30.0, 20.0])).unwrap().values(), &[1.0, 3.0, 2.0]);
        assert_eq!(
            rank(&ts(&[1.0, 2.0, 2.0, 3.0])).unwrap().values(),
            &[1.0, 2.5, 2.5, 4.0]
        );
        assert_eq!(rank(&ts(&[5.0; 3])).unwrap().values(), &[2.0; 3]);
        assert!(rank(&ts(&[])).is_err());
    }

    #[test]
    fn spearman_monotone_maps() {
        let x = ts(&[1.0, 2.0, 3.0]);
        assert_eq!(spearman(&x, &ts(&[1.0, 4.0, 9.0])).unwrap().value, 1.0);
        assert_eq!(spearman(&x, &ts(&[9.0, 4.0, 1.0])).unwrap().value, -1.0);
    }

    #[test]
    fn small_sample_flag() {
        let x: Vec<f64> = (0..10).map(|i| (i * i) as f64).collect();
        let y: Vec<f64> = (0..10).map(|i| ((i * 7) % 10) as f64).collect();
        assert!(correlate(&ts(&x), &ts(&y)).unwrap().small_sample);
        let x: Vec<f64> = (0..600).map(|i| (i as f64).sin()).collect();
        let y: Vec<f64> = (0..600).map(|i| (i as f64 * 0.7).cos()).collect();
        assert!(!correlate(&ts(&x), &ts(&y)).unwrap().small_sample);
    }

    #[test]
    fn p_value_decreases_with_strength() {
        for n in [5, 20, 100, 1000] {
            let mut last = f64::INFINITY;
            for i in 0..=20 {
                let r = i as f64 / 20.0 * 0.99;
                let p = correlation_p_value(r, n);
                assert!(p <= last, "n={n} r={r}");
                assert_eq!(p, correlation_p_value(-r, n));
                last = p;
            }
        }
        assert_eq!(correlation_p_value(0.0, 30), 1.0);
    }

    fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3usize..60).prop_flat_map(|n| {
            (
                prop::collection::vec(-100.0..100.0f64, n),
                prop::collection::vec(-100.0..100.0f64, n),
            )
        })
    }

    proptest! {
        #[test]
        fn pearson_properties((x, y) in pair(), a in 0.01..50.0f64, b in -100.0..100.0f64) {
            let (xs, ys) = (ts(&x), ts(&y));
            let r = pearson(&xs, &ys).unwrap();
            prop_assert!(r.value.abs() <= 1.0);
            prop_assert!((0.0..=1.0).contains(&r.p));
            prop_assert!((pearson(&xs, &xs).unwrap().value - 1.0).abs() < 1e-12);
            prop_assert_eq!(pearson(&ys, &xs).unwrap().value, r.value);
            let scaled = ts(&x.iter().map(|v| a * v + b).collect::<Vec<_>>());
            prop_assert!((pearson(&scaled, &ys).unwrap().value - r.value).abs() < 1e-9);
        }

        #[test]
        fn spearman_ignores_increasing_transforms((x, y) in pair()) {
            let rho = spearman(&ts(&x), &ts(&y)).unwrap().value;
            let warped = ts(&x.iter().map(|v| (v / 50.0).exp() + v.powi(3)).collect::<Vec<_>>());
            prop_assert!((spearman(&warped, &ts(&y)).unwrap().value - rho).abs() < 1e-12);
        }
    }
}
