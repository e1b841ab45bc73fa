//! Time-series tools for probing correlations between weather series
//! (chiefly atmospheric pressure) and daily hospital admissions.
//!
//! The building blocks are a dated [`TimeSeries`] and its transformations,
//! Pearson/Spearman statistics, correlograms, peak and pattern detection,
//! intra-day pressure variation, magnitude spectra, and an automatic search
//! over transformed weather series. [`cli`] exposes each analysis as a
//! subcommand that writes CSV, JSON and SVG artifacts.

pub mod analysis;
pub mod autocorr;
pub mod cli;
pub mod error;
pub mod finder;
pub mod ingest;
pub mod peaks;
pub mod plot;
pub mod series;
pub mod spectral;
pub mod stats;
pub mod synth;
pub mod variation;

pub use error::{Error, ErrorClass, Result};
pub use series::{Range, Step, TimeSeries};
pub use stats::CorrelationResult;
