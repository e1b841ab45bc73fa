use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Variants are grouped by [`ErrorClass`] so the command line can map them
/// onto stable prefix codes and exit statuses.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series `{label}` is empty")]
    EmptySeries { label: String },

    #[error("series `{label}` is constant")]
    ConstantSeries { label: String },

    #[error("series `{label}` has {len} values, at least {needed} required")]
    SeriesTooShort {
        label: String,
        len: usize,
        needed: usize,
    },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series are not aligned: {0}")]
    Misaligned(String),

    #[error("bad weights: {0}")]
    BadWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("pattern of length {pattern} is longer than peak series of length {series}")]
    PatternTooLong { pattern: usize, series: usize },

    #[error("no day with two or more hospitalizations")]
    NoQualifyingDays,

    #[error("no candidates to evaluate")]
    NoCandidates,

    #[error("empty finder configuration: {0}")]
    EmptyConfig(String),

    #[error("{path}: row {row}, column `{column}`: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error("{path}: duplicate date {date}")]
    DuplicateDate { path: PathBuf, date: String },

    #[error("{path}: dates out of order at row {row} ({date})")]
    NonMonotonicDates {
        path: PathBuf,
        row: usize,
        date: String,
    },

    #[error("{path}: {count} missing date(s) starting at {first}")]
    MissingDates {
        path: PathBuf,
        first: NaiveDate,
        count: i64,
    },

    #[error("{date}: {readings} semi-hourly readings, 48 required")]
    IncompleteDay { date: NaiveDate, readings: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse failure families used for diagnostics and exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Ingest,
    Stats,
    Io,
}

impl ErrorClass {
    pub fn code(self) -> &'static str {
        match self {
            ErrorClass::Config => "E_CONFIG",
            ErrorClass::Ingest => "E_INGEST",
            ErrorClass::Stats => "E_STATS",
            ErrorClass::Io => "E_IO",
        }
    }

    pub fn exit_status(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Ingest => 3,
            ErrorClass::Stats => 4,
            ErrorClass::Io => 5,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter(_)
            | Error::BadWeights(_)
            | Error::EmptyConfig(_)
            | Error::NoCandidates => ErrorClass::Config,
            Error::Parse { .. }
            | Error::DuplicateDate { .. }
            | Error::NonMonotonicDates { .. }
            | Error::MissingDates { .. }
            | Error::IncompleteDay { .. }
            | Error::Csv { .. } => ErrorClass::Ingest,
            Error::Io { .. } | Error::Json(_) => ErrorClass::Io,
            Error::EmptySeries { .. }
            | Error::ConstantSeries { .. }
            | Error::SeriesTooShort { .. }
            | Error::LengthMismatch { .. }
            | Error::Misaligned(_)
            | Error::PatternTooLong { .. }
            | Error::NoQualifyingDays => ErrorClass::Stats,
        }
    }
}
