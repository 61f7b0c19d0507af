//! Exact rational arithmetic and outward-rounded interval arithmetic.
//!
//! No binary floating point is used anywhere in this module: literals are
//! parsed into exact rationals and transcendental values are enclosed by
//! intervals with rational endpoints.

pub mod interval;
pub mod log;
pub mod rational;
pub mod sum;

use thiserror::Error;

pub use interval::{interval_compare, Interval, IntervalOrdering};
pub use log::{
    epsilon_at_log, epsilon_enclosure, epsilon_from_log, ln2_enclosure, log_enclosure,
    log_enclosure_with, log_interval, log_pow10, loglog_enclosure, loglog_from_log,
    ErrorFunctional, LogConfig, DEFAULT_MAX_TERMS,
};
pub use rational::{int, parse_decimal, ratio, Rational, Rounding};
pub use sum::{unit_fraction_sum, UnreducedFraction};

/// Default target width for every certified inequality.
pub fn default_precision() -> Rational {
    ratio(1, 1_000_000_000)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumericsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision {requested} not reached: {detail}")]
    Precision { requested: String, detail: String },
    #[error("cannot parse number literal `{0}`")]
    Parse(String),
}
