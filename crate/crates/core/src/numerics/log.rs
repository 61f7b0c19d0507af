//! Certified natural logarithms over exact rationals.
//!
//! `ln x` is reduced to `ln y + k ln 2` with `y = x / 2^k` in `[2/3, 4/3]`,
//! and `ln y = 2 atanh((y - 1)/(y + 1))`. The atanh series is summed exactly
//! and truncated once the geometric tail bound
//! `|u|^(2N+1) / ((2N+1)(1 - u^2))` drops under the budget, so every
//! returned interval contains the true value.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::rational::{grid_bits, int, render, Rational, Rounding};
use super::NumericsError;

pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Number of times a composite operation tightens its inner precision before
/// giving up with a precision error.
const MAX_REFINEMENTS: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogConfig {
    /// Cap on atanh series terms per evaluation.
    pub max_terms: usize,
}

impl Default for LogConfig {
    fn default() -> Self {
        Self {
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

/// `y` together with an enclosure of `1/(10 ln^2 y) + 4/(15 ln^3 y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErrorFunctional {
    pub y: Rational,
    pub value: Interval,
}

fn check_precision(precision: &Rational) -> Result<(), NumericsError> {
    if precision.is_positive() {
        Ok(())
    } else {
        Err(NumericsError::Domain("precision must be positive".into()))
    }
}

fn precision_error(precision: &Rational, detail: impl Into<String>) -> NumericsError {
    NumericsError::Precision {
        requested: render(precision, Rounding::Down),
        detail: detail.into(),
    }
}

/// Encloses `atanh(u)` for `|u| < 1`, with half-width at most `tol`.
fn atanh_enclosure(
    u: &Rational,
    tol: &Rational,
    config: &LogConfig,
) -> Result<Interval, NumericsError> {
    let u2 = u * u;
    let one_minus = Rational::one() - &u2;
    let mut power = u.clone();
    let mut sum = Rational::zero();
    for n in 0..config.max_terms {
        let odd = int(2 * n as u64 + 1);
        sum += &power / odd;
        power *= &u2;
        let remainder = power.abs() / (int(2 * n as u64 + 3) * &one_minus);
        if &remainder <= tol {
            return Interval::new(&sum - &remainder, &sum + &remainder);
        }
    }
    Err(precision_error(
        tol,
        format!("atanh series needs more than {} terms", config.max_terms),
    ))
}

/// `x = y * 2^k` with `y` in `[2/3, 4/3]`.
fn reduce(x: &Rational) -> (i64, Rational) {
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let shift = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(BigInt::one() << k as u64)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-k) as u64)
        }
    };
    let mut y = x / shift(k);
    let upper = Rational::new(4.into(), 3.into());
    let lower = Rational::new(2.into(), 3.into());
    while y > upper {
        y /= int(2);
        k += 1;
    }
    while y < lower {
        y *= int(2);
        k -= 1;
    }
    (k, y)
}

pub fn ln2_enclosure(precision: &Rational) -> Result<Interval, NumericsError> {
    ln2_enclosure_with(precision, &LogConfig::default())
}

pub fn ln2_enclosure_with(
    precision: &Rational,
    config: &LogConfig,
) -> Result<Interval, NumericsError> {
    check_precision(precision)?;
    // ln 2 = 2 atanh(1/3)
    let series = atanh_enclosure(&Rational::new(1.into(), 3.into()), &(precision / int(128)), config)?;
    let out = series.scale(&int(2)).rounded(grid_bits(precision));
    if &out.width() > precision {
        return Err(precision_error(precision, "ln 2 enclosure too wide"));
    }
    Ok(out)
}

/// Enclosure of `ln x` with width at most `precision`.
pub fn log_enclosure(x: &Rational, precision: &Rational) -> Result<Interval, NumericsError> {
    log_enclosure_with(x, precision, &LogConfig::default())
}

pub fn log_enclosure_with(
    x: &Rational,
    precision: &Rational,
    config: &LogConfig,
) -> Result<Interval, NumericsError> {
    check_precision(precision)?;
    if !x.is_positive() {
        return Err(NumericsError::Domain(format!(
            "logarithm of nonpositive value {}",
            render(x, Rounding::Down)
        )));
    }
    if x.is_one() {
        return Ok(Interval::point(Rational::zero()));
    }
    let (k, y) = reduce(x);
    let u = (&y - Rational::one()) / (&y + Rational::one());
    // budget: series p/32, k ln 2 term p/4, final grid rounding p/128
    let series = atanh_enclosure(&u, &(precision / int(128)), config)?;
    let mut total = series.scale(&int(2));
    if k != 0 {
        let ln2 = ln2_enclosure_with(&(precision / int(4 * k.unsigned_abs())), config)?;
        total = &total + &ln2.scale(&int(k));
    }
    let out = total.rounded(grid_bits(precision));
    if &out.width() > precision {
        return Err(precision_error(precision, "logarithm enclosure too wide"));
    }
    Ok(out)
}

/// `ln(10^exponent)` as `exponent * ln 10`, never materializing the power.
pub fn log_pow10(exponent: u64, precision: &Rational) -> Result<Interval, NumericsError> {
    check_precision(precision)?;
    if exponent == 0 {
        return Ok(Interval::point(Rational::zero()));
    }
    let ln10 = log_enclosure(&int(10), &(precision / int(2 * exponent)))?;
    let out = ln10.scale(&int(exponent)).rounded(grid_bits(precision));
    if &out.width() > precision {
        return Err(precision_error(precision, "ln(10^D) enclosure too wide"));
    }
    Ok(out)
}

/// Image of a positive interval under `ln`, widened by at most `precision`.
pub fn log_interval(iv: &Interval, precision: &Rational) -> Result<Interval, NumericsError> {
    if !iv.is_positive() {
        return Err(NumericsError::Domain(format!(
            "logarithm of interval {iv} reaching nonpositive values"
        )));
    }
    let half = precision / int(2);
    let lo = log_enclosure(iv.lo(), &half)?;
    let hi = if iv.lo() == iv.hi() {
        lo.clone()
    } else {
        log_enclosure(iv.hi(), &half)?
    };
    Interval::new(lo.lo().clone(), hi.hi().clone())
}

/// `ln ln x` for an argument whose logarithm is already enclosed in `log_x`
/// (used for powers of ten far too large for the series).
pub fn loglog_from_log(log_x: &Interval, precision: &Rational) -> Result<Interval, NumericsError> {
    check_precision(precision)?;
    if log_x.lo() <= &Rational::one() {
        return Err(NumericsError::Domain(format!(
            "ln ln x needs ln x > 1, got enclosure {log_x}"
        )));
    }
    let out = log_interval(log_x, &(precision / int(2)))?.rounded(grid_bits(precision));
    if &out.width() > precision {
        return Err(precision_error(precision, "ln ln enclosure too wide"));
    }
    Ok(out)
}

/// Enclosure of `ln ln x`; requires `ln x > 1` to be certifiable.
pub fn loglog_enclosure(x: &Rational, precision: &Rational) -> Result<Interval, NumericsError> {
    check_precision(precision)?;
    if x <= &Rational::one() {
        return Err(NumericsError::Domain(format!(
            "ln ln x needs x > 1, got {}",
            render(x, Rounding::Down)
        )));
    }
    let one = Rational::one();
    let mut inner = precision / int(4);
    let mut straddles = false;
    for _ in 0..MAX_REFINEMENTS {
        let log_x = log_enclosure(x, &inner)?;
        if log_x.hi() <= &one {
            return Err(NumericsError::Domain(format!(
                "ln ln x needs ln x > 1, but ln x lies in {log_x}"
            )));
        }
        straddles = log_x.lo() <= &one;
        if !straddles {
            let out = log_interval(&log_x, &inner)?.rounded(grid_bits(precision));
            if &out.width() <= precision {
                return Ok(out);
            }
        }
        inner /= int(256);
    }
    if straddles {
        Err(NumericsError::Domain(
            "log enclosure of the argument straddles 1".into(),
        ))
    } else {
        Err(precision_error(precision, "ln ln enclosure too wide"))
    }
}

/// `1/(10 L^2) + 4/(15 L^3)` at an exact point `L > 0`.
pub fn epsilon_at_log(log_y: &Rational) -> Rational {
    let l2 = log_y * log_y;
    let l3 = &l2 * log_y;
    int(1) / (int(10) * l2) + int(4) / (int(15) * l3)
}

/// Enclosure of the error functional for `ln y` inside `log_y`; the
/// functional is decreasing in `ln y > 0`.
pub fn epsilon_from_log(log_y: &Interval) -> Result<Interval, NumericsError> {
    if !log_y.is_positive() {
        return Err(NumericsError::Domain(format!(
            "error functional needs ln y > 0, got enclosure {log_y}"
        )));
    }
    Ok(log_y.map_decreasing(epsilon_at_log))
}

pub fn epsilon_enclosure(y: &Rational, precision: &Rational) -> Result<ErrorFunctional, NumericsError> {
    check_precision(precision)?;
    if y <= &Rational::one() {
        return Err(NumericsError::Domain(format!(
            "error functional needs y > 1, got {}",
            render(y, Rounding::Down)
        )));
    }
    let mut inner = precision / int(4);
    for _ in 0..MAX_REFINEMENTS {
        let log_y = log_enclosure(y, &inner)?;
        if log_y.is_positive() {
            let value = epsilon_from_log(&log_y)?.rounded(grid_bits(precision));
            if &value.width() <= precision {
                return Ok(ErrorFunctional {
                    y: y.clone(),
                    value,
                });
            }
        }
        inner /= int(256);
    }
    Err(precision_error(precision, "error functional enclosure too wide"))
}
