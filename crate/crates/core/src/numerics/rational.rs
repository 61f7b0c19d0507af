//! Exact rationals plus the handful of helpers the verifier needs on top of
//! `num-rational`: decimal literal parsing, dyadic grid rounding and directed
//! decimal rendering.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::NumericsError;

/// Exact arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Direction used when an exact value has to be shown or stored on a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
}

pub fn int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Rational {
    Rational::new(numer.into(), denom.into())
}

pub fn from_biguint(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn pow10(exp: u32) -> BigUint {
    BigUint::from(10u32).pow(exp)
}

fn pow2(exp: u64) -> BigInt {
    BigInt::one() << exp
}

/// Parses a displayed decimal (`3.303755162423773`, `-1.5`, `1e-9`,
/// `8,600,000`) or a fraction (`22/7`) into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Rational, NumericsError> {
    let bad = || NumericsError::Parse(text.to_string());
    let cleaned: String = text
        .trim()
        .chars()
        .filter(|c| *c != '_' && *c != ',')
        .collect();
    if cleaned.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = cleaned.split_once('/') {
        let n = parse_decimal(n)?;
        let d = parse_decimal(d)?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(n / d);
    }

    let (mantissa, exponent) = match cleaned.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = cleaned[pos + 1..].parse().map_err(|_| bad())?;
            (&cleaned[..pos], exp)
        }
        None => (cleaned.as_str(), 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{whole}{frac}");
    let numer: BigInt = if all.is_empty() {
        BigInt::zero()
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac.len() as i64;
    let magnitude = if scale >= 0 {
        int(numer * BigInt::from(pow10(scale as u32)))
    } else {
        Rational::new(numer, BigInt::from(pow10((-scale) as u32)))
    };
    Ok(if negative { -magnitude } else { magnitude })
}

/// Largest multiple of `2^-bits` that is `<= x`.
pub fn floor_to_grid(x: &Rational, bits: u64) -> Rational {
    let scale = pow2(bits);
    let scaled = (x * int(scale.clone())).floor();
    Rational::new(scaled.to_integer(), scale)
}

/// Smallest multiple of `2^-bits` that is `>= x`.
pub fn ceil_to_grid(x: &Rational, bits: u64) -> Rational {
    let scale = pow2(bits);
    let scaled = (x * int(scale.clone())).ceil();
    Rational::new(scaled.to_integer(), scale)
}

pub fn round_to_grid(x: &Rational, bits: u64, rounding: Rounding) -> Rational {
    match rounding {
        Rounding::Down => floor_to_grid(x, bits),
        Rounding::Up => ceil_to_grid(x, bits),
    }
}

/// Smallest `b >= 1` with `2^-b <= precision / 256`.
///
/// Monotone in `precision`: a tighter target never yields a coarser grid.
pub fn grid_bits(precision: &Rational) -> u64 {
    debug_assert!(precision.is_positive());
    let target = (int(256) / precision).ceil().to_integer();
    if target <= BigInt::one() {
        return 1;
    }
    let bits = (target - BigInt::one()).bits();
    bits.max(1)
}

fn round_integer(x: &Rational, rounding: Rounding) -> BigInt {
    match rounding {
        Rounding::Down => x.floor().to_integer(),
        Rounding::Up => x.ceil().to_integer(),
    }
}

/// Fixed-point rendering with `places` digits after the point, rounded in
/// the requested direction.
pub fn to_decimal(x: &Rational, places: u32, rounding: Rounding) -> String {
    let scaled = round_integer(&(x * from_biguint(&pow10(places))), rounding);
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let places = places as usize;
    let body = if places == 0 {
        digits
    } else {
        let padded = format!("{digits:0>width$}", width = places + 1);
        let (whole, frac) = padded.split_at(padded.len() - places);
        format!("{whole}.{frac}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// `floor(log10 |x|)` for nonzero `x`.
pub fn floor_log10_abs(x: &Rational) -> i64 {
    debug_assert!(!x.is_zero());
    let ax = x.abs();
    let mut e = ax.numer().to_string().len() as i64 - ax.denom().to_string().len() as i64;
    let ten_pow = |e: i64| -> Rational {
        if e >= 0 {
            from_biguint(&pow10(e as u32))
        } else {
            Rational::new(BigInt::one(), BigInt::from(pow10((-e) as u32)))
        }
    };
    while ten_pow(e) > ax {
        e -= 1;
    }
    while ten_pow(e + 1) <= ax {
        e += 1;
    }
    e
}

/// Scientific rendering with `sig` significant digits, rounded in the
/// requested direction.
pub fn to_scientific(x: &Rational, sig: u32, rounding: Rounding) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let e = floor_log10_abs(x);
    let shift = e - sig as i64 + 1;
    let scaled = if shift >= 0 {
        x / from_biguint(&pow10(shift as u32))
    } else {
        x * from_biguint(&pow10((-shift) as u32))
    };
    let m = round_integer(&scaled, rounding);
    let negative = m.is_negative();
    let digits = m.abs().to_string();
    let exponent = shift + digits.len() as i64 - 1;
    let (lead, rest) = digits.split_at(1);
    let rest = rest.trim_end_matches('0');
    let mantissa = if rest.is_empty() {
        lead.to_string()
    } else {
        format!("{lead}.{rest}")
    };
    format!("{}{mantissa}e{exponent}", if negative { "-" } else { "" })
}

/// Human-facing rendering of a bound: fixed point for moderate magnitudes,
/// scientific otherwise. The rendered value lies on the `rounding` side of
/// `x`, so a displayed lower bound is still a lower bound.
pub fn render(x: &Rational, rounding: Rounding) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let e = floor_log10_abs(x);
    if (-6..21).contains(&e) {
        let text = to_decimal(x, 18, rounding);
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        if trimmed.is_empty() || trimmed == "-" {
            "0".to_string()
        } else {
            trimmed.to_string()
        }
    } else {
        to_scientific(x, 18, rounding)
    }
}

/// `n/d` text when the fraction is short enough to be worth printing.
pub fn exact_string(x: &Rational, max_len: usize) -> Option<String> {
    let text = if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    };
    (text.len() <= max_len).then_some(text)
}
