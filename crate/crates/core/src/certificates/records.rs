//! Arithmetic around the two published prime records: the large gap after
//! `s_L = 587 * 43103# / 2310 - 455704` and the twin pair at
//! `s_T = 504983334^8192 - 504983334^4096 - 1`.
//!
//! Primality of the record endpoints is taken as published; everything
//! derived from it (digit counts, prime-sum bounds, the final quotients) is
//! recomputed here.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use super::constants::{B_HI, B_LO, C_HI, C_LO};
use super::report::{CertificateReport, Check};
use super::{lit, require_sieve, CertificateError};
use crate::numerics::{
    epsilon_enclosure, epsilon_from_log, int, log_enclosure, log_interval, log_pow10, loglog_enclosure,
    loglog_from_log, ratio, Interval, NumericsError, Rational,
};
use crate::numerics::rational::{from_biguint, grid_bits, pow10};
use crate::primes::{decimal_digits, PrimeTable};

/// Primorial bound inside `s_L`.
pub const RECORD_SIEVE: u64 = 43_103;
pub const LARGE_GAP: u64 = 1_113_106;
pub const LARGE_GAP_DIGITS: u64 = 18_662;
pub const TWIN_DIGITS: u64 = 71_298;
/// Largest `r` served by the record certificate.
pub const R_TOP: u64 = 8_600_000;
/// Smallest `r` served by the record certificate.
pub const R_BOTTOM: u64 = 40;

/// The nth-prime upper bound is only licensed above this index.
pub const NTH_PRIME_THRESHOLD: u64 = 688_383;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RecordName {
    LargeGap,
    Twin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordInput {
    pub name: RecordName,
    /// Rebuilt from its defining formula.
    pub value: BigUint,
    pub gap: u64,
    pub claimed_digits: u64,
}

/// `s_L` and `s_T`, rebuilt exactly.
pub fn record_inputs(table: &PrimeTable) -> Result<[RecordInput; 2], CertificateError> {
    require_sieve("the large-gap record", RECORD_SIEVE, table.limit())?;
    let primorial = table.primorial(RECORD_SIEVE)?;
    let eleven = table.primorial(11)?;
    debug_assert!((&primorial % &eleven).is_zero());
    let s_l = BigUint::from(587u32) * (primorial / eleven) - BigUint::from(455_704u32);
    let base = BigUint::from(504_983_334u32);
    let half = base.pow(4096);
    let s_t = &half * &half - &half - BigUint::one();
    Ok([
        RecordInput {
            name: RecordName::LargeGap,
            value: s_l,
            gap: LARGE_GAP,
            claimed_digits: LARGE_GAP_DIGITS,
        },
        RecordInput {
            name: RecordName::Twin,
            value: s_t,
            gap: 2,
            claimed_digits: TWIN_DIGITS,
        },
    ])
}

/// Enclosure of `n (log n + log log n - 1 + (log log n - 2)/log n)`, whose
/// upper end bounds the `n`-th prime for `n > 688383`.
pub fn nth_prime_upper_bound(n: u64, precision: &Rational) -> Result<Interval, NumericsError> {
    if n <= NTH_PRIME_THRESHOLD {
        return Err(NumericsError::Domain(format!(
            "nth-prime bound needs n > {NTH_PRIME_THRESHOLD}, got {n}"
        )));
    }
    let inner = precision / int(16 * n);
    let l = log_enclosure(&int(n), &inner)?;
    let ll = log_interval(&l, &inner)?;
    let two = Interval::point(int(2));
    let one = Interval::point(int(1));
    let tail = (&ll - &two).div(&l)?;
    let bracket = &(&(&l + &ll) - &one) + &tail;
    let out = bracket.scale(&int(n)).rounded(grid_bits(precision));
    if &out.width() > precision {
        return Err(NumericsError::Precision {
            requested: crate::numerics::rational::render(precision, crate::numerics::Rounding::Down),
            detail: "nth-prime bound enclosure too wide".into(),
        });
    }
    Ok(out)
}

fn sum(terms: &[&Interval]) -> Interval {
    terms
        .iter()
        .skip(1)
        .fold(terms[0].clone(), |acc, t| &acc + *t)
}

/// Upper bound `log log y + B_+ + eps(y) + C_+` for `A(y)`, valid for `y > 10372`.
fn a_upper(y: u64, precision: &Rational) -> Result<Interval, NumericsError> {
    let part = precision / int(4);
    let ll = loglog_enclosure(&int(y), &part)?;
    let eps = epsilon_enclosure(&int(y), &part)?.value;
    let b = Interval::point(lit(B_HI));
    let c = Interval::point(lit(C_HI));
    Ok(sum(&[&ll, &b, &eps, &c]))
}

fn digits_report(inputs: &[RecordInput; 2]) -> Result<Vec<CertificateReport>, CertificateError> {
    let [large, twin] = inputs;
    let mut rl = CertificateReport::new("records.sL.digits", "certified large prime gap, digit count of both endpoints");
    rl.check(Check::equal("digits(s_L)", decimal_digits(&large.value)?, large.claimed_digits));
    rl.check(Check::equal(
        "digits(s_L + g_L)",
        decimal_digits(&(&large.value + large.gap))?,
        large.claimed_digits,
    ));
    rl.note("s_L = 587 * (43103# / 2310) - 455704 rebuilt from the primorial; 2310 = 11#");
    rl.note("primality of s_L and s_L + g_L is published data, not re-proved");

    let mut rt = CertificateReport::new("records.sT.digits", "certified twin prime, digit count");
    rt.check(Check::equal("digits(s_T)", decimal_digits(&twin.value)?, twin.claimed_digits));
    rt.note("s_T = 504983334^8192 - 504983334^4096 - 1 rebuilt by exact exponentiation");
    rt.note("primality of s_T and s_T + 2 is published data, not re-proved");
    Ok(vec![rl, rt])
}

fn twin_ascent(precision: &Rational) -> Result<Vec<CertificateReport>, CertificateError> {
    let part = precision / int(4);
    let mut ra = CertificateReport::new("records.AsT.upper", "twin-prime ascent, upper bound for A(s_T)");
    let log_top = log_pow10(TWIN_DIGITS, &part)?;
    let ll = loglog_from_log(&log_top, &part)?;
    let eps = epsilon_from_log(&log_pow10(TWIN_DIGITS - 1, &part)?)?.rounded(grid_bits(&part));
    let total = sum(&[&ll, &Interval::point(lit(B_HI)), &eps, &Interval::point(lit(C_HI))]);
    ra.check(Check::less("log log 10^71298 + B_+ + eps(10^71297) + C_+ < 13.04331036", &total, lit("13.04331036")));
    ra.check(Check::greater("log log 10^71298", &ll, int(0)));
    ra.check(Check::less("eps(10^71297)", &eps, lit("0.001")));
    ra.note("10^71297 <= s_T < 10^71298 from the digit count; log log increases and eps decreases");
    ra.note("uses the reciprocal-prime estimate (cited analytic input) and the certified B and C intervals");

    let mut rc = CertificateReport::new("records.twin.ascent", "twin-prime ascent at s_T -> s_T + 2");
    let q = int(R_BOTTOM) / lit("13.04331036");
    rc.check(Check::greater("40/13.04331036 > 3.066", &q, lit("3.066")));
    rc.check(Check::greater("3.066 > 3 = 2 + 1", lit("3.066"), int(3)));
    rc.note("R_r(s_T^-) >= r/A(s_T) >= 40/13.04331036 for every r >= 40");
    Ok(vec![ra, rc])
}

fn index_bounds(precision: &Rational) -> Result<Vec<CertificateReport>, CertificateError> {
    let mut ru = CertificateReport::new("records.U.upper", "nth-prime bound at n = 8,599,999");
    let u = nth_prime_upper_bound(R_TOP - 1, precision)?;
    ru.check(Check::less("U < 152960196", &u, int(152_960_196u64)));
    ru.note("U = n (log n + log log n - 1 + (log log n - 2)/log n) bounds p_n for n > 688383 (cited analytic input)");

    let mut rp = CertificateReport::new("records.p8600000.upper", "nth-prime bound at n = 8,600,000");
    let p = nth_prime_upper_bound(R_TOP, precision)?;
    rp.check(Check::less("bound for p_8600000 < 152960215", &p, int(152_960_215u64)));
    rp.check(Check::less(
        "digits(152960215) < digits(s_T), so 152960215 < s_T",
        decimal_digits(&BigUint::from(152_960_215u64))?,
        TWIN_DIGITS,
    ));
    rp.note("hence at least 8,600,000 primes lie below s_T and R_r(s_T^-) is defined for r <= 8,600,000");

    let mut ra = CertificateReport::new("records.AU.upper", "upper bound for W_{r-1} through A(152960196)");
    let a = a_upper(152_960_196, precision)?;
    ra.check(Check::less("log log y + B_+ + eps(y) + C_+ < 3.9713 at y = 152960196", &a, lit("3.9713")));
    ra.check(Check::greater("y > 10372", 152_960_196u64, 10_372u64));
    ra.note("W_{r-1} <= W_8599999 = A(p_8599999) <= A(U) <= A(152960196)");
    Ok(vec![ru, rp, ra])
}

fn large_gap_descent(large: &RecordInput, precision: &Rational) -> Result<Vec<CertificateReport>, CertificateError> {
    let part = precision / int(4);
    let exponent = LARGE_GAP_DIGITS - 1;
    let mut ra = CertificateReport::new("records.AsL.lower", "large-gap descent, lower bound for A(s_L^-)");
    let log_y = log_pow10(exponent, &part)?;
    let ll = loglog_from_log(&log_y, &part)?;
    let eps = epsilon_from_log(&log_y)?.rounded(grid_bits(&part));
    let y_minus_one = from_biguint(&pow10(exponent as u32)) - int(1);
    let tail = Interval::point(ratio(1, 1) / y_minus_one).rounded(grid_bits(&part));
    let total = &(&(&(&ll + &Interval::point(lit(B_LO))) - &eps) + &Interval::point(lit(C_LO))) - &tail;
    ra.check(Check::greater(
        "log log 10^18661 + B_- - eps(10^18661) + C_- - 1/(10^18661 - 1) > 11.70287735",
        &total,
        lit("11.70287735"),
    ));
    let last_digit = (&large.value % 10u32).to_u64_digits().first().copied().unwrap_or(0);
    ra.check(Check::greater("s_L mod 10 > 0, so s_L > 10^18661", last_digit, 0u64));
    ra.check(Check::greater("10^18661 >= 1999993", exponent, 6u64));
    ra.note("A(s_L^-) >= A(10^18661) since every prime <= 10^18661 is below s_L");
    ra.note("sharp lower bound needs y >= 1,999,993; it combines the reciprocal-prime estimate with C_-");

    let mut rd = CertificateReport::new("records.gap.descent", "large-gap descent at s_L -> s_L + g_L");
    let hi = lit("11.70287735");
    let w = lit("3.9713");
    rd.check(Check::greater("11.70287735 > 3.9713, so A(s_L^-) > W_{r-1}", &hi, &w));
    let q = int(R_TOP) / (&hi - &w);
    rd.check(Check::less("8600000/(11.70287735 - 3.9713) < 1112322", &q, int(1_112_322u64)));
    rd.check(Check::less("1112322 < 1113107 = g_L + 1", 1_112_322u64, large.gap + 1));
    rd.note("R_r(s_L^-) <= r/(A(s_L^-) - W_{r-1}) for r <= 8,600,000");
    Ok(vec![ra, rd])
}

/// Every claim of the record-gap certificate, in a fixed order.
pub fn verify_records(table: &PrimeTable, precision: &Rational) -> Result<Vec<CertificateReport>, CertificateError> {
    let inputs = record_inputs(table)?;
    let mut out = digits_report(&inputs)?;
    let step = |id: &str, res: Result<Vec<CertificateReport>, CertificateError>| match res {
        Ok(reports) => reports,
        Err(e) => {
            let mut r = CertificateReport::new(id, "record-gap certificate");
            r.failed_step(id, e);
            vec![r]
        }
    };
    out.extend(step("records.twin", twin_ascent(precision)));
    out.extend(step("records.index", index_bounds(precision)));
    out.extend(step("records.large", large_gap_descent(&inputs[0], precision)));

    let mut ro = CertificateReport::new("records.order", "descent at the large gap precedes the twin ascent");
    ro.check(Check::greater(
        "digits(s_T) > digits(s_L + g_L)",
        decimal_digits(&inputs[1].value)?,
        decimal_digits(&(&inputs[0].value + inputs[0].gap))?,
    ));
    out.push(ro);
    Ok(out)
}
