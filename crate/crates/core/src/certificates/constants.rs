//! The Meissel-Mertens constant `B` (taken from its published interval) and
//! `C = sum_p 1/(p(p-1))` (recomputed from the primes up to `N` plus the
//! telescoping tail bound `1/N`).

use std::cmp::Ordering;

use serde::Serialize;

use super::report::{CertificateReport, Check};
use super::{lit, require_sieve, CertificateError};
use crate::numerics::{ratio, Interval, UnreducedFraction};
use crate::primes::PrimeTable;

pub const B_LO: &str = "0.261497212847642";
pub const B_HI: &str = "0.261497212847643";
pub const C_LO: &str = "0.773156636699192";
pub const C_HI: &str = "0.773157136700943";

/// Last prime of the partial sum for `C`.
pub const C_CUTOFF: u64 = 1_999_993;

/// Grid for displaying the `C` enclosure; far finer than its margins.
const C_GRID_BITS: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstantName {
    B,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantEnclosure {
    pub name: ConstantName,
    pub interval: Interval,
    pub method: String,
}

pub fn b_enclosure() -> ConstantEnclosure {
    ConstantEnclosure {
        name: ConstantName::B,
        interval: Interval::new(lit(B_LO), lit(B_HI)).expect("ordered literals"),
        method: "published outward-rounded interval (axiom input)".into(),
    }
}

/// Published interval for `C`, used downstream once it is certified.
pub fn c_literal_interval() -> Interval {
    Interval::new(lit(C_LO), lit(C_HI)).expect("ordered literals")
}

/// `sum_{p <= n} 1/(p(p-1))`, exact and unreduced.
pub fn c_partial_sum(table: &PrimeTable, n: u64) -> Result<UnreducedFraction, CertificateError> {
    require_sieve("the partial sum for C", n, table.limit())?;
    let denoms: Vec<u64> = table
        .primes()
        .iter()
        .take_while(|&&p| p <= n)
        .map(|&p| p * (p - 1))
        .collect();
    Ok(crate::numerics::unit_fraction_sum(&denoms))
}

fn c_bounds(partial: &UnreducedFraction, n: u64) -> (UnreducedFraction, UnreducedFraction) {
    let tail = UnreducedFraction::new(1u32.into(), n.into());
    (partial.clone(), partial.add(&tail))
}

/// `C` in `[S_n, S_n + 1/n]` where `S_n` is the partial sum over `p <= n`.
pub fn enclose_c(table: &PrimeTable, n: u64) -> Result<ConstantEnclosure, CertificateError> {
    let partial = c_partial_sum(table, n)?;
    let (lower, upper) = c_bounds(&partial, n);
    let lo = lower.enclose(C_GRID_BITS).lo().clone();
    let hi = upper.enclose(C_GRID_BITS).hi().clone();
    Ok(ConstantEnclosure {
        name: ConstantName::C,
        interval: Interval::new(lo, hi)?,
        method: format!("exact partial sum over p <= {n} plus telescoping tail 1/{n}"),
    })
}

/// Claims `constants.B` and `constants.C`.
pub fn verify_constants(table: &PrimeTable) -> Vec<CertificateReport> {
    let b = b_enclosure();
    let mut rb = CertificateReport::new("constants.B", "numerical constants certificate, Meissel-Mertens interval");
    rb.check(Check::less("B_- < B_+", lit(B_LO), lit(B_HI)));
    rb.note(b.method);
    rb.note("B is not recomputed: its interval enters as a cited input");

    let mut rc = CertificateReport::new("constants.C", "numerical constants certificate, interval for C");
    match c_partial_sum(table, C_CUTOFF) {
        Err(e) => {
            rc.failed_step("partial sum", e);
        }
        Ok(partial) => {
            let (lower, upper) = c_bounds(&partial, C_CUTOFF);
            let lo_iv = lower.enclose(C_GRID_BITS);
            let hi_iv = upper.enclose(C_GRID_BITS);
            rc.check(Check::greater(
                format!("sum_{{p <= {C_CUTOFF}}} 1/(p(p-1)) > {C_LO}"),
                &lo_iv,
                lit(C_LO),
            ));
            rc.check(Check::less(
                format!("sum_{{p <= {C_CUTOFF}}} 1/(p(p-1)) + 1/{C_CUTOFF} < {C_HI}"),
                &hi_iv,
                lit(C_HI),
            ));
            // the same two facts by integer cross-multiplication
            let exact_lo = lower.cmp_rational(&lit(C_LO)) == Ordering::Greater;
            let exact_hi = upper.cmp_rational(&lit(C_HI)) == Ordering::Less;
            if !(exact_lo && exact_hi) {
                rc.failed_step("cross-multiplied comparison", "disagrees with the enclosure");
            }
            rc.note(format!(
                "exact partial sum: {} primes, denominator of {} bits; cross-multiplied comparisons agree: {}",
                table.primes().partition_point(|&p| p <= C_CUTOFF),
                partial.denom().bits(),
                exact_lo && exact_hi
            ));
            rc.note(format!(
                "tail: sum over p > N of 1/(p(p-1)) <= sum over n > N of 1/(n(n-1)) = 1/N = {}",
                ratio(1, C_CUTOFF)
            ));
        }
    }
    vec![rb, rc]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::int;

    #[test]
    fn toy_enclosure_over_one_prime() {
        let t = PrimeTable::sieve(10).unwrap();
        let c = enclose_c(&t, 2).unwrap();
        assert_eq!(c.interval, Interval::new(ratio(1, 2), int(1)).unwrap());
        assert_eq!(c.name, ConstantName::C);
    }

    #[test]
    fn partial_sum_is_monotone_in_cutoff() {
        let t = PrimeTable::sieve(5000).unwrap();
        let a = enclose_c(&t, 1000).unwrap().interval;
        let b = enclose_c(&t, 5000).unwrap().interval;
        assert!(b.lo() > a.lo());
        assert!(b.hi() < a.hi());
    }

    #[test]
    fn short_sieve_is_an_error() {
        let t = PrimeTable::sieve(1000).unwrap();
        assert!(matches!(
            enclose_c(&t, C_CUTOFF),
            Err(CertificateError::InsufficientSieve { .. })
        ));
        let reports = verify_constants(&t);
        assert!(reports[0].passed());
        assert!(!reports[1].passed());
    }
}
