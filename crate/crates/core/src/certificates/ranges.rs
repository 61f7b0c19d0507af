//! Range certificates: one descent gap and one later ascent gap serving a
//! whole interval of `r` through the symmetric-polynomial bounds.

use super::report::{CertificateReport, Check};
use super::{lit, require_sieve, CertificateError};
use crate::numerics::{int, Rational};
use crate::primes::PrimeTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    pub id: &'static str,
    pub r_min: usize,
    pub r_max: usize,
    /// Descent gap `descent -> ascent`; ascent gap `ascent -> after`.
    pub descent: u64,
    pub ascent: u64,
    pub after: u64,
    /// Displayed lower bound for `A(descent^-)`.
    pub a_minus_literal: &'static str,
    /// Displayed upper bound for `A(ascent^-)`, i.e. `A(descent)`.
    pub a_literal: &'static str,
    /// Displayed upper bound for `W_{r_max - 1}`.
    pub w_literal: &'static str,
    pub descent_bound: &'static str,
    pub ascent_bound: &'static str,
}

impl RangeSpec {
    pub const A: RangeSpec = RangeSpec {
        id: "A",
        r_min: 20,
        r_max: 30,
        descent: 15_683,
        ascent: 15_727,
        after: 15_731,
        a_minus_literal: "3.303755162423773",
        a_literal: "3.303818929800384",
        w_literal: "2.612642166507777",
        descent_bound: "43.409",
        ascent_bound: "6.053",
    };

    pub const B: RangeSpec = RangeSpec {
        id: "B",
        r_min: 31,
        r_max: 47,
        descent: 31_397,
        ascent: 31_469,
        after: 31_477,
        a_minus_literal: "3.372584257226677",
        a_literal: "3.372616108417913",
        w_literal: "2.721441010945543",
        descent_bound: "72.181",
        ascent_bound: "9.191",
    };

    pub fn sieve_needed(&self) -> u64 {
        self.after
    }
}

fn index_of(table: &PrimeTable, p: u64) -> Result<usize, CertificateError> {
    table
        .index_of(p)
        .ok_or_else(|| crate::primes::PrimesError::NotPrime(p).into())
}

fn build(spec: &RangeSpec, table: &PrimeTable, report: &mut CertificateReport) -> Result<(), CertificateError> {
    let (a, b, c) = (spec.descent, spec.ascent, spec.after);
    let i = index_of(table, a)?;
    let j = index_of(table, b)?;
    let g = b - a;
    let h = c - b;
    report.check(Check::equal(format!("{b} follows {a}"), j as u64, i as u64 + 1));
    report.check(Check::equal(format!("{c} follows {b}"), index_of(table, c)? as u64, j as u64 + 1));

    // the displayed prime sums
    let a_minus = table.restricted_sum(a, true)?;
    let a_at = table.restricted_sum(a, false)?;
    let w_cap = table.weight_prefix(spec.r_max - 1)?;
    let a_minus_lit = lit(spec.a_minus_literal);
    let a_lit = lit(spec.a_literal);
    let w_lit = lit(spec.w_literal);
    report.check(Check::greater(format!("A({a}^-) > {}", spec.a_minus_literal), &a_minus, &a_minus_lit));
    report.check(Check::less(format!("A({a}) < {}", spec.a_literal), &a_at, &a_lit));
    report.check(Check::equal(format!("A({b}^-) = A({a})"), table.restricted_sum(b, true)?, &a_at));
    report.check(Check::less(format!("W_{} < {}", spec.r_max - 1, spec.w_literal), &w_cap, &w_lit));

    // the bounds apply at index i - 1 only if it is at least r
    report.check(Check::greater(format!("pi({a}^-) >= {}", spec.r_max), (i - 1) as u64, (spec.r_max - 1) as u64));

    // displayed chains at the extremal r
    let descent_bound = lit(spec.descent_bound);
    let ascent_bound = lit(spec.ascent_bound);
    let upper_lit = int(spec.r_max as u64) / (&a_minus_lit - &w_lit);
    let lower_lit = int(spec.r_min as u64) / &a_lit;
    report.check(Check::less(
        format!("{}/({} - {}) < {}", spec.r_max, spec.a_minus_literal, spec.w_literal, spec.descent_bound),
        &upper_lit,
        &descent_bound,
    ));
    report.check(Check::less(format!("{} < {} = g + 1", spec.descent_bound, g + 1), &descent_bound, int(g + 1)));
    report.check(Check::greater(
        format!("{}/{} > {}", spec.r_min, spec.a_literal, spec.ascent_bound),
        &lower_lit,
        &ascent_bound,
    ));
    report.check(Check::greater(format!("{} > {} = h + 1", spec.ascent_bound, h + 1), &ascent_bound, int(h + 1)));

    // every r in the range, with the exact sums
    let mut prev: Option<(Rational, Rational)> = None;
    for r in spec.r_min..=spec.r_max {
        let w = table.weight_prefix(r - 1)?;
        let upper = int(r as u64) / (&a_minus - &w);
        let lower = int(r as u64) / &a_at;
        report.check(Check::less(format!("r = {r}: r/(A({a}^-) - W_{}) < g + 1", r - 1), &upper, int(g + 1)));
        report.check(Check::greater(format!("r = {r}: r/A({b}^-) > h + 1"), &lower, int(h + 1)));
        if let Some((pu, pl)) = &prev {
            report.check(Check::greater(format!("r = {r}: upper bound increases in r"), &upper, pu));
            report.check(Check::greater(format!("r = {r}: lower bound increases in r"), &lower, pl));
        }
        prev = Some((upper, lower));
    }
    if let Some((pu, pl)) = prev {
        report.check(Check::less(format!("exact upper bound at r = {} below the displayed chain", spec.r_max), pu, &upper_lit));
        report.check(Check::greater(format!("exact lower bound at r = {} above the displayed chain", spec.r_max), pl, &lower_lit));
    }
    Ok(())
}

/// Claim `ranges.<id>` for `r_min <= r <= r_max`.
pub fn verify_range(spec: &RangeSpec, table: &PrimeTable) -> Result<CertificateReport, CertificateError> {
    require_sieve("the range certificates", spec.sieve_needed(), table.limit())?;
    let mut report = CertificateReport::new(
        format!("ranges.{}", spec.id),
        format!(
            "range certificate for {} <= r <= {}: descent at {} -> {}, ascent at {} -> {}",
            spec.r_min, spec.r_max, spec.descent, spec.ascent, spec.ascent, spec.after
        ),
    );
    if let Err(e) = build(spec, table, &mut report) {
        report.failed_step("range certificate", e);
    }
    report.note("upper bound r/(A(p^-) - W_{r-1}) and lower bound r/A(p^-) from the symmetric-polynomial sandwich");
    report.note("monotonicity in r is checked at every r rather than assumed");
    Ok(report)
}
