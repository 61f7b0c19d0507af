//! The seventeen small-case rows `r = 3..19`: an exact descent followed by a
//! later exact ascent of `d_{r+1}`.

use super::report::{CertificateReport, Check};
use super::{lit, require_sieve, CertificateError};
use crate::densities::{ratio, ratio_bounds};
use crate::numerics::{int, Rational};
use crate::primes::PrimeTable;

/// Largest prime the table touches.
pub const TABLE1_SIEVE: u64 = 1153;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub r: usize,
    /// Descent gap `a -> a + g`.
    pub a: u64,
    pub g: u64,
    /// Displayed upper bound for `R_r(a^-)`.
    pub descent_literal: &'static str,
    /// Ascent gap `b -> b + h`.
    pub b: u64,
    pub h: u64,
    /// Displayed lower bound for `R_r(b^-)`.
    pub ascent_literal: &'static str,
}

const fn row(
    r: usize,
    a: u64,
    g: u64,
    descent_literal: &'static str,
    b: u64,
    h: u64,
    ascent_literal: &'static str,
) -> TableRow {
    TableRow {
        r,
        a,
        g,
        descent_literal,
        b,
        h,
        ascent_literal,
    }
}

pub const TABLE1: [TableRow; 17] = [
    row(3, 13, 4, "3.506", 17, 2, "3.048"),
    row(4, 23, 6, "4.759", 29, 2, "4.371"),
    row(5, 31, 6, "6.748", 37, 4, "6.263"),
    row(6, 73, 6, "6.437", 79, 4, "6.282"),
    row(7, 89, 8, "8.085", 97, 4, "7.911"),
    row(8, 113, 14, "9.303", 127, 4, "9.145"),
    row(9, 113, 14, "11.677", 127, 4, "11.452"),
    row(10, 113, 14, "14.414", 127, 4, "14.101"),
    row(11, 293, 14, "12.085", 307, 4, "12.011"),
    row(12, 293, 14, "14.050", 307, 4, "13.959"),
    row(13, 523, 18, "13.651", 541, 6, "13.607"),
    row(14, 523, 18, "15.415", 541, 6, "15.364"),
    row(15, 523, 18, "17.279", 541, 6, "17.218"),
    row(16, 887, 20, "16.752", 907, 4, "16.721"),
    row(17, 887, 20, "18.438", 907, 4, "18.402"),
    row(18, 887, 20, "20.191", 907, 4, "20.151"),
    row(19, 1129, 22, "20.742", 1151, 2, "20.711"),
];

fn index_of(table: &PrimeTable, p: u64) -> Result<usize, CertificateError> {
    table
        .index_of(p)
        .ok_or_else(|| crate::primes::PrimesError::NotPrime(p).into())
}

/// Checks shared by the descent and ascent claims of one gap: the gap
/// length, the exact ratio against the literal and the literal against
/// `g + 1`, and the symmetric-polynomial sandwich around the exact ratio.
fn gap_claim(
    report: &mut CertificateReport,
    table: &PrimeTable,
    r: usize,
    p: u64,
    g: u64,
    literal: &str,
    descent: bool,
) -> Result<(), CertificateError> {
    let i = index_of(table, p)?;
    report.check(Check::equal(format!("gap {p} -> next prime"), table.gap_at(i)?, g));
    let exact: Rational = ratio(r, i - 1, table)?;
    let bound = lit(literal);
    let threshold = int(g + 1);
    let name = format!("R_{r}({p}^-)");
    if descent {
        report.check(Check::less(format!("{name} < {literal}"), &exact, &bound));
        report.check(Check::less(format!("{literal} < g + 1"), &bound, &threshold));
    } else {
        report.check(Check::greater(format!("{name} > {literal}"), &exact, &bound));
        report.check(Check::greater(format!("{literal} > g + 1"), &bound, &threshold));
    }
    let (lower, upper) = ratio_bounds(r, i - 1, table)?;
    report.check(Check::less(format!("r / A({p}^-) < {name}"), lower, &exact));
    report.check(Check::less(format!("{name} < r / (A({p}^-) - W_{})", r - 1), &exact, upper));
    Ok(())
}

fn row_reports(table: &PrimeTable, row: &TableRow) -> Vec<CertificateReport> {
    let r = row.r;
    let mut descent = CertificateReport::new(
        format!("table1.r{r}.descent"),
        format!("small-case table, row r = {r}, descent at {} -> {}", row.a, row.a + row.g),
    );
    if let Err(e) = gap_claim(&mut descent, table, r, row.a, row.g, row.descent_literal, true) {
        descent.failed_step("descent certificate", e);
    }
    descent.note(format!("strict descent of d_{} across the gap (threshold criterion)", r + 1));

    let mut ascent = CertificateReport::new(
        format!("table1.r{r}.ascent"),
        format!("small-case table, row r = {r}, ascent at {} -> {}", row.b, row.b + row.h),
    );
    if let Err(e) = gap_claim(&mut ascent, table, r, row.b, row.h, row.ascent_literal, false) {
        ascent.failed_step("ascent certificate", e);
    }
    ascent.note(format!("strict ascent of d_{} across the gap (threshold criterion)", r + 1));

    let mut order = CertificateReport::new(
        format!("table1.r{r}.order"),
        format!("small-case table, row r = {r}, descent before ascent"),
    );
    order.check(Check::less("descent gap ends no later than the ascent gap starts", row.a + row.g, row.b + 1));
    order.check(Check::less("descent prime precedes ascent prime", row.a, row.b));
    match index_of(table, row.a) {
        Ok(i) => {
            order.check(Check::greater(format!("pi({}^-) >= r", row.a), (i - 1) as u64, (r - 1) as u64));
        }
        Err(e) => {
            order.failed_step("index of descent prime", e);
        }
    }
    order.note("a descent followed later by an ascent rules out unimodality");
    vec![descent, ascent, order]
}

/// One descent, one ascent and one ordering claim per row.
pub fn verify_table1(table: &PrimeTable) -> Result<Vec<CertificateReport>, CertificateError> {
    require_sieve("the small-case table", TABLE1_SIEVE, table.limit())?;
    Ok(TABLE1.iter().flat_map(|row| row_reports(table, row)).collect())
}
