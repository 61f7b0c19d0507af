//! Exact densities `delta_m(i)`, elementary symmetric values `E_m(i)` of the
//! weights `w_j = 1/(p_j - 1)`, the ratios `R_r(i)`, the threshold criterion
//! and the two-sided symmetric-polynomial bounds.
//!
//! Two independent routes reach `delta_m(i)`: the density recurrence over
//! the primes and `prod (p_j - 1)/p_j * E_m(i)`. [`delta`] computes both and
//! refuses to answer if they disagree.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{int, ratio as frac, Rational};
use crate::primes::{PrimeTable, PrimesError};

#[derive(Debug, Error)]
pub enum DensityError {
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error("R_{r}({i}) is undefined: delta_{r}({i}) = 0 needs i >= r")]
    UndefinedRatio { r: usize, i: usize },
    #[error("{0}")]
    BadArgument(String),
    #[error("recurrence and symmetric-function routes disagree at delta_{m}({i})")]
    DualPathMismatch { m: usize, i: usize },
    #[error("R_{r}({i}) escapes its symmetric-polynomial bounds")]
    SandwichViolated { r: usize, i: usize },
}

/// Row `E_0(i), ..., E_r(i)` of elementary symmetric values of the first
/// `i` weights, truncated at `r_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricState {
    consumed: usize,
    row: Vec<Rational>,
}

impl SymmetricState {
    pub fn new(r_cap: usize) -> Self {
        let mut row = vec![Rational::zero(); r_cap + 1];
        row[0] = Rational::one();
        Self { consumed: 0, row }
    }

    /// State after consuming the weights of `p_1, ..., p_i`.
    pub fn through(table: &PrimeTable, i: usize, r_cap: usize) -> Result<Self, DensityError> {
        let mut state = Self::new(r_cap);
        for j in 1..=i {
            state.advance_in_place(&weight(table.prime(j)?));
        }
        Ok(state)
    }

    pub fn advance(&self, w: &Rational) -> Self {
        let mut next = self.clone();
        next.advance_in_place(w);
        next
    }

    /// `E_m(i+1) = E_m(i) + w E_{m-1}(i)`, from the top of the row down so
    /// each entry still sees the old `E_{m-1}`.
    pub fn advance_in_place(&mut self, w: &Rational) {
        for m in (1..self.row.len()).rev() {
            if self.row[m - 1].is_zero() {
                continue;
            }
            let add = &self.row[m - 1] * w;
            self.row[m] += add;
        }
        self.consumed += 1;
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn r_cap(&self) -> usize {
        self.row.len() - 1
    }

    pub fn row(&self) -> &[Rational] {
        &self.row
    }

    /// `E_m(i)`; `None` above the cap.
    pub fn e(&self, m: usize) -> Option<&Rational> {
        self.row.get(m)
    }
}

/// `delta_0(i), ..., delta_r(i)` advanced by the density recurrence, with
/// `prod_{j <= i} (p_j - 1)/p_j` carried alongside.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityState {
    consumed: usize,
    deltas: Vec<Rational>,
    squarefree_factor: Rational,
}

impl DensityState {
    pub fn new(r_cap: usize) -> Self {
        let mut deltas = vec![Rational::zero(); r_cap + 1];
        deltas[0] = Rational::one();
        Self {
            consumed: 0,
            deltas,
            squarefree_factor: Rational::one(),
        }
    }

    pub fn through(table: &PrimeTable, i: usize, r_cap: usize) -> Result<Self, DensityError> {
        let mut state = Self::new(r_cap);
        for j in 1..=i {
            state.advance_in_place(table.prime(j)?);
        }
        Ok(state)
    }

    /// Consumes the next prime `p`:
    /// `delta_m(i) = (1 - 1/p) delta_m(i-1) + delta_{m-1}(i-1) / p`.
    pub fn advance_in_place(&mut self, p: u64) {
        let keep = frac(p - 1, p);
        let hit = frac(1, p);
        for m in (0..self.deltas.len()).rev() {
            let mut next = &self.deltas[m] * &keep;
            if m > 0 {
                next += &self.deltas[m - 1] * &hit;
            }
            self.deltas[m] = next;
        }
        self.squarefree_factor *= keep;
        self.consumed += 1;
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn deltas(&self) -> &[Rational] {
        &self.deltas
    }

    pub fn delta(&self, m: usize) -> Option<&Rational> {
        self.deltas.get(m)
    }

    pub fn squarefree_factor(&self) -> &Rational {
        &self.squarefree_factor
    }
}

/// `w = 1/(p - 1)`.
pub fn weight(p: u64) -> Rational {
    frac(1, p - 1)
}

/// Exact `delta_m(i)`, cross-checked between the recurrence and the
/// symmetric-function identity.
pub fn delta(m: usize, i: usize, table: &PrimeTable) -> Result<Rational, DensityError> {
    if i > table.len() {
        return Err(PrimesError::IndexOutOfRange {
            index: i,
            len: table.len(),
        }
        .into());
    }
    let dens = DensityState::through(table, i, m)?;
    let sym = SymmetricState::through(table, i, m)?;
    let via_recurrence = dens.deltas[m].clone();
    let via_symmetric = dens.squarefree_factor() * &sym.row[m];
    if via_recurrence != via_symmetric {
        return Err(DensityError::DualPathMismatch { m, i });
    }
    Ok(via_recurrence)
}

/// `d_k(p_i) = delta_{k-1}(i-1) / p_i`: density of integers whose `k`-th
/// smallest prime divisor is `p_i`.
pub fn d_k(k: usize, i: usize, table: &PrimeTable) -> Result<Rational, DensityError> {
    if k == 0 || i == 0 {
        return Err(DensityError::BadArgument(format!(
            "d_k(p_i) needs k >= 1 and i >= 1, got k = {k}, i = {i}"
        )));
    }
    let p = table.prime(i)?;
    Ok(delta(k - 1, i - 1, table)? / int(p))
}

/// `R_r(i) = delta_{r-1}(i) / delta_r(i) = E_{r-1}(i) / E_r(i)`.
///
/// Evaluated as `c_{r-1}(i) / c_r(i)` on the integer counts of
/// [`CountWalker`], so only the final quotient is ever reduced.
pub fn ratio(r: usize, i: usize, table: &PrimeTable) -> Result<Rational, DensityError> {
    if r == 0 {
        return Err(DensityError::BadArgument("R_r needs r >= 1".into()));
    }
    if i < r {
        return Err(DensityError::UndefinedRatio { r, i });
    }
    let walker = CountWalker::through(table, i, r)?;
    Ok(walker.ratio(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Descent,
    Ascent,
    Equal,
}

impl Verdict {
    /// Direction implied by `R` compared with `g + 1`.
    pub fn from_ordering(ord: Ordering) -> Self {
        match ord {
            Ordering::Less => Verdict::Descent,
            Ordering::Greater => Verdict::Ascent,
            Ordering::Equal => Verdict::Equal,
        }
    }
}

/// Outcome of comparing `R_r(i-1)` with `g_i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdVerdict {
    pub r: usize,
    pub i: usize,
    /// `R_r(i-1)`.
    pub ratio: Rational,
    pub gap_plus_one: u64,
    pub verdict: Verdict,
}

/// Direction of `d_{r+1}` across the gap `p_i -> p_{i+1}`.
pub fn threshold_check(r: usize, i: usize, table: &PrimeTable) -> Result<ThresholdVerdict, DensityError> {
    if r == 0 || i == 0 {
        return Err(DensityError::BadArgument(format!(
            "threshold check needs r >= 1 and i >= 1, got r = {r}, i = {i}"
        )));
    }
    if i - 1 < r {
        return Err(DensityError::UndefinedRatio { r, i: i - 1 });
    }
    let gap_plus_one = table.gap_at(i)? + 1;
    let ratio = ratio(r, i - 1, table)?;
    let verdict = Verdict::from_ordering(ratio.cmp(&int(gap_plus_one)));
    Ok(ThresholdVerdict {
        r,
        i,
        ratio,
        gap_plus_one,
        verdict,
    })
}

/// `(r / A(p_i), r / (A(p_i) - W_{r-1}))`, checked to bracket `R_r(i)`.
pub fn ratio_bounds(r: usize, i: usize, table: &PrimeTable) -> Result<(Rational, Rational), DensityError> {
    if r == 0 {
        return Err(DensityError::BadArgument("R_r needs r >= 1".into()));
    }
    if i < r {
        return Err(DensityError::UndefinedRatio { r, i });
    }
    let a = table.weight_prefix(i)?;
    let w = table.weight_prefix(r - 1)?;
    let lower = int(r as u64) / &a;
    let upper = int(r as u64) / (a - w);
    let exact = ratio(r, i, table)?;
    if !(lower <= exact && exact <= upper) {
        return Err(DensityError::SandwichViolated { r, i });
    }
    Ok((lower, upper))
}

/// Integer form of the density recurrence: `c_m(i) = delta_m(i) * (p_1 ... p_i)`,
/// so `c_m(i) = (p_i - 1) c_m(i-1) + c_{m-1}(i-1)` with no fractions at all.
/// Used where thousands of primes would make reduced rationals slow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountWalker {
    consumed: usize,
    counts: Vec<BigUint>,
    modulus: BigUint,
}

impl CountWalker {
    pub fn new(r_cap: usize) -> Self {
        let mut counts = vec![BigUint::zero(); r_cap + 1];
        counts[0] = BigUint::one();
        Self {
            consumed: 0,
            counts,
            modulus: BigUint::one(),
        }
    }

    pub fn through(table: &PrimeTable, i: usize, r_cap: usize) -> Result<Self, DensityError> {
        let mut walker = Self::new(r_cap);
        for j in 1..=i {
            walker.advance(table.prime(j)?);
        }
        Ok(walker)
    }

    pub fn advance(&mut self, p: u64) {
        for m in (0..self.counts.len()).rev() {
            let mut next = &self.counts[m] * (p - 1);
            if m > 0 {
                next += &self.counts[m - 1];
            }
            self.counts[m] = next;
        }
        self.modulus *= p;
        self.consumed += 1;
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `c_{r-1} / c_r`, i.e. `R_r` at the current index; needs `1 <= r <= r_cap`
    /// and `c_r > 0`.
    pub fn ratio(&self, r: usize) -> Rational {
        Rational::new(self.counts[r - 1].clone().into(), self.counts[r].clone().into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepMismatch {
    pub r: usize,
    pub p: u64,
    pub next: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub checked: u64,
    pub descents: u64,
    pub ascents: u64,
    pub ties: u64,
    pub mismatches: Vec<SweepMismatch>,
}

/// For every `1 <= r <= r_max` and every gap `p_i -> p_{i+1}` with
/// `p_i <= p_max` and `i - 1 >= r`, compares the sign of
/// `d_{r+1}(p_{i+1}) - d_{r+1}(p_i)` (by exact subtraction) with the
/// threshold verdict for `R_r(i-1)` against `g_i + 1`.
///
/// On the common denominator `(p_1 ... p_i) p_{i+1}` the difference has
/// numerator `c_r(i) - p_{i+1} c_r(i-1)`, and `R_r(i-1) = c_{r-1}(i-1) / c_r(i-1)`.
pub fn threshold_sweep(table: &PrimeTable, r_max: usize, p_max: u64) -> Result<SweepSummary, DensityError> {
    if r_max == 0 {
        return Err(DensityError::BadArgument("sweep needs r_max >= 1".into()));
    }
    let last = table.pi(p_max.min(table.limit()))?;
    // the final gap needs p_{i+1} in the table
    if last >= table.len() {
        return Err(PrimesError::BeyondLimit {
            value: p_max + 1,
            limit: table.limit(),
        }
        .into());
    }
    let mut summary = SweepSummary::default();
    let mut walker = CountWalker::new(r_max);
    for i in 1..=last {
        let before = walker.counts.clone();
        let p = table.prime(i)?;
        let next = table.prime(i + 1)?;
        walker.advance(p);
        for r in 1..=r_max.min(i - 1) {
            let lhs = &walker.counts[r];
            let rhs = &before[r] * next;
            let sign = lhs.cmp(&rhs);
            let threshold = before[r - 1].cmp(&(&before[r] * (next - p + 1)));
            summary.checked += 1;
            match threshold {
                Ordering::Less => summary.descents += 1,
                Ordering::Greater => summary.ascents += 1,
                Ordering::Equal => summary.ties += 1,
            }
            if sign != threshold {
                summary.mismatches.push(SweepMismatch { r, p, next });
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::parse_decimal;

    fn table() -> PrimeTable {
        PrimeTable::sieve(2000).unwrap()
    }

    #[test]
    fn advance_examples() {
        let s = SymmetricState::new(3).advance(&int(1));
        assert_eq!(s.row()[..2], [int(1), int(1)]);
        let s = s.advance(&frac(1, 2)).advance(&frac(1, 4));
        assert_eq!(s.e(2), Some(&frac(7, 8)));
        assert_eq!(s.e(3), Some(&frac(1, 8)));
        assert_eq!(s.consumed(), 3);
    }

    #[test]
    fn delta_examples() {
        let t = table();
        assert_eq!(delta(0, 0, &t).unwrap(), int(1));
        assert_eq!(delta(1, 2, &t).unwrap(), frac(1, 2));
        assert_eq!(delta(0, 3, &t).unwrap(), frac(4, 15));
        assert_eq!(delta(5, 3, &t).unwrap(), int(0));
    }

    #[test]
    fn d_k_examples() {
        let t = table();
        assert_eq!(d_k(1, 1, &t).unwrap(), frac(1, 2));
        let i13 = t.index_of(13).unwrap();
        let d13 = d_k(4, i13, &t).unwrap();
        let d17 = d_k(4, i13 + 1, &t).unwrap();
        let d19 = d_k(4, i13 + 2, &t).unwrap();
        assert!(d17 < d13);
        assert!(d19 > d17);
        assert!(d_k(0, 1, &t).is_err());
    }

    #[test]
    fn ratio_examples() {
        let t = table();
        let r = ratio(3, t.index_of(11).unwrap(), &t).unwrap();
        assert!(int(3) < r && r < parse_decimal("3.506").unwrap());
        let r = ratio(19, t.index_of(1129).unwrap() - 1, &t).unwrap();
        assert!(r < parse_decimal("20.742").unwrap());
        assert_eq!(ratio(1, 1, &t).unwrap(), int(1));
        assert!(matches!(ratio(4, 3, &t), Err(DensityError::UndefinedRatio { .. })));
    }

    #[test]
    fn threshold_examples() {
        let t = table();
        let v = threshold_check(3, t.index_of(13).unwrap(), &t).unwrap();
        assert_eq!(v.verdict, Verdict::Descent);
        assert_eq!(v.gap_plus_one, 5);
        let v = threshold_check(8, t.index_of(113).unwrap(), &t).unwrap();
        assert_eq!(v.verdict, Verdict::Descent);
        assert!(threshold_check(1, 1, &t).is_err());
    }

    #[test]
    fn ratio_bounds_examples() {
        let t = PrimeTable::sieve(15_731).unwrap();
        let (lower, upper) = ratio_bounds(1, 7, &t).unwrap();
        assert_eq!(lower, upper);
        assert_eq!(lower, int(1) / t.weight_prefix(7).unwrap());
        let i = t.index_of(15_683).unwrap();
        let (lower, _) = ratio_bounds(20, i, &t).unwrap();
        assert!(lower > parse_decimal("6.053").unwrap());
        let (_, upper) = ratio_bounds(30, i - 1, &t).unwrap();
        assert!(upper < parse_decimal("43.409").unwrap());
    }

    #[test]
    fn count_walker_matches_densities() {
        let t = table();
        let mut w = CountWalker::new(4);
        let mut d = DensityState::new(4);
        for &p in &t.primes()[..12] {
            w.advance(p);
            d.advance_in_place(p);
            for m in 0..=4 {
                let c = Rational::new(w.counts()[m].clone().into(), w.modulus().clone().into());
                assert_eq!(&c, d.delta(m).unwrap());
            }
        }
    }

    #[test]
    fn count_ratio_matches_symmetric_row() {
        let t = table();
        for i in [3, 10, 40] {
            let s = SymmetricState::through(&t, i, 3).unwrap();
            assert_eq!(ratio(3, i, &t).unwrap(), s.e(2).unwrap() / s.e(3).unwrap());
        }
    }

    #[test]
    fn small_sweep_has_no_mismatch() {
        let t = table();
        let s = threshold_sweep(&t, 5, 500).unwrap();
        assert!(s.mismatches.is_empty());
        assert!(s.descents > 0 && s.ascents > 0);
    }
}
