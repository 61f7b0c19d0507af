//! Brute-force ground truth for the densities by counting residues.
//!
//! Divisibility by `p_1, ..., p_i` is periodic modulo `p_1 ... p_i`, so
//! `delta_m(i)` is exactly the share of residues divisible by exactly `m`
//! of those primes. Nothing here uses the density recurrence.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::densities::{delta, DensityError};
use crate::numerics::{ratio, Rational};
use crate::primes::{PrimeTable, PrimesError};

/// Largest `i` the census will enumerate (modulus 9,699,690).
pub const MAX_CENSUS_INDEX: usize = 8;

/// Residues per rayon task.
const BLOCK: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("census over the first {0} primes exceeds the enumeration ceiling of {MAX_CENSUS_INDEX}")]
    TooLarge(usize),
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error(transparent)]
    Density(#[from] DensityError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueCensus {
    /// `p_1 ... p_i`.
    pub modulus: u64,
    /// `counts[m]` residues are divisible by exactly `m` of the primes.
    pub counts: Vec<u64>,
}

impl ResidueCensus {
    pub fn density(&self, m: usize) -> Rational {
        ratio(self.counts.get(m).copied().unwrap_or(0), self.modulus)
    }
}

fn first_primes(i: usize, table: &PrimeTable) -> Result<Vec<u64>, OracleError> {
    if i > MAX_CENSUS_INDEX {
        return Err(OracleError::TooLarge(i));
    }
    (1..=i).map(|j| Ok(table.prime(j)?)).collect()
}

/// Counts by visiting every residue modulo `p_1 ... p_i`.
pub fn census(i: usize, table: &PrimeTable) -> Result<ResidueCensus, OracleError> {
    let primes = first_primes(i, table)?;
    let modulus: u64 = primes.iter().product();
    let blocks: Vec<u64> = (0..modulus.div_ceil(BLOCK)).collect();
    let counts = blocks
        .par_iter()
        .map(|&b| {
            let mut local = vec![0u64; i + 1];
            for n in b * BLOCK..((b + 1) * BLOCK).min(modulus) {
                let hits = primes.iter().filter(|&&p| n % p == 0).count();
                local[hits] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; i + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(ResidueCensus { modulus, counts })
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, j| acc * (n - j) as i128 / (j + 1) as i128)
}

/// Counts by inclusion-exclusion over subsets of the primes:
/// `c_m = sum_{|S| >= m} (-1)^(|S| - m) C(|S|, m) * modulus / prod_S p`.
pub fn census_inclusion_exclusion(i: usize, table: &PrimeTable) -> Result<ResidueCensus, OracleError> {
    let primes = first_primes(i, table)?;
    let modulus: u64 = primes.iter().product();
    let mut signed = vec![0i128; i + 1];
    for mask in 0u32..(1 << i) {
        let size = mask.count_ones() as usize;
        let divisor: u64 = (0..i).filter(|b| mask >> b & 1 == 1).map(|b| primes[b]).product();
        let multiples = (modulus / divisor) as i128;
        for (m, slot) in signed.iter_mut().enumerate().take(size + 1) {
            let sign = if (size - m).is_multiple_of(2) { 1 } else { -1 };
            *slot += sign * binomial(size, m) * multiples;
        }
    }
    let counts = signed.into_iter().map(|c| c as u64).collect();
    Ok(ResidueCensus { modulus, counts })
}

/// Residues modulo `p_1 ... p_i` whose `k`-th smallest prime divisor among
/// `p_1, ..., p_i` is `p_i`, as a share of the modulus: the census value of
/// `d_k(p_i)`.
pub fn census_d_k(k: usize, i: usize, table: &PrimeTable) -> Result<Rational, OracleError> {
    let primes = first_primes(i, table)?;
    if k == 0 || i == 0 {
        return Ok(Rational::from_integer(0.into()));
    }
    let modulus: u64 = primes.iter().product();
    let last = primes[i - 1];
    let hits = (0..modulus)
        .step_by(last as usize)
        .filter(|n| primes[..i - 1].iter().filter(|&&p| n % p == 0).count() == k - 1)
        .count() as u64;
    Ok(ratio(hits, modulus))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub i: usize,
    pub checked: usize,
    /// First `m` with `c_m / modulus != delta_m(i)`.
    pub first_mismatch: Option<usize>,
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compares the census with `delta_m(i)` for every `m <= i`.
pub fn oracle_equals_formula(i: usize, table: &PrimeTable) -> Result<OracleVerdict, OracleError> {
    let c = census(i, table)?;
    let mut first_mismatch = None;
    for m in 0..=i {
        if c.density(m) != delta(m, i, table)? {
            first_mismatch = Some(m);
            break;
        }
    }
    Ok(OracleVerdict {
        i,
        checked: i + 1,
        first_mismatch,
    })
}
