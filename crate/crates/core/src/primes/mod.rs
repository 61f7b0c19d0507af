//! The indexed prime sequence `p_1 = 2, p_2 = 3, ...` with gaps, the weights
//! `w_j = 1/(p_j - 1)` and their prefix sums, primorials and exact digit
//! counts.

pub mod cache;
pub mod sieve;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::numerics::{rational::pow10, unit_fraction_sum, Rational};

pub use cache::load_or_sieve;
pub use sieve::{for_each_prime_in, is_prime_trial, is_prime_u64, range_summary, RangeSummary};

/// Largest sieve limit accepted unless the caller raises the cap.
pub const DEFAULT_SIEVE_CAP: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum PrimesError {
    #[error("sieve limit must be at least 2, got {0}")]
    LimitTooSmall(u64),
    #[error("sieve limit {limit} exceeds the configured cap {cap}")]
    OverCap { limit: u64, cap: u64 },
    #[error("prime index {index} out of range (table holds {len} primes)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{value} lies beyond the sieve limit {limit}")]
    BeyondLimit { value: u64, limit: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("decimal digits need n >= 1")]
    NotPositive,
    #[error("prime cache rejected: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// All primes up to `limit`, in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    pub fn sieve(limit: u64) -> Result<Self, PrimesError> {
        Self::sieve_with_cap(limit, DEFAULT_SIEVE_CAP)
    }

    pub fn sieve_with_cap(limit: u64, cap: u64) -> Result<Self, PrimesError> {
        if limit < 2 {
            return Err(PrimesError::LimitTooSmall(limit));
        }
        if limit > cap {
            return Err(PrimesError::OverCap { limit, cap });
        }
        let mut primes = Vec::new();
        for_each_prime_in(2, limit + 1, |p| primes.push(p));
        Ok(Self { primes, limit })
    }

    /// Assembles a table from already-validated parts (used by the cache).
    pub(crate) fn from_parts(primes: Vec<u64>, limit: u64) -> Self {
        Self { primes, limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `p_i`, 1-based.
    pub fn prime(&self, i: usize) -> Result<u64, PrimesError> {
        if i == 0 || i > self.primes.len() {
            return Err(PrimesError::IndexOutOfRange {
                index: i,
                len: self.primes.len(),
            });
        }
        Ok(self.primes[i - 1])
    }

    /// 1-based index of `p`, if it is a prime of the table.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|k| k + 1)
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }

    /// `pi(y)`: number of primes `<= y`.
    pub fn pi(&self, y: u64) -> Result<usize, PrimesError> {
        self.check_within(y)?;
        Ok(self.primes.partition_point(|&p| p <= y))
    }

    fn check_within(&self, value: u64) -> Result<(), PrimesError> {
        if value > self.limit {
            Err(PrimesError::BeyondLimit {
                value,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// `g_i = p_{i+1} - p_i`.
    pub fn gap_at(&self, i: usize) -> Result<u64, PrimesError> {
        Ok(self.prime(i + 1)? - self.prime(i)?)
    }

    /// `W_n = sum_{j <= n} 1/(p_j - 1)`; `W_0 = 0`.
    pub fn weight_prefix(&self, n: usize) -> Result<Rational, PrimesError> {
        if n > self.primes.len() {
            return Err(PrimesError::IndexOutOfRange {
                index: n,
                len: self.primes.len(),
            });
        }
        let denoms: Vec<u64> = self.primes[..n].iter().map(|p| p - 1).collect();
        Ok(unit_fraction_sum(&denoms).reduce())
    }

    /// `sum_{p <= y} 1/(p - 1)`, or `sum_{p < y}` when `strict`.
    pub fn restricted_sum(&self, y: u64, strict: bool) -> Result<Rational, PrimesError> {
        self.check_within(y)?;
        let count = if strict {
            self.primes.partition_point(|&p| p < y)
        } else {
            self.primes.partition_point(|&p| p <= y)
        };
        self.weight_prefix(count)
    }

    pub fn weights(&self, n: usize) -> Result<WeightVector, PrimesError> {
        WeightVector::new(self, n)
    }

    /// `q# = prod_{p <= q} p` for a prime `q` of the table.
    pub fn primorial(&self, q: u64) -> Result<BigUint, PrimesError> {
        self.check_within(q)?;
        let count = self.index_of(q).ok_or(PrimesError::NotPrime(q))?;
        Ok(product_tree(&self.primes[..count]))
    }

    /// Checks the sampled integers `<= limit` against trial division, in
    /// both directions. Returns the first disagreeing integer.
    pub fn spot_check<I: IntoIterator<Item = u64>>(&self, samples: I) -> Result<(), u64> {
        for n in samples {
            if n <= self.limit && self.contains(n) != is_prime_trial(n) {
                return Err(n);
            }
        }
        Ok(())
    }
}

fn product_tree(values: &[u64]) -> BigUint {
    match values.len() {
        0 => BigUint::one(),
        1 => BigUint::from(values[0]),
        n => {
            let (l, r) = values.split_at(n / 2);
            product_tree(l) * product_tree(r)
        }
    }
}

/// The weights `w_j = 1/(p_j - 1)` for `j <= n` and their prefix sums,
/// with `prefix[0] = W_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<Rational>,
    prefix: Vec<Rational>,
}

impl WeightVector {
    pub fn new(table: &PrimeTable, n: usize) -> Result<Self, PrimesError> {
        if n > table.len() {
            return Err(PrimesError::IndexOutOfRange {
                index: n,
                len: table.len(),
            });
        }
        let weights: Vec<Rational> = table.primes()[..n]
            .iter()
            .map(|&p| Rational::new(1.into(), (p - 1).into()))
            .collect();
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(Rational::zero());
        for w in &weights {
            let next = prefix.last().unwrap() + w;
            prefix.push(next);
        }
        Ok(Self { weights, prefix })
    }

    /// `w_j`, 1-based.
    pub fn weight(&self, j: usize) -> Option<&Rational> {
        j.checked_sub(1).and_then(|k| self.weights.get(k))
    }

    /// `W_n`.
    pub fn prefix(&self, n: usize) -> Option<&Rational> {
        self.prefix.get(n)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

/// Number of base-10 digits of `n >= 1`, decided by exact comparison with
/// powers of ten.
pub fn decimal_digits(n: &BigUint) -> Result<u64, PrimesError> {
    if n.is_zero() {
        return Err(PrimesError::NotPositive);
    }
    // floor((bits - 1) log10 2) + 1 is exact or one short
    let mut digits = (n.bits() - 1) * 30_103 / 100_000 + 1;
    while &pow10(digits as u32) <= n {
        digits += 1;
    }
    while digits > 1 && &pow10(digits as u32 - 1) > n {
        digits -= 1;
    }
    Ok(digits)
}
