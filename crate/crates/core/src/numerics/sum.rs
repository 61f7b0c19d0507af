use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::interval::Interval;
use super::rational::{ceil_to_grid, floor_to_grid, Rational};

/// Nonnegative fraction `numer / denom` kept unreduced.
///
/// Sums of many unit fractions have denominators of millions of bits;
/// reducing them would cost a gcd far more expensive than the sum itself,
/// and comparisons only need cross-multiplication.
#[derive(Clone, Debug)]
pub struct UnreducedFraction {
    numer: BigUint,
    denom: BigUint,
}

impl UnreducedFraction {
    pub fn new(numer: BigUint, denom: BigUint) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Self { numer, denom }
    }

    pub fn zero() -> Self {
        Self::new(BigUint::zero(), BigUint::one())
    }

    pub fn numer(&self) -> &BigUint {
        &self.numer
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn cmp_rational(&self, other: &Rational) -> Ordering {
        if other.is_negative() {
            return Ordering::Greater;
        }
        let lhs = BigInt::from(self.numer.clone()) * other.denom();
        let rhs = other.numer() * BigInt::from(self.denom.clone());
        lhs.cmp(&rhs)
    }

    pub fn add(&self, other: &UnreducedFraction) -> UnreducedFraction {
        UnreducedFraction::new(
            &self.numer * &other.denom + &other.numer * &self.denom,
            &self.denom * &other.denom,
        )
    }

    /// Lowest-terms value. Costs one gcd on the full-size operands.
    pub fn reduce(&self) -> Rational {
        Rational::new(
            BigInt::from(self.numer.clone()),
            BigInt::from(self.denom.clone()),
        )
    }

    /// Outward enclosure on the `2^-bits` grid.
    pub fn enclose(&self, bits: u64) -> Interval {
        let scaled = (&self.numer << bits) / &self.denom;
        let lo = Rational::new(BigInt::from(scaled.clone()), BigInt::one() << bits);
        let exact = (&scaled * &self.denom) == (&self.numer << bits);
        let hi = if exact {
            lo.clone()
        } else {
            Rational::new(BigInt::from(scaled + 1u32), BigInt::one() << bits)
        };
        debug_assert!(floor_to_grid(&lo, bits) == lo && ceil_to_grid(&hi, bits) == hi);
        Interval::new(lo, hi).expect("ordered by construction")
    }
}

/// `sum 1/d` over `denoms`, combined pairwise so operand sizes stay balanced.
pub fn unit_fraction_sum(denoms: &[u64]) -> UnreducedFraction {
    match denoms.len() {
        0 => UnreducedFraction::zero(),
        1 => UnreducedFraction::new(BigUint::one(), BigUint::from(denoms[0])),
        n => {
            let (left, right) = denoms.split_at(n / 2);
            unit_fraction_sum(left).add(&unit_fraction_sum(right))
        }
    }
}
