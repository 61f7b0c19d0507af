use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::rational::{ceil_to_grid, floor_to_grid, render, Rational, Rounding};
use super::NumericsError;

/// Closed interval `[lo, hi]` of exact rationals.
///
/// Every operation returns an interval containing the true real result.
/// Arithmetic is exact; [`Interval::rounded`] snaps endpoints outward onto
/// a dyadic grid to keep the rationals small.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

/// Outcome of comparing two enclosures. `Overlap` never certifies anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntervalOrdering {
    Less,
    Greater,
    Overlap,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, NumericsError> {
        if lo > hi {
            return Err(NumericsError::Domain(format!(
                "empty interval [{}, {}]",
                render(&lo, Rounding::Down),
                render(&hi, Rounding::Up)
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    /// True when `other` lies inside `self`.
    pub fn encloses(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn compare(&self, other: &Interval) -> IntervalOrdering {
        interval_compare(self, other)
    }

    /// Outward rounding onto the `2^-bits` grid.
    pub fn rounded(&self, bits: u64) -> Self {
        Self {
            lo: floor_to_grid(&self.lo, bits),
            hi: ceil_to_grid(&self.hi, bits),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn add_rational(&self, k: &Rational) -> Self {
        Self {
            lo: &self.lo + k,
            hi: &self.hi + k,
        }
    }

    pub fn recip(&self) -> Result<Self, NumericsError> {
        if self.contains_zero() {
            return Err(NumericsError::Domain(
                "reciprocal of an interval containing zero".into(),
            ));
        }
        Ok(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, other: &Interval) -> Result<Self, NumericsError> {
        Ok(self * &other.recip()?)
    }

    /// Square; tighter than `x * x` when the interval straddles zero.
    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Self {
                lo: Rational::zero(),
                hi: a.max(b),
            }
        } else if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    /// Image under a function known to be increasing on this interval.
    pub fn map_increasing<F>(&self, f: F) -> Self
    where
        F: Fn(&Rational) -> Rational,
    {
        Self {
            lo: f(&self.lo),
            hi: f(&self.hi),
        }
    }

    /// Image under a function known to be decreasing on this interval.
    pub fn map_decreasing<F>(&self, f: F) -> Self
    where
        F: Fn(&Rational) -> Rational,
    {
        Self {
            lo: f(&self.hi),
            hi: f(&self.lo),
        }
    }
}

/// `Less` iff `a.hi < b.lo`, `Greater` iff `a.lo > b.hi`, otherwise `Overlap`.
pub fn interval_compare(a: &Interval, b: &Interval) -> IntervalOrdering {
    if a.hi < b.lo {
        IntervalOrdering::Less
    } else if a.lo > b.hi {
        IntervalOrdering::Greater
    } else {
        IntervalOrdering::Overlap
    }
}

impl From<Rational> for Interval {
    fn from(x: Rational) -> Self {
        Interval::point(x)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            render(&self.lo, Rounding::Down),
            render(&self.hi, Rounding::Up)
        )
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval { lo, hi }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, ratio};

    fn iv(a: i64, b: i64) -> Interval {
        Interval::new(int(a), int(b)).unwrap()
    }

    #[test]
    fn compare_cases() {
        assert_eq!(interval_compare(&iv(1, 2), &iv(3, 4)), IntervalOrdering::Less);
        assert_eq!(interval_compare(&iv(3, 4), &iv(1, 2)), IntervalOrdering::Greater);
        assert_eq!(interval_compare(&iv(1, 3), &iv(2, 4)), IntervalOrdering::Overlap);
        // touching endpoints do not certify a strict inequality
        assert_eq!(interval_compare(&iv(1, 2), &iv(2, 3)), IntervalOrdering::Overlap);
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(Interval::new(int(2), int(1)).is_err());
    }

    #[test]
    fn arithmetic_signs() {
        let a = iv(-2, 3);
        let b = iv(-5, 1);
        assert_eq!(&a * &b, iv(-15, 10));
        assert_eq!(&a - &b, iv(-3, 8));
        assert_eq!(a.square(), iv(0, 9));
        assert_eq!(iv(-3, -2).square(), iv(4, 9));
        assert!(a.recip().is_err());
        assert_eq!(iv(2, 4).recip().unwrap(), Interval::new(ratio(1, 4), ratio(1, 2)).unwrap());
        assert_eq!(iv(1, 2).scale(&int(-3)), iv(-6, -3));
    }

    #[test]
    fn outward_rounding_encloses() {
        let x = Interval::new(ratio(1, 3), ratio(2, 3)).unwrap();
        let r = x.rounded(5);
        assert!(r.encloses(&x));
        assert!(r.width() <= x.width() + ratio(2, 32));
    }
}
