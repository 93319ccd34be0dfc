//! Exact rationals and rational intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator.
pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> BigRat {
    if e >= 0 {
        BigRat::from_integer(BigInt::one() << (e as usize))
    } else {
        BigRat::new_raw(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Smallest integer `g` with `2^g >= q`. `q` must be positive.
pub fn ceil_log2(q: &BigRat) -> i64 {
    assert!(q.is_positive(), "ceil_log2 of a non-positive rational");
    let (n, d) = (q.numer(), q.denom());
    // Sign of 2^g d - n, by shifting whichever side needs it.
    let cmp = |g: i64| {
        if g >= 0 {
            (d << g as usize).cmp(n)
        } else {
            d.cmp(&(n << (-g) as usize))
        }
    };
    let mut g = n.bits() as i64 - d.bits() as i64;
    // 2^(g-1) < q < 2^(g+1) at this point.
    while cmp(g) == Ordering::Less {
        g += 1;
    }
    while cmp(g - 1) != Ordering::Less {
        g -= 1;
    }
    g
}

/// Largest integer `g` with `2^g <= q`. `q` must be positive.
pub fn floor_log2(q: &BigRat) -> i64 {
    let c = ceil_log2(q);
    let pow = |x: &BigInt| x.trailing_zeros() == Some(x.bits() - 1);
    if pow(q.numer()) && pow(q.denom()) {
        c
    } else {
        c - 1
    }
}

/// Floor of `2^shift * |q|` as an integer.
pub fn floor_scaled_abs(q: &BigRat, shift: u64) -> BigInt {
    (q.numer().abs() << (shift as usize)).div_floor(q.denom())
}

/// Print as `num/den` (integers print as `num/1` for uniform parsing).
pub fn fmt_rat(q: &BigRat) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRat::new(n, d))
        }
        None => Ok(BigRat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: BigRat,
    hi: BigRat,
}

impl RatInterval {
    pub fn new(lo: BigRat, hi: BigRat) -> Result<Self> {
        if lo > hi {
            return Err(Error::invalid(format!(
                "interval endpoints out of order: [{}, {}]",
                lo, hi
            )));
        }
        Ok(RatInterval { lo, hi })
    }

    pub fn lo(&self) -> &BigRat {
        &self.lo
    }

    pub fn hi(&self) -> &BigRat {
        &self.hi
    }

    pub fn width(&self) -> BigRat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRat {
        (&self.lo + &self.hi) / int(2)
    }

    /// Largest absolute value attained on the interval.
    pub fn max_abs(&self) -> BigRat {
        std::cmp::max(self.lo.abs(), self.hi.abs())
    }

    pub fn contains(&self, x: &BigRat) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Widen by `r` on both sides.
    pub fn widen(&self, r: &BigRat) -> RatInterval {
        RatInterval {
            lo: &self.lo - r,
            hi: &self.hi + r,
        }
    }

    pub fn intersect(&self, other: &RatInterval) -> Option<RatInterval> {
        let lo = std::cmp::max(&self.lo, &other.lo).clone();
        let hi = std::cmp::min(&self.hi, &other.hi).clone();
        (lo <= hi).then_some(RatInterval { lo, hi })
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rat(&self.lo), fmt_rat(&self.hi))
    }
}
