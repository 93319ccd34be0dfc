//! Bits of reals given by fast-converging series with rational terms.
//!
//! A [`TermSeries`] has terms `t_k = base^(-k c) * sum_j num_j(k) / den_j(k)`
//! and a tail bound `|R_m| <= C base^(-(m+1) c)`. If the limit is irrational
//! with irrationality measure at most `mu`, then the partial sum `S_m` with
//! tail below `eps_n = c_mu 2^-(ceil(mu) n + 2)` has the correct `n`-th bit;
//! the gap assertion checks that at runtime.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::bits::checked_bit;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::rat::{int, pow2, BigRat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermSeries {
    pub base: u32,
    pub c: u32,
    /// `(num_j, den_j)` pairs.
    pub parts: Vec<(IntPoly, IntPoly)>,
    pub tail_constant: BigRat,
}

/// Upper bound on the irrationality measure and its effective constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureCert {
    pub mu: BigRat,
    pub c_mu: BigRat,
}

impl MeasureCert {
    pub fn new(mu: BigRat, c_mu: BigRat) -> Result<Self> {
        if mu < int(2) || !c_mu.is_positive() {
            return Err(Error::invalid("measure certificate needs mu >= 2 and c_mu > 0"));
        }
        Ok(MeasureCert { mu, c_mu })
    }

    /// Defaults used for pi: `mu = 8`, `c_mu = 1`.
    pub fn pi_default() -> Self {
        MeasureCert {
            mu: int(8),
            c_mu: int(1),
        }
    }

    pub fn epsilon(&self, n: u64) -> BigRat {
        let mu = self.mu.ceil().to_integer();
        let mu: i64 = mu.try_into().expect("measure fits in i64");
        &self.c_mu * pow2(-(mu * n as i64 + 2))
    }
}

const VALIDATION_HORIZON: u64 = 64;
const VALIDATION_REFERENCE: u64 = 80;

impl TermSeries {
    /// Builds a series and checks its tail constant against partial-sum
    /// differences for every `m <= 64`.
    pub fn new(base: u32, c: u32, parts: Vec<(IntPoly, IntPoly)>, tail_constant: BigRat) -> Result<Self> {
        if base < 2 || c == 0 || parts.is_empty() {
            return Err(Error::invalid("series needs base >= 2, c >= 1 and at least one term"));
        }
        let s = TermSeries {
            base,
            c,
            parts,
            tail_constant,
        };
        let mut sums = Vec::with_capacity(VALIDATION_REFERENCE as usize + 1);
        let mut acc = BigRat::zero();
        for k in 0..=VALIDATION_REFERENCE {
            acc += s.term(k)?;
            sums.push(acc.clone());
        }
        let reference = &sums[VALIDATION_REFERENCE as usize];
        for m in 0..=VALIDATION_HORIZON {
            if (reference - &sums[m as usize]).abs() > s.tail_bound(m) {
                return Err(Error::invalid(format!("tail constant too small at m = {m}")));
            }
        }
        Ok(s)
    }

    pub fn term(&self, k: u64) -> Result<BigRat> {
        let kk = BigRat::from_integer(BigInt::from(k));
        let mut sum = BigRat::zero();
        for (num, den) in &self.parts {
            let dv = den.eval(&kk);
            if dv.is_zero() {
                return Err(Error::invalid(format!("term denominator vanishes at k = {k}")));
            }
            sum += num.eval(&kk) / dv;
        }
        Ok(sum / self.scale(k))
    }

    /// `base^(k c)`.
    fn scale(&self, k: u64) -> BigRat {
        BigRat::from_integer(num_traits::pow(BigInt::from(self.base), (k * self.c as u64) as usize))
    }

    pub fn partial_sum(&self, m: u64) -> Result<BigRat> {
        let mut acc = BigRat::zero();
        for k in 0..=m {
            acc += self.term(k)?;
        }
        Ok(acc)
    }

    /// `C base^(-(m+1) c)`.
    pub fn tail_bound(&self, m: u64) -> BigRat {
        &self.tail_constant / self.scale(m + 1)
    }

    /// Smallest `m` whose tail bound is below `eps`.
    pub fn terms_for(&self, eps: &BigRat) -> u64 {
        let mut m = 0;
        while self.tail_bound(m) >= *eps {
            m += 1;
        }
        m
    }
}

/// The Bailey-Borwein-Plouffe series for pi.
pub fn bbp_pi() -> TermSeries {
    let lin = |a: i64, b: i64| IntPoly::from_i64(&[b, a]);
    let k = |v: i64| IntPoly::from_i64(&[v]);
    TermSeries::new(
        16,
        1,
        vec![
            (k(4), lin(8, 1)),
            (k(-2), lin(8, 4)),
            (k(-1), lin(8, 5)),
            (k(-1), lin(8, 6)),
        ],
        int(1),
    )
    .expect("BBP tail constant validates")
}

/// Bit `n >= 1` after the binary point of `|limit|`.
pub fn nth_bit_series(s: &TermSeries, mc: &MeasureCert, n: u64) -> Result<u8> {
    if n == 0 {
        return Err(Error::invalid("bit positions start at 1"));
    }
    let eps = mc.epsilon(n);
    let m = s.terms_for(&eps);
    checked_bit(&s.partial_sum(m)?, n, &s.tail_bound(m))
}

/// Bits `1..=n` of `|limit|` from one partial sum.
pub fn bits_prefix_series(s: &TermSeries, mc: &MeasureCert, n: u64) -> Result<String> {
    if n == 0 {
        return Err(Error::invalid("bit positions start at 1"));
    }
    let m = s.terms_for(&mc.epsilon(n));
    let sm = s.partial_sum(m)?;
    let err = s.tail_bound(m);
    (1..=n)
        .map(|k| checked_bit(&sm, k, &err).map(|b| char::from(b'0' + b)))
        .collect()
}

/// Integer part of `|limit|`, from a partial sum accurate to 1/4 that stays
/// clear of integers.
pub fn int_part_series(s: &TermSeries, mc: &MeasureCert) -> Result<BigInt> {
    let m = s.terms_for(&mc.epsilon(1));
    let sm = s.partial_sum(m)?.abs();
    checked_bit(&sm, 1, &s.tail_bound(m))?;
    Ok(sm.floor().to_integer())
}
