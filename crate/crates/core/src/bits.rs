//! Certified binary digits of an irrational real algebraic root.
//!
//! For a root `x` of degree `d` the elementary Liouville bound gives
//! `|x - a/b| > c / b^d` for every rational `a/b`. Taking `b = 2^n` shows
//! that `2^n |x|` stays at distance more than `c 2^(n(1-d))` from every
//! integer, so any approximation `S` with `|x - S| < eps_n`, where
//! `eps_n = c 2^-(dn+2)`, has the same first `n` fractional bits as `x`.
//! The check that `2^n |S|` is far enough from an integer is the gap
//! assertion; it can only fail if one of the bounds above is wrong.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::isolate::{convergence_interval, ConvergenceCert, GoodInterval};
use crate::newton::{certified_error, certified_iterations, iterate_exact};
use crate::rat::{int, pow2, BigRat, RatInterval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiouvilleCert {
    pub c: BigRat,
    pub d: usize,
    pub cert: ConvergenceCert,
}

/// `min(1, 1/D')` with `D'` the range bound of `p'` on `[lo - 1, hi + 1]`.
pub fn liouville_constant(g: &GoodInterval) -> BigRat {
    let wide = g.iv.widen(&int(1));
    let dmax = g.poly.derivative().range_bound(&wide);
    std::cmp::min(int(1), int(1) / dmax)
}

/// `c 2^-(d n + 2)`.
pub fn epsilon_n(lc: &LiouvilleCert, n: u64) -> BigRat {
    &lc.c * pow2(-((lc.d as i64) * n as i64 + 2))
}

/// A certified irrational root, ready for bit queries.
pub struct RootHandle {
    pub liouville: LiouvilleCert,
    pub sign: i8,
    /// `floor(|x|)`.
    pub int_part: BigInt,
    iterates: Mutex<Vec<BigRat>>,
}

impl Clone for RootHandle {
    fn clone(&self) -> Self {
        RootHandle {
            liouville: self.liouville.clone(),
            sign: self.sign,
            int_part: self.int_part.clone(),
            iterates: Mutex::new(self.iterates.lock().expect("poisoned").clone()),
        }
    }
}

impl fmt::Debug for RootHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootHandle")
            .field("poly", &self.liouville.cert.good.poly.to_string())
            .field("interval", &self.liouville.cert.good.iv.to_string())
            .field("sign", &self.sign)
            .field("int_part", &self.int_part)
            .finish()
    }
}

pub fn make_root_handle(g: &GoodInterval) -> Result<RootHandle> {
    let d = g.poly.deg();
    if d < 2 {
        return Err(Error::invalid("bit extraction needs an irrational root (degree >= 2)"));
    }
    let cert = convergence_interval(g)?;
    let c = liouville_constant(g);
    let (sign, int_part) = locate(g);
    let x0 = cert.x0.clone();
    Ok(RootHandle {
        liouville: LiouvilleCert { c, d, cert },
        sign,
        int_part,
        iterates: Mutex::new(vec![x0]),
    })
}

/// Sign and `floor(|x|)` of the root, from sign tests at integers.
fn locate(g: &GoodInterval) -> (i8, BigInt) {
    let p = &g.poly;
    let s_lo = p.sign_at(g.iv.lo());
    let (mut lo, mut hi) = (g.iv.lo().clone(), g.iv.hi().clone());
    loop {
        // Any integer strictly inside (lo, hi).
        let k = lo.floor() + int(1);
        if k >= hi {
            break;
        }
        let s = p.sign_at(&k);
        assert_ne!(s, 0, "prepared factors have no integer roots");
        if s == s_lo {
            lo = k;
        } else {
            hi = k;
        }
    }
    // No integer lies in (lo, hi), and the root is inside, so it shares
    // floor(lo).
    let fl = lo.floor().to_integer();
    if fl.is_negative() {
        (-1, -fl - BigInt::one())
    } else {
        (1, fl)
    }
}

/// Bit `n` of `|s|`, after checking that `2^n |s|` is more than
/// `2^n err` away from every integer.
pub fn checked_bit(s: &BigRat, n: u64, err: &BigRat) -> Result<u8> {
    let num = s.numer().abs();
    let den = s.denom();
    let r = (&num << n as usize).mod_floor(den);
    check_remainder(&r, den, n, err)?;
    let w: BigInt = (num << n as usize) / den;
    Ok(w.bit(0) as u8)
}

/// `min(r, den - r) / den > 2^n err`.
fn check_remainder(r: &BigInt, den: &BigInt, n: u64, err: &BigRat) -> Result<()> {
    let dist = std::cmp::min(r.clone(), den - r);
    if dist * err.denom() > (err.numer() << n as usize) * den {
        Ok(())
    } else {
        Err(Error::InvariantViolation(format!(
            "approximation too close to a dyadic boundary at bit {n}"
        )))
    }
}

/// Checks the gap condition for an approximation `s` with
/// `|x - s| < eps_n`.
pub fn assert_gap(h: &RootHandle, n: u64, s: &BigRat) -> Result<()> {
    checked_bit(s, n, &epsilon_n(&h.liouville, n)).map(|_| ())
}

impl RootHandle {
    pub fn cert(&self) -> &ConvergenceCert {
        &self.liouville.cert
    }

    pub fn good(&self) -> &GoodInterval {
        &self.liouville.cert.good
    }

    pub fn epsilon(&self, n: u64) -> BigRat {
        epsilon_n(&self.liouville, n)
    }

    /// The exact Newton iterate `x_t` from the certified start point.
    pub fn iterate(&self, t: u32) -> Result<BigRat> {
        let mut cache = self.iterates.lock().expect("poisoned");
        let have = cache.len() - 1;
        if (t as usize) > have {
            let more = iterate_exact(&self.good().poly, cache.last().unwrap(), t as usize - have)?;
            cache.extend(more.iterates.into_iter().skip(1));
        }
        Ok(cache[t as usize].clone())
    }

    /// An approximation with certified error below `eps_n`, and that error.
    pub fn approximation(&self, n: u64) -> Result<(BigRat, BigRat)> {
        let eps = self.epsilon(n);
        let t = certified_iterations(self.cert(), &eps)?;
        let err = certified_error(self.cert(), t);
        debug_assert!(err < eps);
        Ok((self.iterate(t)?, err))
    }

    fn check_int_part(&self, s: &BigRat) -> Result<()> {
        if s.abs().floor().to_integer() != self.int_part {
            return Err(Error::InvariantViolation(
                "approximation disagrees with the integer part".into(),
            ));
        }
        Ok(())
    }

    /// Bit `n >= 1` after the binary point of `|x|`.
    pub fn nth_bit(&self, n: u64) -> Result<u8> {
        if n == 0 {
            return Err(Error::invalid("bit positions start at 1"));
        }
        let (s, err) = self.approximation(n)?;
        let bit = checked_bit(&s, n, &err)?;
        self.check_int_part(&s)?;
        Ok(bit)
    }

    /// The first `n` fractional bits of `|x|` from a single approximation.
    pub fn bits_prefix(&self, n: u64) -> Result<String> {
        if n == 0 {
            return Err(Error::invalid("bit positions start at 1"));
        }
        let (s, err) = self.approximation(n)?;
        self.check_int_part(&s)?;
        let num = s.numer().abs();
        let den = s.denom();
        let mut r = num.mod_floor(den);
        let mut out = String::with_capacity(n as usize);
        for k in 1..=n {
            r <<= 1;
            let bit = if &r >= den {
                r -= den;
                '1'
            } else {
                '0'
            };
            check_remainder(&r, den, k, &err)?;
            out.push(bit);
        }
        Ok(out)
    }

    /// A rational interval containing the root.
    pub fn enclosure(&self) -> &RatInterval {
        &self.good().iv
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isolate::find_good_intervals;
    use crate::poly::IntPoly;
    use crate::rat::rat;

    fn roots(c: &[i64]) -> Vec<RootHandle> {
        let p = IntPoly::from_i64(c);
        find_good_intervals(&p)
            .unwrap()
            .iter()
            .map(|g| make_root_handle(g).unwrap())
            .collect()
    }

    fn bits(h: &RootHandle, n: u64) -> Vec<u8> {
        (1..=n).map(|k| h.nth_bit(k).unwrap()).collect()
    }

    #[test]
    fn liouville_examples() {
        let g = GoodInterval::new(IntPoly::from_i64(&[-2, 0, 1]), RatInterval::new(rat(1, 1), rat(2, 1)).unwrap()).unwrap();
        assert_eq!(liouville_constant(&g), rat(1, 6));
        let h = make_root_handle(&g).unwrap();
        assert_eq!(h.epsilon(10), rat(1, 6) * pow2(-22));
        assert!(h.epsilon(11) < h.epsilon(10));

        // x^2 + 10x - 1 near 0.099: D' = 2 * 9/8 + 10 > 1.
        let g = GoodInterval::new(IntPoly::from_i64(&[-1, 10, 1]), RatInterval::new(rat(0, 1), rat(1, 8)).unwrap()).unwrap();
        assert_eq!(liouville_constant(&g), rat(4, 49));
    }

    #[test]
    fn constant_never_exceeds_one() {
        for c in [&[-2i64, 0, 1][..], &[-1, -1, 1], &[-2, 0, 0, 1], &[-1, -1, 0, 1], &[-1, -1, 0, 0, 0, 1]] {
            for g in find_good_intervals(&IntPoly::from_i64(c)).unwrap() {
                let lc = liouville_constant(&g);
                assert!(lc > rat(0, 1) && lc <= rat(1, 1));
            }
        }
    }

    #[test]
    fn sign_and_integer_part() {
        let hs = roots(&[-2, 0, 1]);
        assert_eq!((hs[0].sign, hs[0].int_part.clone()), (-1, BigInt::from(1)));
        assert_eq!((hs[1].sign, hs[1].int_part.clone()), (1, BigInt::from(1)));
        let hs = roots(&[-1, -1, 1]);
        assert_eq!((hs[1].sign, hs[1].int_part.clone()), (1, BigInt::from(1)));
        assert_eq!((hs[0].sign, hs[0].int_part.clone()), (-1, BigInt::from(0)));
    }

    #[test]
    fn known_expansions() {
        assert_eq!(bits(&roots(&[-2, 0, 1])[1], 5), vec![0, 1, 1, 0, 1]);
        assert_eq!(bits(&roots(&[-2, 0, 1])[0], 5), vec![0, 1, 1, 0, 1]);
        assert_eq!(bits(&roots(&[-1, -1, 1])[1], 4), vec![1, 0, 0, 1]);
        assert_eq!(bits(&roots(&[-2, 0, 0, 1])[0], 4), vec![0, 1, 0, 0]);
    }

    #[test]
    fn prefix_examples() {
        let h = &roots(&[-2, 0, 1])[1];
        assert_eq!(h.bits_prefix(13).unwrap(), "0110101000001");
        assert_eq!(h.bits_prefix(1).unwrap(), "0");
        let long = h.bits_prefix(80).unwrap();
        for n in [1u64, 7, 30, 79] {
            assert!(long.starts_with(&h.bits_prefix(n).unwrap()));
        }
        let singles: String = (1..=40).map(|k| char::from(b'0' + h.nth_bit(k).unwrap())).collect();
        assert_eq!(singles, long[..40]);
    }

    #[test]
    fn gap_examples() {
        let h = &roots(&[-2, 0, 1])[1];
        let s = h.iterate(5).unwrap();
        assert!(assert_gap(h, 8, &s).is_ok());
        assert!(matches!(assert_gap(h, 1, &rat(1, 2)), Err(Error::InvariantViolation(_))));
        let phi = &roots(&[-1, -1, 1])[1];
        let (s, _) = phi.approximation(16).unwrap();
        assert!(assert_gap(phi, 16, &s).is_ok());
    }

    #[test]
    fn perturbation_keeps_bit() {
        let h = &roots(&[-1, -1, 0, 1])[0];
        for n in [3u64, 17, 64] {
            let (s, _) = h.approximation(n).unwrap();
            let half = h.epsilon(n) / int(2);
            let b = checked_bit(&s, n, &h.epsilon(n)).unwrap();
            assert_eq!(checked_bit(&(&s + &half), n, &half).unwrap(), b);
            assert_eq!(checked_bit(&(&s - &half), n, &half).unwrap(), b);
        }
    }

    #[test]
    fn deterministic_and_degree_one_rejected() {
        let h = &roots(&[-2, 0, 1])[1];
        assert_eq!(h.nth_bit(50).unwrap(), h.clone().nth_bit(50).unwrap());
        let g = GoodInterval::new(IntPoly::from_i64(&[-1, 2]), RatInterval::new(rat(0, 1), rat(1, 1)).unwrap()).unwrap();
        assert!(make_root_handle(&g).is_err());
        assert!(h.nth_bit(0).is_err());
    }
}
