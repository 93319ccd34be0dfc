//! The mod-p digit gadget.
//!
//! For an odd prime `p` with `2^t = 1 (mod p)`, the rational
//! `Q = sum_{N>0} (N mod p) / 2^(tN)` has `N mod p` as its `N`-th base-`2^t`
//! digit. Spreading input bits `t` positions apart gives an `N` with
//! `N = popcount (mod p)`, so one digit of a fixed rational decides a mod-p
//! counting question.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::newton::is_prime;
use crate::rat::{int, BigRat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModPGadget {
    pub p: u64,
    pub t: u32,
    pub q: BigRat,
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Multiplicative order of 2 modulo an odd prime.
pub fn ord2(p: u64) -> Result<u32> {
    check_odd_prime(p)?;
    let mut t = 1;
    let mut v = 2 % p;
    while v != 1 {
        v = v * 2 % p;
        t += 1;
    }
    Ok(t)
}

/// `N = sum b_i 2^(t i)` for a bit string written most significant first.
pub fn encode(bits: &str, p: u64) -> Result<BigInt> {
    let t = ord2(p)? as usize;
    let mut n = BigInt::zero();
    for (i, ch) in bits.chars().rev().enumerate() {
        match ch {
            '0' => {}
            '1' => n.set_bit((t * i) as u64, true),
            _ => return Err(Error::Parse(format!("not a bit: {ch:?}"))),
        }
    }
    Ok(n)
}

const SERIES_CHECK_TERMS: u64 = 64;

/// The gadget for `p`, with the closed form checked against the first 64
/// series terms.
pub fn gadget_rational(p: u64) -> Result<ModPGadget> {
    let t = ord2(p)?;
    let pb = BigInt::from(p);
    let two_t = BigInt::one() << t as usize;
    let two_tp = BigInt::one() << (t as usize * p as usize);
    let num = &two_t * (&two_tp - &two_t * &pb + &pb - 1);
    let den = (&two_t - 1) * (&two_t - 1) * (&two_tp - 1);
    let q = BigRat::new(num, den);

    let mut partial = BigRat::zero();
    for n in 1..=SERIES_CHECK_TERMS {
        partial += BigRat::new(BigInt::from(n % p), BigInt::one() << (t as u64 * n) as usize);
    }
    // Remaining terms sum to at most (p-1) 2^(-t(K+1)) / (1 - 2^-t).
    let tail = BigRat::new(
        BigInt::from(p - 1) * &two_t,
        (&two_t - 1) << (t as u64 * (SERIES_CHECK_TERMS + 1)) as usize,
    );
    let gap = &q - &partial;
    if gap < int(0) || gap > tail {
        return Err(Error::InvariantViolation(format!(
            "closed form disagrees with the digit series for p = {p}"
        )));
    }
    Ok(ModPGadget { p, t, q })
}

/// The `N`-th base-`2^t` digit of `Q` after the radix point, from
/// `num 2^(t(N-1)) mod den` by modular exponentiation.
pub fn digit_base(g: &ModPGadget, n: &BigInt) -> Result<u64> {
    if n < &BigInt::one() {
        return Err(Error::invalid("digit positions start at 1"));
    }
    let den = g.q.denom();
    let e = (n - 1u32) * g.t;
    let r = (g.q.numer() * BigInt::from(2u32).modpow(&e, den)).mod_floor(den);
    let digit: BigInt = (r << g.t as usize) / den;
    Ok(digit.to_u64().expect("digit below 2^t"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn ord2_examples() {
        assert_eq!(ord2(3).unwrap(), 2);
        assert_eq!(ord2(5).unwrap(), 4);
        assert_eq!(ord2(7).unwrap(), 3);
        assert!(ord2(9).is_err());
        assert!(ord2(2).is_err());
        assert!(ord2(1).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode("101", 3).unwrap(), BigInt::from(17));
        assert_eq!(encode("0", 3).unwrap(), BigInt::zero());
        assert_eq!(encode("111", 7).unwrap(), BigInt::from(73));
        assert_eq!(BigInt::from(73) % 7, BigInt::from(3));
        assert!(encode("12", 3).is_err());
    }

    #[test]
    fn encoding_spreads_bits() {
        let n = encode("1101", 5).unwrap();
        assert_eq!(n.to_str_radix(2), "1000100000001");
    }

    /// Base-4 digits of 8/21 by schoolbook long division.
    fn long_division_digits(num: u64, den: u64, base: u64, count: usize) -> Vec<u64> {
        let mut r = num;
        (0..count)
            .map(|_| {
                r *= base;
                let d = r / den;
                r %= den;
                d
            })
            .collect()
    }

    #[test]
    fn gadget_p3() {
        let g = gadget_rational(3).unwrap();
        assert_eq!(g.q, rat(8, 21));
        assert_eq!(long_division_digits(8, 21, 4, 6), vec![1, 2, 0, 1, 2, 0]);
        let d: Vec<u64> = (1..=6).map(|n| digit_base(&g, &BigInt::from(n)).unwrap()).collect();
        assert_eq!(d, vec![1, 2, 0, 1, 2, 0]);
        for k in 1..=20 {
            assert_eq!(digit_base(&g, &BigInt::from(3 * k)).unwrap(), 0);
        }
        // Against the plain shifted floor.
        for n in 1..=50u32 {
            let direct: BigInt = (g.q.numer() << (2 * n) as usize).div_floor(g.q.denom()) & BigInt::from(3);
            assert_eq!(BigInt::from(digit_base(&g, &BigInt::from(n)).unwrap()), direct);
        }
    }

    #[test]
    fn gadget_p5_p7() {
        let g = gadget_rational(5).unwrap();
        let d: Vec<u64> = (1..=10).map(|n| digit_base(&g, &BigInt::from(n)).unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 0, 1, 2, 3, 4, 0]);
        let g = gadget_rational(7).unwrap();
        assert_eq!(digit_base(&g, &BigInt::from(73)).unwrap(), 3);
        let far = encode(&"10".repeat(40), 7).unwrap();
        assert_eq!(digit_base(&g, &far).unwrap(), 40 % 7);
        assert!(digit_base(&g, &BigInt::zero()).is_err());
    }
}
