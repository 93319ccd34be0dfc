//! Bisection ground truth for cross-checking the Newton pipeline.
//!
//! Nothing here touches Newton-Raphson: roots are pinned down by halving a
//! sign-change interval, which is slow but obviously correct.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use crate::bits::{epsilon_n, LiouvilleCert};
use crate::isolate::GoodInterval;
use crate::rat::{int, pow2, BigRat, RatInterval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectionResult {
    pub iv: RatInterval,
    pub precision_bits: u64,
}

/// Halves `g` until its width is at most `2^-m`.
pub fn bisect_root(g: &GoodInterval, m: u64) -> BisectionResult {
    bisect_until(g, &pow2(-(m as i64)), false, m)
}

fn bisect_until(g: &GoodInterval, width: &BigRat, strict: bool, m: u64) -> BisectionResult {
    let p = &g.poly;
    // Endpoints kept as integers over one shared denominator, which doubles
    // at every halving.
    let den0 = g.iv.lo().denom().lcm(g.iv.hi().denom());
    let scale = |q: &BigRat| q.numer() * (&den0 / q.denom());
    let (mut lo, mut hi) = (scale(g.iv.lo()), scale(g.iv.hi()));
    let mut den = den0.clone();
    let s_lo = sign(&p.eval_homogeneous(&lo, &den));
    let (wn, wd) = (width.numer(), width.denom());
    loop {
        // (hi - lo) / den compared with wn / wd.
        let lhs = (&hi - &lo) * wd;
        let rhs = wn * &den;
        if if strict { lhs < rhs } else { lhs <= rhs } {
            break;
        }
        let mid = &lo + &hi;
        lo <<= 1;
        hi <<= 1;
        den <<= 1;
        let s = sign(&p.eval_homogeneous(&mid, &den));
        assert_ne!(s, 0, "bisection hit a rational root");
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    BisectionResult {
        iv: RatInterval::new(BigRat::new(lo, den.clone()), BigRat::new(hi, den)).expect("ordered"),
        precision_bits: m,
    }
}

fn sign(v: &BigInt) -> i8 {
    if v.is_negative() {
        -1
    } else if v.is_positive() {
        1
    } else {
        0
    }
}

/// Lower end of an enclosure of `|x|` of width below `eps_n`.
fn abs_lower(g: &GoodInterval, lc: &LiouvilleCert, n: u64) -> BigRat {
    let mut width = epsilon_n(lc, n);
    loop {
        let r = bisect_until(g, &width, true, n);
        let (lo, hi) = (r.iv.lo(), r.iv.hi());
        if !lo.is_negative() {
            return lo.clone();
        }
        if !hi.is_positive() {
            return -hi.clone();
        }
        // Still straddling 0; the root is nonzero, so narrowing ends this.
        width /= int(2);
    }
}

fn bit_of(x: &BigRat, n: u64) -> u8 {
    let w: BigInt = (x.numer() << n as usize).div_floor(x.denom());
    w.is_odd() as u8
}

/// Bit `n` of `|x|` read off a bisection enclosure narrower than `eps_n`.
pub fn bits_via_bisection(g: &GoodInterval, lc: &LiouvilleCert, n: u64) -> u8 {
    assert!(n >= 1, "bit positions start at 1");
    bit_of(&abs_lower(g, lc, n), n)
}

/// Bits `1..=n` of `|x|` from one enclosure narrower than `eps_n`.
pub fn prefix_via_bisection(g: &GoodInterval, lc: &LiouvilleCert, n: u64) -> String {
    assert!(n >= 1, "bit positions start at 1");
    let x = abs_lower(g, lc, n);
    (1..=n).map(|k| char::from(b'0' + bit_of(&x, k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::make_root_handle;
    use crate::isolate::find_good_intervals;
    use crate::poly::IntPoly;
    use crate::rat::rat;

    fn sqrt2() -> GoodInterval {
        GoodInterval::new(IntPoly::from_i64(&[-2, 0, 1]), RatInterval::new(rat(1, 1), rat(2, 1)).unwrap()).unwrap()
    }

    #[test]
    fn bisect_examples() {
        let r = bisect_root(&sqrt2(), 4);
        assert!(r.iv.width() <= rat(1, 16));
        assert!(RatInterval::new(rat(11, 8), rat(23, 16)).unwrap().contains_interval(&r.iv));
        let one = bisect_root(&sqrt2(), 1);
        assert!(one.iv.width() <= rat(1, 2));
        for m in 1..20 {
            assert!(bisect_root(&sqrt2(), m).iv.contains_interval(&bisect_root(&sqrt2(), m + 1).iv));
        }
    }

    #[test]
    fn bit_examples() {
        let h = make_root_handle(&sqrt2()).unwrap();
        let got: Vec<u8> = (1..=5).map(|n| bits_via_bisection(&sqrt2(), &h.liouville, n)).collect();
        assert_eq!(got, vec![0, 1, 1, 0, 1]);

        let g = find_good_intervals(&IntPoly::from_i64(&[-2, 0, 0, 1])).unwrap().remove(0);
        let h = make_root_handle(&g).unwrap();
        let got: Vec<u8> = (1..=4).map(|n| bits_via_bisection(&g, &h.liouville, n)).collect();
        assert_eq!(got, vec![0, 1, 0, 0]);
        assert_eq!(prefix_via_bisection(&g, &h.liouville, 4), "0100");
    }

    #[test]
    fn negative_root_uses_magnitude() {
        let g = find_good_intervals(&IntPoly::from_i64(&[-1, -1, 1])).unwrap().remove(0);
        let h = make_root_handle(&g).unwrap();
        // 0.618034 = 0.100111100011...
        assert_eq!(prefix_via_bisection(&g, &h.liouville, 12), "100111100011");
    }
}
