//! Good intervals and quadratic-convergence certificates.
//!
//! A good interval for a prepared factor `p` contains exactly one root of
//! `p` and no root of `p'` or `p''`. They are found on a grid whose spacing
//! `delta` is below the separation of all distinct roots of `p p' p''`: every
//! grid cell with a sign change of `p` is then good. Cells that provably hold
//! no root are skipped in bulk by a Taylor exclusion test, which leaves the
//! result identical to a cell-by-cell scan.
//!
//! [`convergence_interval`] then shrinks a good interval to a cell `I'` on
//! which Newton-Raphson converges quadratically with parameter
//! `M = rho1 / (2 rho2)`, where `rho1` bounds `|p''|` and `rho2` bounds
//! `|p'|` from below on the good interval.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{markoff_bound, IntPoly};
use crate::prep::{is_prepared, preprocess};
use crate::rat::{ceil_log2, floor_log2, int, pow2, BigRat, RatInterval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodInterval {
    pub poly: IntPoly,
    pub iv: RatInterval,
}

impl GoodInterval {
    /// Wraps an interval after checking that `poly` changes sign strictly
    /// across it. Goodness beyond the sign change is the caller's contract.
    pub fn new(poly: IntPoly, iv: RatInterval) -> Result<Self> {
        if poly.sign_at(iv.lo()) * poly.sign_at(iv.hi()) != -1 {
            return Err(Error::ContractViolation(format!(
                "{poly} does not change sign strictly across {iv}"
            )));
        }
        Ok(GoodInterval { poly, iv })
    }

    /// The half that keeps the sign change.
    pub fn bisect(&self) -> GoodInterval {
        let mid = self.iv.midpoint();
        let s_lo = self.poly.sign_at(self.iv.lo());
        let s_mid = self.poly.sign_at(&mid);
        assert_ne!(s_mid, 0, "prepared factors have no rational roots");
        let iv = if s_lo * s_mid < 0 {
            RatInterval::new(self.iv.lo().clone(), mid)
        } else {
            RatInterval::new(mid, self.iv.hi().clone())
        };
        GoodInterval {
            poly: self.poly.clone(),
            iv: iv.expect("ordered"),
        }
    }
}

/// How the bound `rho1` on `|p''|` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rho1Route {
    /// Markoff's inequality applied to `p'` with its range bound.
    Markoff,
    /// The range bound of `p''` directly.
    DirectRange,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceCert {
    pub good: GoodInterval,
    pub m: BigRat,
    pub iprime: RatInterval,
    pub x0: BigRat,
    pub rho1: BigRat,
    pub rho2: BigRat,
    pub rho1_route: Rho1Route,
}

/// A distinct real root of an arbitrary polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Rational(BigRat),
    Irrational(GoodInterval),
}

impl RealRoot {
    /// An interval known to contain the root (degenerate for rationals).
    pub fn enclosure(&self) -> RatInterval {
        match self {
            RealRoot::Rational(q) => RatInterval::new(q.clone(), q.clone()).expect("ordered"),
            RealRoot::Irrational(g) => g.iv.clone(),
        }
    }
}

/// Grid spacing for [`find_good_intervals`]: a power of two, at most 1/2,
/// strictly below the distance between any two distinct roots of
/// `p p' p''`.
pub fn separation_delta(p: &IntPoly) -> Result<BigRat> {
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let mut prod = p * &d1;
    if !d2.is_zero() {
        prod = &prod * &d2;
    }
    let rad = prod.squarefree_part();
    let half = pow2(-1);
    if rad.deg() < 2 {
        return Ok(half);
    }
    let sep = rad.root_separation_bound()?;
    let e = floor_log2(&sep);
    Ok(std::cmp::min(pow2(e), half))
}

/// Smallest power of two `R` with every root of `p` in `(-R, R)`.
fn cauchy_radius(p: &IntPoly) -> Result<BigRat> {
    Ok(pow2(ceil_log2(&p.cauchy_bound()?)))
}

/// `D^d p(m + r y)` as a polynomial in `y`, for dyadic `m`, `r`.
fn shifted(p: &IntPoly, m: &BigRat, r: &BigRat) -> Vec<BigInt> {
    let den = std::cmp::max(m.denom(), r.denom()).clone();
    let mn = m.numer() * (&den / m.denom());
    let rn = r.numer() * (&den / r.denom());
    let d = p.deg();
    let c = p.coeffs();
    let mut acc = vec![c[d].clone()];
    let mut dp = BigInt::one();
    for i in (0..d).rev() {
        dp *= &den;
        let mut next = vec![BigInt::zero(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k] += a * &mn;
            next[k + 1] += a * &rn;
        }
        next[0] += &c[i] * &dp;
        acc = next;
    }
    acc
}

/// True when `p` provably has no root in `[a, a + w]`.
fn excludes(p: &IntPoly, a: &BigRat, w: &BigRat) -> bool {
    let r = w / int(2);
    let q = shifted(p, &(a + &r), &r);
    let tail: BigInt = q[1..].iter().map(Signed::abs).sum();
    q[0].abs() > tail
}

/// One good interval per real root of a prepared factor, ascending.
pub fn find_good_intervals(p: &IntPoly) -> Result<Vec<GoodInterval>> {
    if p.deg() < 2 || !is_prepared(p) {
        return Err(Error::ContractViolation(format!(
            "{p} is not a prepared factor of degree >= 2"
        )));
    }
    let delta = separation_delta(p)?;
    let radius = cauchy_radius(p)?;
    let mut out = Vec::new();
    // Depth-first over dyadic blocks, left to right.
    let mut stack = vec![(-radius.clone(), int(2) * radius)];
    while let Some((a, w)) = stack.pop() {
        if excludes(p, &a, &w) {
            continue;
        }
        if w <= delta {
            let b = &a + &w;
            let (sa, sb) = (p.sign_at(&a), p.sign_at(&b));
            if sa == 0 || sb == 0 {
                return Err(Error::InvariantViolation(format!(
                    "{p} vanishes at a grid point"
                )));
            }
            if sa != sb {
                let iv = RatInterval::new(a, b).expect("ordered");
                out.push(GoodInterval { poly: p.clone(), iv });
            }
            continue;
        }
        let h = w / int(2);
        stack.push((&a + &h, h.clone()));
        stack.push((a, h));
    }
    Ok(out)
}

fn abs_at(p: &IntPoly, x: &BigRat) -> BigRat {
    p.eval(x).abs()
}

/// Shrinks a good interval to a quadratic-convergence cell.
pub fn convergence_interval(g: &GoodInterval) -> Result<ConvergenceCert> {
    let p = &g.poly;
    let (lo, hi) = (g.iv.lo(), g.iv.hi());
    let d1 = p.derivative();
    let d2 = d1.derivative();
    let s1 = (d1.sign_at(lo), d1.sign_at(hi));
    let s2 = (d2.sign_at(lo), d2.sign_at(hi));
    if s1.0 == 0 || s1.0 != s1.1 || s2.0 == 0 || s2.0 != s2.1 {
        return Err(Error::ContractViolation(format!(
            "p' or p'' changes sign on {}; not a good interval",
            g.iv
        )));
    }
    if p.sign_at(lo) * p.sign_at(hi) != -1 {
        return Err(Error::ContractViolation(format!("no sign change of p on {}", g.iv)));
    }
    let rho2 = std::cmp::min(abs_at(&d1, lo), abs_at(&d1, hi));
    if rho2.is_zero() {
        return Err(Error::ContractViolation("rho2 = 0".into()));
    }

    // With the coefficient-sum range bound, d^2 M / |I| dominates |p''| on I
    // whenever |I| <= deg(p') * max|x|.
    let straddles = lo.is_negative() && hi.is_positive();
    let (rho1, rho1_route) = if d1.deg() >= 2 || !straddles {
        (markoff_bound(d1.deg(), &d1.range_bound(&g.iv), &g.iv)?, Rho1Route::Markoff)
    } else {
        (d2.range_bound(&g.iv), Rho1Route::DirectRange)
    };
    let m = &rho1 / (int(2) * &rho2);

    let cap = std::cmp::min(int(1) / (int(4) * &m * &m), pow2(-2));
    let mut len = pow2(floor_log2(&cap));
    // With p' and p'' of constant sign, every iterate after the first lies
    // between the root and the first iterate, so the whole orbit stays in
    // the good interval once x1 does.
    loop {
        let cell = if g.iv.width() <= len {
            g.iv.clone()
        } else {
            sign_change_cell(p, &g.iv, &len)?
        };
        let x0 = cell.midpoint();
        let x1 = &x0 - p.eval(&x0) / d1.eval(&x0);
        if g.iv.contains(&x1) {
            return Ok(ConvergenceCert {
                good: g.clone(),
                m,
                iprime: cell,
                x0,
                rho1,
                rho2,
                rho1_route,
            });
        }
        len /= int(2);
    }
}

/// The cell of the `len`-partition of `iv` (anchored at `iv.lo`) in which
/// `p` changes sign, located by binary search over cell indices.
fn sign_change_cell(p: &IntPoly, iv: &RatInterval, len: &BigRat) -> Result<RatInterval> {
    let (lo, hi) = (iv.lo(), iv.hi());
    let point = |k: &BigInt| -> BigRat {
        let x = lo + len * BigRat::from_integer(k.clone());
        std::cmp::min(x, hi.clone())
    };
    let s_lo = p.sign_at(lo);
    let mut ka = BigInt::zero();
    let mut kb = (iv.width() / len).ceil().to_integer();
    while &kb - &ka > BigInt::one() {
        let mid: BigInt = (&ka + &kb) >> 1;
        let s = p.sign_at(&point(&mid));
        if s == 0 {
            return Err(Error::InvariantViolation("root at a grid point".into()));
        }
        if s == s_lo {
            ka = mid;
        } else {
            kb = mid;
        }
    }
    Ok(RatInterval::new(point(&ka), point(&kb)).expect("ordered"))
}

/// All distinct real roots of `p`, ascending, with irrational roots given by
/// pairwise disjoint good intervals that also exclude every rational root.
pub fn real_roots(p: &IntPoly) -> Result<Vec<RealRoot>> {
    let report = preprocess(p)?;
    let mut irr: Vec<GoodInterval> = Vec::new();
    for f in &report.factors {
        for g in find_good_intervals(&f.factor)? {
            if !irr.iter().any(|h| same_root(h, &g)) {
                irr.push(g);
            }
        }
    }
    // Separate overlapping enclosures of distinct roots.
    loop {
        let mut changed = false;
        for i in 0..irr.len() {
            for q in &report.rational_roots {
                while irr[i].iv.contains(q) {
                    irr[i] = irr[i].bisect();
                    changed = true;
                }
            }
            for j in i + 1..irr.len() {
                while irr[i].iv.intersect(&irr[j].iv).is_some() {
                    irr[i] = irr[i].bisect();
                    irr[j] = irr[j].bisect();
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut roots: Vec<RealRoot> = report
        .rational_roots
        .into_iter()
        .map(RealRoot::Rational)
        .chain(irr.into_iter().map(RealRoot::Irrational))
        .collect();
    roots.sort_by(|a, b| a.enclosure().lo().cmp(b.enclosure().lo()));
    Ok(roots)
}

/// Whether two good intervals (of possibly different factors) isolate the
/// same root: exactly when their common factor vanishes on the overlap.
fn same_root(a: &GoodInterval, b: &GoodInterval) -> bool {
    let Some(ov) = a.iv.intersect(&b.iv) else {
        return false;
    };
    if a.poly == b.poly {
        return true;
    }
    let h = a.poly.gcd(&b.poly).expect("nonzero");
    if h.is_constant() {
        return false;
    }
    let (s_lo, s_hi) = (h.sign_at(ov.lo()), h.sign_at(ov.hi()));
    s_lo * s_hi < 0 || (s_lo == 0 && s_hi == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    /// Counts sign changes of `q` on a fine rational grid of `iv`.
    fn grid_sign_changes(q: &IntPoly, iv: &RatInterval, steps: i64) -> usize {
        let mut prev = q.sign_at(iv.lo());
        let mut n = 0;
        for k in 1..=steps {
            let x = iv.lo() + iv.width() * rat(k, steps);
            let s = q.sign_at(&x);
            if s != 0 && prev != 0 && s != prev {
                n += 1;
            }
            if s != 0 {
                prev = s;
            }
        }
        n
    }

    #[test]
    fn sqrt2_intervals() {
        let q = p(&[-2, 0, 1]);
        let gs = find_good_intervals(&q).unwrap();
        assert_eq!(gs.len(), 2);
        assert!(gs[0].iv.hi() < &rat(0, 1));
        assert!(RatInterval::new(rat(1, 1), rat(2, 1)).unwrap().contains_interval(&gs[1].iv));
        for g in &gs {
            assert_eq!(q.sign_at(g.iv.lo()) * q.sign_at(g.iv.hi()), -1);
            assert_eq!(grid_sign_changes(&q.derivative(), &g.iv, 64), 0);
        }
    }

    #[test]
    fn no_real_roots() {
        assert!(find_good_intervals(&p(&[1, 0, 1])).unwrap().is_empty());
    }

    #[test]
    fn golden_ratio_intervals() {
        let q = p(&[-1, -1, 1]);
        let gs = find_good_intervals(&q).unwrap();
        assert_eq!(gs.len(), 2);
        assert!(gs[0].iv.contains(&rat(-618, 1000)) || gs[0].iv.contains(&rat(-619, 1000)));
        assert!(gs[1].iv.contains(&rat(1618, 1000)) || gs[1].iv.contains(&rat(1619, 1000)));
    }

    #[test]
    fn unprepared_input_rejected() {
        assert!(find_good_intervals(&p(&[0, -1, 0, 1])).is_err());
    }

    #[test]
    fn cert_sqrt2_on_unit_interval() {
        let g = GoodInterval::new(p(&[-2, 0, 1]), RatInterval::new(rat(1, 1), rat(2, 1)).unwrap()).unwrap();
        let c = convergence_interval(&g).unwrap();
        assert_eq!(c.rho1, rat(4, 1));
        assert_eq!(c.rho2, rat(2, 1));
        assert_eq!(c.m, rat(1, 1));
        assert_eq!(c.rho1_route, Rho1Route::Markoff);
        assert_eq!(c.iprime, RatInterval::new(rat(5, 4), rat(3, 2)).unwrap());
        assert_eq!(c.x0, rat(11, 8));
    }

    #[test]
    fn cert_keeps_short_interval() {
        // x^2 + 10x - 1 on [-1/8, 1/8]: rho1 = 2 (direct), rho2 = 39/4,
        // so M = 4/39 and the quarter cap already covers the interval.
        let g = GoodInterval::new(p(&[-1, 10, 1]), RatInterval::new(rat(-1, 8), rat(1, 8)).unwrap()).unwrap();
        let c = convergence_interval(&g).unwrap();
        assert_eq!(c.rho1_route, Rho1Route::DirectRange);
        assert_eq!(c.m, rat(4, 39));
        assert_eq!(c.iprime, g.iv);
        assert_eq!(c.x0, rat(0, 1));
    }

    #[test]
    fn cert_golden_ratio_contracts() {
        let q = p(&[-1, -1, 1]);
        let g = find_good_intervals(&q).unwrap().pop().unwrap();
        let c = convergence_interval(&g).unwrap();
        // phi to 80 bits by bisection, kept independent of Newton.
        let mut a = rat(3, 2);
        let mut b = rat(2, 1);
        for _ in 0..200 {
            let mid = (&a + &b) / int(2);
            if q.sign_at(&mid) < 0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mut x = c.x0.clone();
        let mut eps = (&x - &a).abs();
        for _ in 0..5 {
            let fx = q.eval(&x);
            let dfx = q.derivative().eval(&x);
            x = &x - fx / dfx;
            let next = (&x - &a).abs();
            // The 2^-200 reference error is far below these magnitudes.
            assert!(next <= &c.m * &eps * &eps + pow2(-150));
            eps = next;
        }
    }

    #[test]
    fn non_good_interval_rejected() {
        // p' vanishes at 0, inside [-2, 3].
        let g = GoodInterval { poly: p(&[-2, 0, 1]), iv: RatInterval::new(rat(-1, 1), rat(3, 1)).unwrap() };
        assert!(matches!(convergence_interval(&g), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn real_roots_mixed() {
        // (x - 1)(x^2 - 2)(x^3 - x)^2
        let f = &(&p(&[-1, 1]) * &p(&[-2, 0, 1])) * &(&p(&[0, -1, 0, 1]) * &p(&[0, -1, 0, 1]));
        let roots = real_roots(&f).unwrap();
        assert_eq!(roots.len(), 5);
        assert_eq!(roots[1], RealRoot::Rational(rat(-1, 1)));
        assert_eq!(roots[2], RealRoot::Rational(rat(0, 1)));
        assert_eq!(roots[3], RealRoot::Rational(rat(1, 1)));
        for w in roots.windows(2) {
            assert!(w[0].enclosure().hi() < w[1].enclosure().lo());
        }
    }

    #[test]
    fn real_roots_shared_between_factors() {
        // x^3 - 3x^2 + ... with a double irrational root: (x^2 - 2)^2 (x^2 - 3)
        let f = &(&p(&[-2, 0, 1]) * &p(&[-2, 0, 1])) * &p(&[-3, 0, 1]);
        let roots = real_roots(&f).unwrap();
        assert_eq!(roots.len(), 4);
    }

    #[test]
    fn delta_is_dyadic_and_small() {
        let d = separation_delta(&p(&[-1, -1, 0, 0, 0, 1])).unwrap();
        assert_eq!(pow2(floor_log2(&d)), d);
        assert!(d <= rat(1, 2));
    }
}
