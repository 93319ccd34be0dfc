//! Univariate integer polynomials and the analytic bounds used to isolate
//! and refine their roots.
//!
//! Coefficients are stored in ascending degree order; the zero polynomial is
//! the empty vector, so structural equality is polynomial equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{int, BigRat, RatInterval};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - r` for an integer `r`.
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        let d = self.deg() as u32;
        BigRat::new(
            self.eval_homogeneous(x.numer(), x.denom()),
            num_traits::pow(x.denom().clone(), d as usize),
        )
    }

    /// `b^d * p(a/b)` as an integer, where `d` is the degree of `p`.
    pub fn eval_homogeneous(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = self.coeffs[d].clone();
        let mut bp = BigInt::one();
        for i in (0..d).rev() {
            bp *= b;
            acc = acc * a + &self.coeffs[i] * &bp;
        }
        acc
    }

    /// Sign of `p(x)`, computed exactly.
    pub fn sign_at(&self, x: &BigRat) -> i8 {
        // x has positive denominator, so b^d > 0 and the homogeneous value
        // carries the sign.
        sign_of(&self.eval_homogeneous(x.numer(), x.denom()))
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `p(s x)`.
    pub fn scale_arg(&self, s: &BigInt) -> IntPoly {
        let mut sp = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &sp);
            sp *= s;
        }
        IntPoly::new(out)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Content removed and leading coefficient made positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Pseudo-division: `lc(g)^(deg p - deg g + 1) * p = q * g + r`.
    pub fn pseudo_divrem(&self, g: &IntPoly) -> (IntPoly, IntPoly) {
        let dg = g.degree().expect("pseudo division by the zero polynomial");
        let lc = g.coeffs[dg].clone();
        let Some(dp) = self.degree() else {
            return (IntPoly::zero(), IntPoly::zero());
        };
        if dp < dg {
            return (IntPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); dp - dg + 1];
        for k in (0..=dp - dg).rev() {
            let top = rem[k + dg].clone();
            for q in quot.iter_mut() {
                *q *= &lc;
            }
            for r in rem.iter_mut() {
                *r *= &lc;
            }
            quot[k] += &top;
            for (j, gc) in g.coeffs.iter().enumerate() {
                rem[k + j] -= &top * gc;
            }
            debug_assert!(rem[k + dg].is_zero());
        }
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn pseudo_rem(&self, g: &IntPoly) -> IntPoly {
        self.pseudo_divrem(g).1
    }

    /// Primitive gcd over the rationals, scaled to integer coefficients with a
    /// positive leading coefficient. `gcd(f, 0)` is the primitive part of `f`.
    pub fn gcd(&self, other: &IntPoly) -> Result<IntPoly> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Err(Error::invalid("gcd of two zero polynomials")),
            (true, false) => return Ok(other.primitive_part()),
            (false, true) => return Ok(self.primitive_part()),
            _ => {}
        }
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            if b.is_constant() {
                return Ok(IntPoly::one());
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return Ok(b);
            }
            a = b;
            b = r.primitive_part();
        }
    }

    /// Exact quotient `p / g`, returned as its primitive part (same roots).
    pub fn exact_div(&self, g: &IntPoly) -> Result<IntPoly> {
        if g.is_zero() {
            return Err(Error::invalid("division by the zero polynomial"));
        }
        let (q, r) = self.pseudo_divrem(g);
        if !r.is_zero() {
            return Err(Error::Divisibility);
        }
        Ok(q.primitive_part())
    }

    /// Removes repeated roots: `p / gcd(p, p')`, primitive.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.is_constant() {
            return IntPoly::one();
        }
        let g = self.gcd(&self.derivative()).expect("p is nonzero");
        self.exact_div(&g).expect("gcd divides p")
    }

    /// Cauchy bound `1 + max_{i<d} |a_i| / |a_d|`; every root is strictly
    /// smaller in absolute value.
    pub fn cauchy_bound(&self) -> Result<BigRat> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::invalid("Cauchy bound of a constant polynomial")),
        };
        let max = self.coeffs[..d].iter().map(Signed::abs).max().unwrap_or_default();
        Ok(int(1) + BigRat::new(max, self.coeffs[d].abs()))
    }

    /// Discriminant, via the resultant of `p` and `p'`.
    pub fn discriminant(&self) -> Result<BigInt> {
        let d = match self.degree() {
            Some(d) if d >= 2 => d,
            _ => return Err(Error::invalid("discriminant needs degree >= 2")),
        };
        let res = resultant(&self.coeffs, self.derivative().coeffs());
        let lc = &self.coeffs[d];
        let (q, r) = res.div_rem(lc);
        debug_assert!(r.is_zero());
        Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
    }

    /// Positive rational lower bound on the minimum distance between distinct
    /// roots (real or complex), from `sqrt(3|disc|) ||p||_2^(1-d) d^(-(d+2)/2)`.
    /// Radicals are under-approximated (numerator) or over-approximated
    /// (denominator) so the result never exceeds the exact value.
    pub fn root_separation_bound(&self) -> Result<BigRat> {
        const K: usize = 32;
        let disc = self.discriminant()?;
        if disc.is_zero() {
            return Err(Error::RepeatedRoot);
        }
        let d = self.deg();
        let scale = BigInt::one() << K;
        let sqrt_lo = |v: &BigInt| BigRat::new((v << (2 * K)).sqrt(), scale.clone());
        let sqrt_hi = |v: &BigInt| BigRat::new((v << (2 * K)).sqrt() + 1, scale.clone());

        let numer = sqrt_lo(&(disc.abs() * 3));
        let norm_sq: BigInt = self.coeffs.iter().map(|c| c * c).sum();
        let norm_pow = num_traits::pow(sqrt_hi(&norm_sq), d - 1);
        let db = BigInt::from(d);
        let d_pow = if d.is_multiple_of(2) {
            int(num_traits::pow(db, (d + 2) / 2))
        } else {
            int(num_traits::pow(db.clone(), d.div_ceil(2))) * sqrt_hi(&db)
        };
        Ok(numer / (norm_pow * d_pow))
    }

    /// `M` with `|p(x)| <= M` on `I`: `sum |a_i| max(|lo|,|hi|)^i`.
    pub fn range_bound(&self, iv: &RatInterval) -> BigRat {
        let r = iv.max_abs();
        let mut rp = int(1);
        let mut acc = BigRat::zero();
        for c in &self.coeffs {
            acc += &rp * int(c.abs());
            rp *= &r;
        }
        acc
    }

    fn to_csv(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Markoff-type derivative bound `d^2 M / (hi - lo)` on `I`, given
/// `|p| <= M` there and `deg p = d`.
pub fn markoff_bound(degree: usize, m: &BigRat, iv: &RatInterval) -> Result<BigRat> {
    let w = iv.width();
    if !w.is_positive() {
        return Err(Error::invalid("Markoff bound on a degenerate interval"));
    }
    if m.is_negative() {
        return Err(Error::invalid("Markoff bound with negative range bound"));
    }
    Ok(int(degree * degree) * m / w)
}

pub(crate) fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

/// Resultant of two polynomials given as ascending coefficient lists whose
/// formal degrees are `len - 1` (a zero leading entry is allowed, which is
/// what homogeneous forms need).
pub(crate) fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len().saturating_sub(1);
    let n = b.len().saturating_sub(1);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + r][r + j] = c.clone();
        }
    }
    det_bareiss(mat)
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Comma-separated ascending integer coefficients, e.g. `-2,0,1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        self.scale(&BigInt::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn iv(a: i64, b: i64) -> RatInterval {
        RatInterval::new(rat(a, 1), rat(b, 1)).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[-2, 0, 1]).eval(&rat(3, 2)), rat(1, 4));
        assert_eq!(p(&[-2, 0, 1]).eval(&rat(0, 1)), rat(-2, 1));
        assert_eq!(p(&[-2, 0, 0, 1]).eval(&rat(1, 1)), rat(-1, 1));
        assert_eq!(IntPoly::zero().eval(&rat(5, 3)), rat(0, 1));
    }

    #[test]
    fn zero_is_canonical() {
        assert_eq!(p(&[0, 0, 0]), IntPoly::zero());
        assert_eq!(p(&[1, 2, 0]), p(&[1, 2]));
        assert_eq!(IntPoly::zero().degree(), None);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[-2, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
        assert_eq!(p(&[5]).derivative(), IntPoly::zero());
        assert_eq!(p(&[-1, -1, 1]).derivative(), p(&[-1, 2]));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(p(&[-2, 0, 1]).gcd(&p(&[0, 2])).unwrap(), p(&[1]));
        assert_eq!(p(&[0, -1, 0, 1]).gcd(&p(&[-1, 0, 1])).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(p(&[0, -4, 0, -2]).gcd(&IntPoly::zero()).unwrap(), p(&[0, 2, 0, 1]));
        assert!(IntPoly::zero().gcd(&IntPoly::zero()).is_err());
    }

    #[test]
    fn exact_div_examples() {
        assert_eq!(p(&[0, -1, 0, 1]).exact_div(&p(&[0, 1])).unwrap(), p(&[-1, 0, 1]));
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[-2, 0, 1]).exact_div(&p(&[-1, 1])), Err(Error::Divisibility));
        // Rational quotient is cleared to its primitive part.
        assert_eq!(p(&[-1, 0, 4]).exact_div(&p(&[-1, 2])).unwrap(), p(&[1, 2]));
    }

    #[test]
    fn sign_examples() {
        assert_eq!(p(&[-2, 0, 1]).sign_at(&rat(1, 1)), -1);
        assert_eq!(p(&[-2, 0, 1]).sign_at(&rat(2, 1)), 1);
        assert_eq!(p(&[0, 0, 1]).sign_at(&rat(0, 1)), 0);
        assert_eq!(p(&[1, 0, -4]).sign_at(&rat(-1, 3)), 1);
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(p(&[-2, 0, 1]).cauchy_bound().unwrap(), rat(3, 1));
        assert_eq!(p(&[5, -2, 0, 1]).cauchy_bound().unwrap(), rat(6, 1));
        assert_eq!(p(&[-8, 0, 2]).cauchy_bound().unwrap(), rat(5, 1));
        assert!(p(&[4]).cauchy_bound().is_err());
    }

    /// Leibniz-expansion determinant of the Sylvester matrix of `p` and `p'`,
    /// written independently of the Bareiss path.
    fn disc_by_permutations(q: &IntPoly) -> BigInt {
        let a: Vec<i64> = q.coeffs().iter().map(|c| c.try_into().unwrap()).collect();
        let d = a.len() - 1;
        let b: Vec<i64> = (1..=d).map(|i| a[i] * i as i64).collect();
        let n = 2 * d - 1;
        let mut m = vec![vec![0i64; n]; n];
        for r in 0..d - 1 {
            for j in 0..=d {
                m[r][r + j] = a[d - j];
            }
        }
        for r in 0..d {
            for j in 0..d {
                m[d - 1 + r][r + j] = b[d - 1 - j];
            }
        }
        fn perms(k: usize, used: &mut Vec<bool>, m: &[Vec<i64>], acc: BigInt, sign: i64, out: &mut BigInt, cols: &mut Vec<usize>) {
            let n = m.len();
            if k == n {
                *out += acc * sign;
                return;
            }
            for c in 0..n {
                if used[c] || m[k][c] == 0 {
                    continue;
                }
                let inversions = cols.iter().filter(|&&x| x > c).count() as i64;
                used[c] = true;
                cols.push(c);
                let s = if inversions % 2 == 0 { sign } else { -sign };
                perms(k + 1, used, m, &acc * m[k][c], s, out, cols);
                cols.pop();
                used[c] = false;
            }
        }
        let mut res = BigInt::zero();
        perms(0, &mut vec![false; n], &m, BigInt::one(), 1, &mut res, &mut Vec::new());
        let res = res / BigInt::from(a[d]);
        if (d * (d - 1) / 2) % 2 == 1 {
            -res
        } else {
            res
        }
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(p(&[-2, 0, 1]).discriminant().unwrap(), BigInt::from(8));
        assert_eq!(p(&[-1, -1, 1]).discriminant().unwrap(), BigInt::from(5));
        assert_eq!(disc_by_permutations(&p(&[-2, 0, 0, 1])), BigInt::from(-108));
        assert_eq!(p(&[-2, 0, 0, 1]).discriminant().unwrap(), BigInt::from(-108));
        assert!(p(&[1, 1]).discriminant().is_err());
    }

    #[test]
    fn discriminant_matches_permutation_expansion() {
        for c in [&[-1i64, -1, 0, 1][..], &[-1, -1, 0, 0, 0, 1], &[3, 0, -7, 2, 5], &[1, 1, 1, 1, 1]] {
            let q = p(c);
            assert_eq!(q.discriminant().unwrap(), disc_by_permutations(&q), "{q}");
        }
    }

    #[test]
    fn separation_bound_examples() {
        // sqrt(24) / (sqrt(5) * 4)
        let r = p(&[-2, 0, 1]).root_separation_bound().unwrap();
        assert!(r > rat(0, 1));
        assert!(&r * &r <= rat(24, 80));
        let r = p(&[-1, -1, 1]).root_separation_bound().unwrap();
        assert!(r > rat(0, 1) && &r * &r <= rat(15, 48));
        // sqrt(324) * 5^-1 * 3^-5/2, squared: 324 / (25 * 243)
        let r = p(&[-2, 0, 0, 1]).root_separation_bound().unwrap();
        assert!(r > rat(0, 1) && &r * &r <= rat(324, 25 * 243));
        assert!(r > rat(23, 100));
        assert_eq!(p(&[1, -2, 1]).root_separation_bound(), Err(Error::RepeatedRoot));
    }

    #[test]
    fn range_and_markoff_examples() {
        assert_eq!(p(&[-2, 0, 1]).range_bound(&iv(1, 2)), rat(6, 1));
        assert_eq!(p(&[0, 2]).range_bound(&iv(0, 3)), rat(6, 1));
        assert_eq!(p(&[5]).range_bound(&iv(-1, 1)), rat(5, 1));
        assert_eq!(markoff_bound(2, &rat(4, 1), &iv(0, 2)).unwrap(), rat(8, 1));
        assert_eq!(markoff_bound(1, &rat(4, 1), &iv(1, 2)).unwrap(), rat(4, 1));
        assert_eq!(markoff_bound(3, &rat(1, 1), &iv(0, 1)).unwrap(), rat(9, 1));
        assert!(markoff_bound(3, &rat(1, 1), &iv(1, 1)).is_err());
    }

    #[test]
    fn parse_format() {
        let q: IntPoly = "-2, 0, 1".parse().unwrap();
        assert_eq!(q, p(&[-2, 0, 1]));
        assert_eq!(q.to_string(), "-2,0,1");
        assert!("garbage".parse::<IntPoly>().is_err());
        assert!("1,,2".parse::<IntPoly>().is_err());
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 0..6).prop_map(|c| IntPoly::from_i64(&c))
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), n in -20i64..20, d in 1i64..9) {
            let x = rat(n, d);
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }

        #[test]
        fn gcd_divides_both(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!c.is_zero());
            let (x, y) = (&a * &c, &b * &c);
            prop_assume!(!x.is_zero() || !y.is_zero());
            let g = x.gcd(&y).unwrap();
            prop_assert!(g.leading().unwrap() > &BigInt::zero());
            prop_assert_eq!(g.content(), BigInt::one());
            prop_assert!(x.exact_div(&g).is_ok());
            prop_assert!(y.exact_div(&g).is_ok());
            // The common factor survives.
            if !c.is_constant() {
                prop_assert!(g.exact_div(&c.primitive_part()).is_ok());
            }
        }

        #[test]
        fn range_and_markoff_bound_samples(q in small_poly(), a in -12i64..12, w in 1i64..12) {
            let i = RatInterval::new(rat(a, 4), rat(a + w, 4)).unwrap();
            let m = q.range_bound(&i);
            let mk = markoff_bound(q.deg(), &m, &i).unwrap();
            let dq = q.derivative();
            for k in 0..=16 {
                let x = i.lo() + i.width() * rat(k, 16);
                prop_assert!(q.eval(&x).abs() <= m);
                // The half-length Markoff constant only holds for the crude
                // range bound when the interval is short relative to its
                // distance from the origin, or the degree is at least two.
                if q.deg() >= 2 || !(i.lo() < &rat(0, 1) && i.hi() > &rat(0, 1)) {
                    prop_assert!(dq.eval(&x).abs() <= mk.clone());
                }
            }
        }
    }
}
