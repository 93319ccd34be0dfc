//! Preprocessing: make the polynomial monic, strip its rational roots and
//! split it into factors that share no root with their first or second
//! derivative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::rat::BigRat;

/// A factor ready for root isolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreparedPoly {
    pub factor: IntPoly,
    /// The input polynomial this factor came from, in the text format.
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrepReport {
    /// Rational roots of the input, ascending, each listed once.
    pub rational_roots: Vec<BigRat>,
    pub factors: Vec<PreparedPoly>,
}

/// `(q, a_d)` with `q(y) = a_d^(d-1) p(y / a_d)` monic.
pub fn monicize(p: &IntPoly) -> Result<(IntPoly, BigInt)> {
    let d = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::invalid("cannot monicize a constant polynomial")),
    };
    let ad = p.coeff(d);
    let mut coeffs = vec![BigInt::zero(); d + 1];
    let mut pw = BigInt::one();
    for i in (0..d).rev() {
        coeffs[i] = p.coeff(i) * &pw;
        pw *= &ad;
    }
    coeffs[d] = BigInt::one();
    Ok((IntPoly::new(coeffs), ad))
}

/// Divide a polynomial by `y - r`, which must be an exact factor.
fn deflate(q: &IntPoly, r: &BigInt) -> IntPoly {
    let c = q.coeffs();
    let d = c.len() - 1;
    let mut out = vec![BigInt::zero(); d];
    let mut carry = BigInt::zero();
    for i in (1..=d).rev() {
        carry = &c[i] + carry * r;
        out[i - 1] = carry.clone();
    }
    debug_assert!((&c[0] + carry * r).is_zero());
    IntPoly::new(out)
}

/// Removes every integer root of a monic `q` to full multiplicity. Returns
/// the reduced polynomial and the distinct integer roots in ascending order.
pub fn strip_integer_roots(q: &IntPoly) -> Result<(IntPoly, Vec<BigInt>)> {
    if q.leading().is_some_and(|l| !l.is_one()) {
        return Err(Error::invalid("strip_integer_roots expects a monic polynomial"));
    }
    let mut cur = q.clone();
    let mut roots = Vec::new();
    if cur.is_constant() {
        return Ok((cur, roots));
    }
    let zero = BigInt::zero();
    if cur.coeff(0).is_zero() {
        while !cur.is_constant() && cur.coeff(0).is_zero() {
            cur = deflate(&cur, &zero);
        }
        roots.push(zero.clone());
    }
    let bound = cur_bound(&cur);
    let mut k = BigInt::one();
    while k < bound && !cur.is_constant() {
        for r in [-k.clone(), k.clone()] {
            // A nonzero integer root divides the (nonzero) constant term.
            while !cur.is_constant() && cur.coeff(0).is_multiple_of(&r) && cur.sign_at(&BigRat::from_integer(r.clone())) == 0 {
                if roots.last() != Some(&r) {
                    roots.push(r.clone());
                }
                cur = deflate(&cur, &r);
            }
        }
        k += 1;
    }
    roots.sort();
    Ok((cur, roots))
}

/// Integer strictly above every root magnitude.
fn cur_bound(q: &IntPoly) -> BigInt {
    if q.is_constant() {
        return BigInt::zero();
    }
    let m = q.cauchy_bound().expect("nonconstant");
    m.ceil().to_integer()
}

/// Zero polynomials are treated as having no roots, so the gcd with them is
/// reported as the constant 1 here rather than as the other argument.
fn gcd_with_derivative(f: &IntPoly, df: &IntPoly) -> IntPoly {
    if df.is_zero() {
        return IntPoly::one();
    }
    f.gcd(df).expect("f is nonzero")
}

/// Splits `p` into distinct primitive factors of degree at least one whose
/// roots together are the roots of `p`, none of which shares a root with its
/// first or second derivative.
pub fn split_shared_roots(p: &IntPoly) -> Vec<IntPoly> {
    let mut out = Vec::new();
    split_into(&p.primitive_part(), &mut out);
    out.sort_by(|a, b| (a.deg(), a.coeffs()).cmp(&(b.deg(), b.coeffs())));
    out.dedup();
    out
}

fn split_into(p: &IntPoly, out: &mut Vec<IntPoly>) {
    if p.is_constant() {
        return;
    }
    if p.deg() == 1 {
        out.push(p.clone());
        return;
    }
    let g = gcd_with_derivative(p, &p.derivative());
    let (p1, p2) = if g.is_constant() {
        (p.clone(), None)
    } else {
        (p.exact_div(&g).expect("gcd divides"), Some(g))
    };
    let h = gcd_with_derivative(&p1, &p1.derivative().derivative());
    if p2.is_none() && h.is_constant() {
        out.push(p.clone());
        return;
    }
    if let Some(p2) = p2 {
        split_into(&p2, out);
    }
    if h.is_constant() {
        split_into(&p1, out);
    } else {
        split_into(&p1.exact_div(&h).expect("gcd divides"), out);
        split_into(&h, out);
    }
}

/// Full preprocessing pipeline.
pub fn preprocess(p: &IntPoly) -> Result<PrepReport> {
    let (q, scale) = monicize(p)?;
    let (reduced, int_roots) = strip_integer_roots(&q)?;
    let mut rational_roots: Vec<BigRat> = int_roots
        .into_iter()
        .map(|y| BigRat::new(y, scale.clone()))
        .collect();
    rational_roots.sort();
    // Back to x: the roots of reduced(scale * x) are the irrational roots of p.
    let back = reduced.scale_arg(&scale).primitive_part();
    let provenance = p.to_string();
    let factors = split_shared_roots(&back)
        .into_iter()
        .map(|factor| PreparedPoly {
            factor,
            provenance: provenance.clone(),
        })
        .collect();
    Ok(PrepReport {
        rational_roots,
        factors,
    })
}

/// Checks the invariants every prepared factor must satisfy.
pub fn is_prepared(f: &IntPoly) -> bool {
    if f.is_constant() {
        return false;
    }
    let d1 = f.derivative();
    let d2 = d1.derivative();
    gcd_with_derivative(f, &d1).is_constant() && gcd_with_derivative(f, &d2).is_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn monicize_examples() {
        assert_eq!(monicize(&p(&[-8, 0, 2])).unwrap(), (p(&[-16, 0, 1]), BigInt::from(2)));
        assert_eq!(monicize(&p(&[-1, 3])).unwrap(), (p(&[-1, 1]), BigInt::from(3)));
        assert_eq!(monicize(&p(&[-1, -1, 2])).unwrap(), (p(&[-2, -1, 1]), BigInt::from(2)));
        assert!(monicize(&p(&[7])).is_err());
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip_integer_roots(&p(&[-2, -1, 1])).unwrap(), (p(&[1]), ints(&[-1, 2])));
        assert_eq!(strip_integer_roots(&p(&[-2, 0, 1])).unwrap(), (p(&[-2, 0, 1]), vec![]));
        assert_eq!(strip_integer_roots(&p(&[0, -1, 0, 1])).unwrap(), (p(&[1]), ints(&[-1, 0, 1])));
        // (y-1)^3 (y^2-2): multiplicity is removed completely.
        let q = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &(&p(&[-1, 1]) * &p(&[-2, 0, 1]));
        assert_eq!(strip_integer_roots(&q).unwrap(), (p(&[-2, 0, 1]), ints(&[1])));
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_shared_roots(&p(&[0, -1, 0, 1])), vec![p(&[0, 1]), p(&[-1, 0, 1])]);
        assert_eq!(split_shared_roots(&p(&[1, -2, 1])), vec![p(&[-1, 1])]);
        assert_eq!(split_shared_roots(&p(&[-2, 0, 1])), vec![p(&[-2, 0, 1])]);
    }

    #[test]
    fn preprocess_examples() {
        let r = preprocess(&p(&[-1, -1, 2])).unwrap();
        assert_eq!(r.rational_roots, vec![rat(-1, 2), rat(1, 1)]);
        assert!(r.factors.is_empty());

        let r = preprocess(&p(&[-2, 0, 1])).unwrap();
        assert!(r.rational_roots.is_empty());
        assert_eq!(r.factors.len(), 1);
        assert_eq!(r.factors[0].factor, p(&[-2, 0, 1]));
        assert_eq!(r.factors[0].provenance, "-2,0,1");

        let r = preprocess(&p(&[0, -1, 0, 1])).unwrap();
        assert_eq!(r.rational_roots, vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        assert!(r.factors.is_empty());
    }

    #[test]
    fn preprocess_maps_back_to_x() {
        // (2x - 1)(3x^2 - 2)^2: the irrational factor must come back in x.
        let f = &p(&[-1, 2]) * &(&p(&[-2, 0, 3]) * &p(&[-2, 0, 3]));
        let r = preprocess(&f).unwrap();
        assert_eq!(r.rational_roots, vec![rat(1, 2)]);
        let fs: Vec<_> = r.factors.iter().map(|f| f.factor.clone()).collect();
        assert_eq!(fs, vec![p(&[-2, 0, 3])]);
    }

    #[test]
    fn prepared_invariant_holds() {
        for c in [&[0i64, -1, 0, 1][..], &[1, -2, 1], &[-2, 0, 1], &[0, 0, 0, -1, 0, 1], &[3, 1, 4, 1, 5, 9, 2]] {
            for f in split_shared_roots(&p(c)) {
                assert!(is_prepared(&f), "{f}");
            }
        }
    }
}
