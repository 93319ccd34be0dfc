//! Newton-Raphson in three equivalent forms.
//!
//! * Exact value iteration on reduced rationals ([`iterate_exact`]).
//! * Explicit ratio polynomials and their t-bicompositions ([`ratio_polys`],
//!   [`bicompose`]): the Newton map sends `a/b` to `F(a,b)/G(a,b)` with
//!   `F = a P1 - P` and `G = b P1`, where `P` and `P1` are the
//!   homogenizations of `p` (degree `d`) and `p'` (degree `d - 1`).
//! * Residue iteration of `(F, G)` modulo word-sized primes followed by
//!   Chinese remaindering ([`iterate_mod`]).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::isolate::ConvergenceCert;
use crate::poly::{resultant, IntPoly};
use crate::rat::{ceil_log2, pow2, BigRat};

/// Bivariate integer polynomial, keyed by `(i, j)` for `a^i b^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
}

impl BiPoly {
    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), BigInt)>) -> Self {
        let mut out = BiPoly::default();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    fn add_term(&mut self, k: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn abs_coeff_sum(&self) -> BigInt {
        self.terms.values().map(Signed::abs).sum()
    }

    pub fn eval(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let mut apow: Vec<BigInt> = vec![BigInt::one()];
        let mut bpow: Vec<BigInt> = vec![BigInt::one()];
        let mut acc = BigInt::zero();
        for (&(i, j), c) in &self.terms {
            while apow.len() <= i as usize {
                let next = apow.last().unwrap() * a;
                apow.push(next);
            }
            while bpow.len() <= j as usize {
                let next = bpow.last().unwrap() * b;
                bpow.push(next);
            }
            acc += c * &apow[i as usize] * &bpow[j as usize];
        }
        acc
    }

    pub fn eval_mod(&self, a: u64, b: u64, m: u64) -> u64 {
        let mut acc: u128 = 0;
        let m128 = m as u128;
        for (&(i, j), c) in &self.terms {
            let cm = c.mod_floor(&BigInt::from(m)).to_u64().expect("reduced") as u128;
            let t = cm * pow_mod(a, i as u64, m) as u128 % m128 * pow_mod(b, j as u64, m) as u128 % m128;
            acc = (acc + t) % m128;
        }
        acc as u64
    }

    fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::default();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), e) in &other.terms {
                out.add_term((i + k, j + l), c * e);
            }
        }
        out
    }

    fn one() -> BiPoly {
        BiPoly::from_terms([((0, 0), BigInt::one())])
    }

    /// `self(x, y)` with polynomials substituted for both variables.
    pub fn compose(&self, x: &BiPoly, y: &BiPoly) -> BiPoly {
        let mut xp = vec![BiPoly::one()];
        let mut yp = vec![BiPoly::one()];
        let mut out = BiPoly::default();
        for (&(i, j), c) in &self.terms {
            while xp.len() <= i as usize {
                let next = xp.last().unwrap().mul(x);
                xp.push(next);
            }
            while yp.len() <= j as usize {
                let next = yp.last().unwrap().mul(y);
                yp.push(next);
            }
            for (&k, e) in &xp[i as usize].mul(&yp[j as usize]).terms {
                out.add_term(k, c * e);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioPair {
    pub f: BiPoly,
    pub g: BiPoly,
}

impl RatioPair {
    pub fn new(f: BiPoly, g: BiPoly) -> Result<Self> {
        if g.is_zero() {
            return Err(Error::invalid("denominator polynomial is zero"));
        }
        Ok(RatioPair { f, g })
    }

    pub fn apply(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        (self.f.eval(a, b), self.g.eval(a, b))
    }

    pub fn degree(&self) -> u32 {
        self.f.total_degree().max(self.g.total_degree())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonTrace {
    pub iterates: Vec<BigRat>,
}

impl NewtonTrace {
    pub fn last(&self) -> &BigRat {
        self.iterates.last().expect("trace holds x0")
    }

    /// Bit lengths of numerator and denominator of the final iterate.
    pub fn final_bits(&self) -> (u64, u64) {
        let x = self.last();
        (x.numer().bits(), x.denom().bits())
    }
}

pub fn newton_step(p: &IntPoly, x: &BigRat) -> Result<BigRat> {
    let dpx = p.derivative().eval(x);
    if dpx.is_zero() {
        return Err(Error::DerivativeZero { step: None });
    }
    Ok(x - p.eval(x) / dpx)
}

/// Ratio polynomials of the Newton map of `p`.
pub fn ratio_polys(p: &IntPoly) -> Result<RatioPair> {
    let d = match p.degree() {
        Some(d) if d >= 1 => d as u32,
        _ => return Err(Error::invalid("Newton map needs degree >= 1")),
    };
    let mut f = BiPoly::default();
    let mut g = BiPoly::default();
    for (i, a) in p.coeffs().iter().enumerate() {
        let i = i as u32;
        f.add_term((i, d - i), a * (i as i64 - 1));
        if i >= 1 {
            g.add_term((i - 1, d - i + 1), a * i);
        }
    }
    RatioPair::new(f, g)
}

pub const DEFAULT_BICOMPOSE_CAP: u32 = 6;

pub fn bicompose(r: &RatioPair, t: u32) -> Result<RatioPair> {
    bicompose_capped(r, t, DEFAULT_BICOMPOSE_CAP)
}

/// `(F^[t], G^[t])` with `F^[0] = X`, `G^[0] = Y` and
/// `F^[t+1] = f(F^[t], G^[t])`.
pub fn bicompose_capped(r: &RatioPair, t: u32, cap: u32) -> Result<RatioPair> {
    if t == 0 {
        return Ok(RatioPair {
            f: BiPoly::from_terms([((1, 0), BigInt::one())]),
            g: BiPoly::from_terms([((0, 1), BigInt::one())]),
        });
    }
    if t > cap {
        return Err(Error::ResourceLimit {
            what: "bicomposition depth",
            required: t as u64,
            cap: cap as u64,
        });
    }
    let mut cur = r.clone();
    for _ in 1..t {
        cur = RatioPair {
            f: r.f.compose(&cur.f, &cur.g),
            g: r.g.compose(&cur.f, &cur.g),
        };
    }
    Ok(cur)
}

/// The Newton map of a fixed polynomial on unreduced pairs, plus the
/// resultant of its ratio forms, used to cancel common factors cheaply.
pub(crate) struct NewtonMap {
    p: IntPoly,
    dp: IntPoly,
    res: BigInt,
}

impl NewtonMap {
    pub(crate) fn new(p: &IntPoly) -> Self {
        let d = p.deg();
        let r = ratio_polys(p).expect("degree >= 1");
        let f: Vec<BigInt> = (0..=d as u32).map(|i| r.f.coeff(i, d as u32 - i)).collect();
        let g: Vec<BigInt> = (0..=d as u32).map(|i| r.g.coeff(i, d as u32 - i)).collect();
        NewtonMap {
            p: p.clone(),
            dp: p.derivative(),
            res: resultant(&f, &g).abs(),
        }
    }

    /// `(F(a,b), G(a,b))`, unreduced.
    pub(crate) fn apply(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        let pv = self.p.eval_homogeneous(a, b);
        let p1 = self.dp.eval_homogeneous(a, b);
        (a * &p1 - pv, b * p1)
    }

    /// One reduced step from a reduced `a/b`.
    fn step(&self, a: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
        let (f, g) = self.apply(a, b);
        if g.is_zero() {
            return None;
        }
        let common = if self.res.is_zero() {
            f.gcd(&g)
        } else {
            let g1 = self.res.gcd(&f.mod_floor(&self.res));
            if g1.is_one() {
                g1
            } else {
                g1.gcd(&g.mod_floor(&g1))
            }
        };
        let (mut num, mut den) = (f / &common, g / &common);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Some((num, den))
    }
}

/// `[x0, x1, ..., xt]`, each reduced.
pub fn iterate_exact(p: &IntPoly, x0: &BigRat, t: usize) -> Result<NewtonTrace> {
    let mut iterates = vec![x0.clone()];
    if t == 0 {
        return Ok(NewtonTrace { iterates });
    }
    if p.deg() == 0 {
        return Err(Error::DerivativeZero { step: Some(0) });
    }
    let map = NewtonMap::new(p);
    let (mut a, mut b) = (x0.numer().clone(), x0.denom().clone());
    for step in 0..t {
        let (na, nb) = map.step(&a, &b).ok_or(Error::DerivativeZero { step: Some(step) })?;
        a = na;
        b = nb;
        iterates.push(BigRat::new_raw(a.clone(), b.clone()));
    }
    Ok(NewtonTrace { iterates })
}

pub(crate) fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// The first `count` odd primes, ascending.
pub fn odd_primes(count: usize) -> Vec<u64> {
    odd_primes_from(3).take(count).collect()
}

/// Ascending odd primes starting at `start`.
pub fn odd_primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(3)..).filter(|&n| n % 2 == 1 && is_prime(n))
}

pub(crate) fn check_primes(primes: &[u64]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for &q in primes {
        if q % 2 == 0 || !is_prime(q) {
            return Err(Error::invalid(format!("{q} is not an odd prime")));
        }
        if q >= 1 << 62 {
            return Err(Error::invalid(format!("prime {q} is too large")));
        }
        if !seen.insert(q) {
            return Err(Error::invalid(format!("prime {q} repeated")));
        }
    }
    Ok(())
}

/// Chinese remaindering with the result in the symmetric range
/// `(-M/2, M/2]`.
pub(crate) fn crt_symmetric(residues: &[(u64, u64)]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for &(r, q) in residues {
        let qb = BigInt::from(q);
        let cur = x.mod_floor(&qb).to_u64().unwrap();
        let minv = inv_mod(m.mod_floor(&qb).to_u64().unwrap(), q);
        let diff = (r + q - cur) % q;
        let k = (diff as u128 * minv as u128 % q as u128) as u64;
        x += &m * k;
        m *= q;
    }
    if &x * 2 > m {
        x -= m;
    }
    x
}

pub(crate) fn inv_mod(a: u64, m: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(m));
    assert!(e.gcd.is_one(), "{a} is not invertible mod {m}");
    e.x.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModIteration {
    /// Per prime, the residue pairs `(a_k, b_k)` for `k = 0..=t`.
    pub residues: Vec<(u64, Vec<(u64, u64)>)>,
    /// The exact unreduced pair `(F^[t](alpha, beta), G^[t](alpha, beta))`.
    pub reconstructed: (BigInt, BigInt),
}

/// Bits needed to represent `max(|F^[t](a,b)|, |G^[t](a,b)|)`.
pub fn magnitude_bits(r: &RatioPair, alpha: &BigInt, beta: &BigInt, t: u32) -> u64 {
    let s = BigInt::one() + r.f.abs_coeff_sum() + r.g.abs_coeff_sum();
    let log_s = ceil_log2(&BigRat::from_integer(s)).max(0) as u64;
    let b0 = alpha.abs().max(beta.abs()).max(BigInt::one());
    let d = r.degree().max(1) as u64;
    let geometric: u64 = (0..t).map(|k| d.pow(k)).sum();
    log_s * geometric + b0.bits() * d.pow(t)
}

pub fn iterate_mod(
    r: &RatioPair,
    alpha: &BigInt,
    beta: &BigInt,
    t: u32,
    primes: &[u64],
) -> Result<ModIteration> {
    check_primes(primes)?;
    let required_bits = magnitude_bits(r, alpha, beta, t) + 1;
    let product: BigInt = primes.iter().map(|&q| BigInt::from(q)).product();
    let available_bits = product.bits().saturating_sub(1);
    if available_bits < required_bits {
        return Err(Error::Capacity {
            required_bits,
            available_bits,
        });
    }
    let residues: Vec<(u64, Vec<(u64, u64)>)> = primes
        .iter()
        .map(|&q| {
            let qb = BigInt::from(q);
            let mut a = alpha.mod_floor(&qb).to_u64().unwrap();
            let mut b = beta.mod_floor(&qb).to_u64().unwrap();
            let mut trail = vec![(a, b)];
            for _ in 0..t {
                (a, b) = (r.f.eval_mod(a, b, q), r.g.eval_mod(a, b, q));
                trail.push((a, b));
            }
            (q, trail)
        })
        .collect();
    let last = |pick: fn(&(u64, u64)) -> u64| -> BigInt {
        let rs: Vec<(u64, u64)> = residues
            .iter()
            .map(|(q, trail)| (pick(trail.last().unwrap()), *q))
            .collect();
        crt_symmetric(&rs)
    };
    let reconstructed = (last(|x| x.0), last(|x| x.1));
    Ok(ModIteration {
        residues,
        reconstructed,
    })
}

/// Reduce an unreduced pair to a rational.
pub fn pair_to_rat(num: BigInt, den: BigInt) -> Result<BigRat> {
    if den.is_zero() {
        return Err(Error::DerivativeZero { step: None });
    }
    Ok(BigRat::new(num, den))
}

/// Newton steps that quadratic convergence guarantees for `target_bits`
/// correct bits: the least `t` with `2^(t/2) >= target_bits`.
pub fn iterations_needed(_cert: &ConvergenceCert, target_bits: u64) -> u32 {
    let target = (target_bits.max(1) as u128).pow(2);
    let mut t = 0u32;
    while (1u128 << t) < target {
        t += 1;
    }
    t
}

/// Smallest `t` whose certified error bound is below `eps`.
///
/// With `eps_0 <= 2^-k_0` from the start cell and `M <= 2^m`, the
/// quadratic-convergence inequality gives `eps_{i+1} <= 2^-(2 k_i - m)`.
pub fn certified_iterations(cert: &ConvergenceCert, eps: &BigRat) -> Result<u32> {
    if !eps.is_positive() {
        return Err(Error::invalid("target error must be positive"));
    }
    let mut k = -ceil_log2(&(cert.iprime.width() / BigRat::from_integer(2.into())));
    let m = ceil_log2(&cert.m);
    if k <= m {
        return Err(Error::InvariantViolation(
            "start cell too wide for quadratic convergence".into(),
        ));
    }
    let mut t = 0;
    while pow2(-k) >= *eps {
        k = 2 * k - m;
        t += 1;
    }
    Ok(t)
}

/// Error bound `2^-k_t` after `t` certified steps.
pub fn certified_error(cert: &ConvergenceCert, t: u32) -> BigRat {
    let mut k = -ceil_log2(&(cert.iprime.width() / BigRat::from_integer(2.into())));
    let m = ceil_log2(&cert.m);
    for _ in 0..t {
        k = 2 * k - m;
    }
    pow2(-k)
}
