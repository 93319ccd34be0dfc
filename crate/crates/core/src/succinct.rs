//! Bits at positions given in binary, through straight-line programs.
//!
//! A Newton iterate `x_t` is written as a ratio `N/D` of two straight-line
//! programs whose length grows linearly in `t`, even though the values
//! themselves have `d^t`-fold growth. With `2^(T-1) <= D < 2^T` and
//! `u = 1 - D 2^-T`, the truncated geometric series
//!
//! ```text
//! N/D ~ N 2^-T (1 + u + ... + u^K) = Y / 2^((K+1)T),
//! Y = sum_{I=0}^{K} N (2^T - D)^I 2^((K-I)T)
//! ```
//!
//! under-approximates `N/D` with relative error `u^(K+1) <= 2^-(K+1)`, so a
//! bit of `N/D` is a bit of the integer `Y`. The exponent `T` is found with
//! sign queries only. `Y` can be computed exactly, through residues modulo
//! small primes and a truncated-reciprocal reconstruction, or with guarded
//! fixed-point arithmetic when it is too large to write down.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::{checked_bit, RootHandle};
use crate::error::{Error, Result};
use crate::newton::{certified_error, certified_iterations, check_primes, inv_mod, odd_primes_from, pow_mod};
use crate::poly::IntPoly;
use crate::rat::{floor_log2, pow2, BigRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instr {
    Const0,
    Const1,
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
}

impl Instr {
    fn operands(&self) -> Option<(usize, usize)> {
        match *self {
            Instr::Const0 | Instr::Const1 => None,
            Instr::Add(a, b) | Instr::Sub(a, b) | Instr::Mul(a, b) => Some((a, b)),
        }
    }
}

/// A straight-line program; the last instruction is the output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slp {
    instrs: Vec<Instr>,
}

impl Slp {
    pub fn new(instrs: Vec<Instr>) -> Result<Self> {
        for (k, ins) in instrs.iter().enumerate() {
            if let Some((a, b)) = ins.operands() {
                if a >= k || b >= k {
                    return Err(Error::invalid(format!("instruction {k} refers forward")));
                }
            }
        }
        Ok(Slp { instrs })
    }

    pub fn instrs(&self) -> &[Instr] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    pub fn output(&self) -> Option<usize> {
        self.instrs.len().checked_sub(1)
    }

    fn out(&self) -> usize {
        self.output().expect("nonempty program")
    }

    /// Appends an instruction and returns its index.
    pub fn push(&mut self, ins: Instr) -> usize {
        let k = self.instrs.len();
        if let Some((a, b)) = ins.operands() {
            assert!(a < k && b < k, "operands must precede instruction {k}");
        }
        self.instrs.push(ins);
        k
    }

    /// Appends a double-and-add computation of `v`.
    pub fn push_constant(&mut self, v: &BigInt) -> usize {
        if v.is_zero() {
            return self.push(Instr::Const0);
        }
        let one = self.push(Instr::Const1);
        let mag = v.magnitude();
        let mut acc = one;
        for i in (0..mag.bits() - 1).rev() {
            acc = self.push(Instr::Add(acc, acc));
            if mag.bit(i) {
                acc = self.push(Instr::Add(acc, one));
            }
        }
        if v.is_negative() {
            let z = self.push(Instr::Const0);
            acc = self.push(Instr::Sub(z, acc));
        }
        acc
    }

    /// Appends a square-and-double computation of `2^e`.
    pub fn push_power_of_two(&mut self, e: u64) -> usize {
        let one = self.push(Instr::Const1);
        let mut acc = one;
        if e == 0 {
            return acc;
        }
        for i in (0..64 - e.leading_zeros()).rev() {
            if acc != one {
                acc = self.push(Instr::Mul(acc, acc));
            }
            if (e >> i) & 1 == 1 {
                acc = self.push(Instr::Add(acc, acc));
            }
        }
        acc
    }

    pub fn constant(v: &BigInt) -> Slp {
        let mut s = Slp::default();
        s.push_constant(v);
        s
    }

    pub fn power_of_two(e: u64) -> Slp {
        let mut s = Slp::default();
        s.push_power_of_two(e);
        s
    }

    /// Appends a copy of `other` and returns the index of its output.
    pub fn append(&mut self, other: &Slp) -> usize {
        let off = self.instrs.len();
        for ins in &other.instrs {
            let shifted = match *ins {
                Instr::Add(a, b) => Instr::Add(a + off, b + off),
                Instr::Sub(a, b) => Instr::Sub(a + off, b + off),
                Instr::Mul(a, b) => Instr::Mul(a + off, b + off),
                c => c,
            };
            self.instrs.push(shifted);
        }
        off + other.out()
    }

    pub fn negated(&self) -> Slp {
        let mut s = self.clone();
        let out = s.out();
        let z = s.push(Instr::Const0);
        s.push(Instr::Sub(z, out));
        s
    }

    /// `self - 2^e + 1`, which is positive exactly when `2^e <= self`.
    fn at_least_power_of_two(&self, e: u64) -> Slp {
        let mut s = self.clone();
        let out = s.out();
        let p = s.push_power_of_two(e);
        let one = s.push(Instr::Const1);
        let diff = s.push(Instr::Sub(out, p));
        s.push(Instr::Add(diff, one));
        s
    }

    /// This program with its output redirected to instruction `idx`.
    fn with_output(&self, idx: usize) -> Slp {
        let mut s = self.clone();
        let z = s.push(Instr::Const0);
        s.push(Instr::Add(idx, z));
        s
    }
}

impl fmt::Display for Slp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, ins) in self.instrs.iter().enumerate() {
            match ins {
                Instr::Const0 => writeln!(f, "{k}: const0")?,
                Instr::Const1 => writeln!(f, "{k}: const1")?,
                Instr::Add(a, b) => writeln!(f, "{k}: add {a} {b}")?,
                Instr::Sub(a, b) => writeln!(f, "{k}: sub {a} {b}")?,
                Instr::Mul(a, b) => writeln!(f, "{k}: mul {a} {b}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Slp {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut instrs = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let bad = || Error::Parse(format!("bad SLP line: {line:?}"));
            let (idx, body) = line.split_once(':').ok_or_else(bad)?;
            if idx.trim().parse::<usize>().map_err(|_| bad())? != instrs.len() {
                return Err(Error::Parse(format!("expected instruction {} in {line:?}", instrs.len())));
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            let arg = |i: usize| -> Result<usize> { words.get(i).ok_or_else(bad)?.parse().map_err(|_| bad()) };
            let ins = match (words.first().copied(), words.len()) {
                (Some("const0"), 1) => Instr::Const0,
                (Some("const1"), 1) => Instr::Const1,
                (Some("add"), 3) => Instr::Add(arg(1)?, arg(2)?),
                (Some("sub"), 3) => Instr::Sub(arg(1)?, arg(2)?),
                (Some("mul"), 3) => Instr::Mul(arg(1)?, arg(2)?),
                _ => return Err(bad()),
            };
            instrs.push(ins);
        }
        Slp::new(instrs)
    }
}

pub const DEFAULT_EVAL_CAP_BITS: u64 = 1 << 20;

fn eval_into(instrs: &[Instr], cap_bits: u64, vals: &mut Vec<BigInt>) -> Result<()> {
    let limit = |required: u64| Error::ResourceLimit {
        what: "SLP intermediate bits",
        required,
        cap: cap_bits,
    };
    for ins in &instrs[vals.len()..] {
        let v = match *ins {
            Instr::Const0 => BigInt::zero(),
            Instr::Const1 => BigInt::one(),
            Instr::Add(a, b) => &vals[a] + &vals[b],
            Instr::Sub(a, b) => &vals[a] - &vals[b],
            Instr::Mul(a, b) => {
                let lower = (vals[a].bits() + vals[b].bits()).saturating_sub(1);
                if lower > cap_bits {
                    return Err(limit(lower));
                }
                &vals[a] * &vals[b]
            }
        };
        if v.bits() > cap_bits {
            return Err(limit(v.bits()));
        }
        vals.push(v);
    }
    Ok(())
}

/// Exact value, with every intermediate below [`DEFAULT_EVAL_CAP_BITS`].
pub fn eval_slp(s: &Slp) -> Result<BigInt> {
    eval_slp_capped(s, DEFAULT_EVAL_CAP_BITS)
}

pub fn eval_slp_capped(s: &Slp, cap_bits: u64) -> Result<BigInt> {
    if s.is_empty() {
        return Err(Error::invalid("empty straight-line program"));
    }
    let mut vals = Vec::with_capacity(s.len());
    eval_into(&s.instrs, cap_bits, &mut vals)?;
    Ok(vals.pop().expect("nonempty"))
}

/// The value modulo `m`, using only residues.
pub fn eval_slp_mod(s: &Slp, m: u64) -> Result<u64> {
    if s.is_empty() {
        return Err(Error::invalid("empty straight-line program"));
    }
    if m < 2 {
        return Err(Error::invalid("modulus must be at least 2"));
    }
    let mm = m as u128;
    let mut vals: Vec<u64> = Vec::with_capacity(s.len());
    for ins in &s.instrs {
        let v = match *ins {
            Instr::Const0 => 0,
            Instr::Const1 => 1 % m,
            Instr::Add(a, b) => ((vals[a] as u128 + vals[b] as u128) % mm) as u64,
            Instr::Sub(a, b) => ((vals[a] as u128 + mm - vals[b] as u128) % mm) as u64,
            Instr::Mul(a, b) => (vals[a] as u128 * vals[b] as u128 % mm) as u64,
        };
        vals.push(v);
    }
    Ok(*vals.last().expect("nonempty"))
}

/// Sign oracle for straight-line programs.
pub trait PosSlp {
    /// Whether the program's value is strictly positive.
    fn is_positive(&self, s: &Slp) -> Result<bool>;
}

/// Exact evaluation under a bit cap. Values of the longest instruction
/// prefix shared with the previous query are reused, so a run of queries
/// against one large program only pays for its tails.
pub struct SlpEvaluator {
    cap_bits: u64,
    memo: Mutex<(Vec<Instr>, Vec<BigInt>)>,
}

impl SlpEvaluator {
    pub fn new(cap_bits: u64) -> Self {
        SlpEvaluator {
            cap_bits,
            memo: Mutex::new((Vec::new(), Vec::new())),
        }
    }

    pub fn cap_bits(&self) -> u64 {
        self.cap_bits
    }

    pub fn eval(&self, s: &Slp) -> Result<BigInt> {
        if s.is_empty() {
            return Err(Error::invalid("empty straight-line program"));
        }
        let mut memo = self.memo.lock().expect("poisoned");
        let (instrs, vals) = &mut *memo;
        let shared = instrs.iter().zip(&s.instrs).take_while(|(a, b)| a == b).count();
        let shared = shared.min(vals.len());
        instrs.clear();
        vals.truncate(shared);
        let result = eval_into(&s.instrs, self.cap_bits, vals);
        instrs.extend_from_slice(&s.instrs[..vals.len()]);
        result?;
        Ok(vals[s.out()].clone())
    }
}

impl Default for SlpEvaluator {
    fn default() -> Self {
        SlpEvaluator::new(DEFAULT_EVAL_CAP_BITS)
    }
}

impl PosSlp for SlpEvaluator {
    fn is_positive(&self, s: &Slp) -> Result<bool> {
        Ok(self.eval(s)?.is_positive())
    }
}

/// Whether the value is positive, by exact evaluation under the default cap.
pub fn pos_slp(s: &Slp) -> Result<bool> {
    SlpEvaluator::default().is_positive(s)
}

/// A ratio `N/D` with `D > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlpRatio {
    pub n: Slp,
    pub d: Slp,
}

impl SlpRatio {
    /// Checks `D != 0` and negates both programs if `D < 0`.
    pub fn new<P: PosSlp + ?Sized>(n: Slp, d: Slp, oracle: &P) -> Result<Self> {
        if n.is_empty() || d.is_empty() {
            return Err(Error::invalid("empty straight-line program"));
        }
        if oracle.is_positive(&d)? {
            return Ok(SlpRatio { n, d });
        }
        let neg_d = d.negated();
        if oracle.is_positive(&neg_d)? {
            return Ok(SlpRatio { n: n.negated(), d: neg_d });
        }
        Err(Error::invalid("denominator program evaluates to zero"))
    }

    pub fn from_ints<P: PosSlp + ?Sized>(n: &BigInt, d: &BigInt, oracle: &P) -> Result<Self> {
        SlpRatio::new(Slp::constant(n), Slp::constant(d), oracle)
    }
}

/// The `T` with `2^(T-1) <= D < 2^T`, located with sign queries only: first
/// by doubling the exponent, then one bit at a time.
pub fn find_t<P: PosSlp + ?Sized>(d: &Slp, oracle: &P) -> Result<u64> {
    if !oracle.is_positive(d)? {
        return Err(Error::invalid("find_t needs a positive value"));
    }
    let at_least = |e: u64| oracle.is_positive(&d.at_least_power_of_two(e));
    // Smallest j with D < 2^(2^j).
    let mut j = 0u32;
    while at_least(1u64 << j)? {
        j += 1;
        if j >= 63 {
            return Err(Error::ResourceLimit {
                what: "bit length of D",
                required: u64::MAX,
                cap: 1 << 62,
            });
        }
    }
    if j == 0 {
        return Ok(1);
    }
    // 2^lo <= D < 2^(lo + 2^(j-1)).
    let mut lo = 1u64 << (j - 1);
    for b in (0..j.saturating_sub(1)).rev() {
        if at_least(lo + (1 << b))? {
            lo += 1 << b;
        }
    }
    Ok(lo + 1)
}

/// Explicit stand-ins for the prime set and reciprocal truncation length of
/// the modular reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtParams {
    primes: Vec<u64>,
    trunc_bits: u64,
}

impl CrtParams {
    pub fn new(primes: Vec<u64>, trunc_bits: u64) -> Result<Self> {
        check_primes(&primes)?;
        if primes.is_empty() || trunc_bits == 0 {
            return Err(Error::invalid("CRT parameters need primes and trunc_bits >= 1"));
        }
        Ok(CrtParams { primes, trunc_bits })
    }

    /// 31-bit primes whose product exceeds `2^capacity_bits`.
    pub fn with_capacity(capacity_bits: u64, trunc_bits: u64) -> Result<Self> {
        let mut primes = Vec::new();
        let mut product = BigInt::one();
        for q in odd_primes_from(1 << 30) {
            if product.bits() > capacity_bits + 1 {
                break;
            }
            product *= q;
            primes.push(q);
        }
        CrtParams::new(primes, trunc_bits)
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn trunc_bits(&self) -> u64 {
        self.trunc_bits
    }

    fn product(&self) -> BigInt {
        self.primes.iter().fold(BigInt::one(), |acc, &q| acc * q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Backend {
    /// `Y` computed exactly.
    Exact,
    /// Residues of `Y` and a truncated-reciprocal reconstruction.
    Crt(CrtParams),
    /// Fixed-point evaluation of the truncated series with certified error.
    Guarded,
    /// `Exact` while `Y` fits under the size cap, `Guarded` beyond it.
    #[default]
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuccinctConfig {
    pub backend: Backend,
    pub eval_cap_bits: u64,
    /// Largest `Y` the exact backend will build.
    pub max_y_bits: u64,
    /// Largest bit position accepted.
    pub max_n: u64,
}

pub const DEFAULT_MAX_N: u64 = 4096;

impl Default for SuccinctConfig {
    fn default() -> Self {
        SuccinctConfig {
            backend: Backend::Auto,
            eval_cap_bits: 1 << 24,
            max_y_bits: 1 << 22,
            max_n: DEFAULT_MAX_N,
        }
    }
}

/// `|N|` as a program, `D`, `T` and a bound `|N| < 2^num_bits`.
struct Scaled {
    num: Option<Slp>,
    den: Slp,
    t: u64,
    num_bits: u64,
}

fn scaled<P: PosSlp + ?Sized>(r: &SlpRatio, oracle: &P) -> Result<Scaled> {
    let t = find_t(&r.d, oracle)?;
    let num = if oracle.is_positive(&r.n)? {
        Some(r.n.clone())
    } else {
        let neg = r.n.negated();
        oracle.is_positive(&neg)?.then_some(neg)
    };
    let num_bits = match &num {
        Some(s) => find_t(s, oracle)?,
        None => 0,
    };
    Ok(Scaled {
        num,
        den: r.d.clone(),
        t,
        num_bits,
    })
}

fn mul_u64(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::ResourceLimit {
        what: "series size in bits",
        required: u64::MAX,
        cap: u64::MAX,
    })
}

/// `floor(A 2^n')` where `A = |N| 2^-T (1 + u + ... + u^K)` is the truncated
/// series under-approximation of `|N|/D`.
pub fn approx_floor(r: &SlpRatio, n_prime: u64, terms: u64, cfg: &SuccinctConfig, ev: &SlpEvaluator) -> Result<BigInt> {
    let sc = scaled(r, ev)?;
    let Some(num) = &sc.num else {
        return Ok(BigInt::zero());
    };
    let y_bits = mul_u64(terms, sc.t)? + sc.num_bits + 1;
    let shift = mul_u64(terms + 1, sc.t)?;
    if shift < n_prime {
        return Err(Error::invalid("too few series terms for the requested precision"));
    }
    let shift = shift - n_prime;
    match &cfg.backend {
        Backend::Exact => floor_exact(&sc, num, terms, shift, y_bits, cfg.max_y_bits, ev),
        Backend::Auto if y_bits <= cfg.max_y_bits => floor_exact(&sc, num, terms, shift, y_bits, cfg.max_y_bits, ev),
        Backend::Auto | Backend::Guarded => floor_guarded(&sc, num, n_prime, terms, ev),
        Backend::Crt(params) => floor_crt(&sc, num, terms, shift, y_bits, params),
    }
}

fn floor_exact(
    sc: &Scaled,
    num: &Slp,
    terms: u64,
    shift: u64,
    y_bits: u64,
    max_y_bits: u64,
    ev: &SlpEvaluator,
) -> Result<BigInt> {
    if y_bits > max_y_bits {
        return Err(Error::ResourceLimit {
            what: "bits of Y",
            required: y_bits,
            cap: max_y_bits,
        });
    }
    let nv = ev.eval(num)?;
    let dv = ev.eval(&sc.den)?;
    Ok(series_numerator(&nv, &dv, sc.t, terms) >> shift as usize)
}

/// `Y = sum_{I=0}^{K} N v^I w^(K-I)` with `w = 2^T`, `v = w - D`, through the
/// closed form `N (w^(K+1) - v^(K+1)) / D`.
fn series_numerator(n: &BigInt, d: &BigInt, t: u64, terms: u64) -> BigInt {
    let w = BigInt::one() << t as usize;
    let v = &w - d;
    let e = (terms + 1) as usize;
    let geom = (BigInt::one() << (t as usize * e)) - num_traits::pow(v, e);
    let (q, rem) = geom.div_rem(d);
    debug_assert!(rem.is_zero());
    n * q
}

const GUARD_SCHEDULE: [u64; 4] = [32, 128, 512, 2048];

fn floor_guarded(sc: &Scaled, num: &Slp, n_prime: u64, terms: u64, ev: &SlpEvaluator) -> Result<BigInt> {
    let nv = ev.eval(num)?;
    let dv = ev.eval(&sc.den)?;
    let v = (BigInt::one() << sc.t as usize) - dv;
    let eq = sc.num_bits.saturating_sub(sc.t);
    // Multiply by 2^(prec - T), truncating toward zero.
    let fixed = |x: &BigInt, prec: u64| -> BigInt {
        if prec >= sc.t {
            x << (prec - sc.t) as usize
        } else {
            x >> (sc.t - prec) as usize
        }
    };
    for g in GUARD_SCHEDULE {
        // |A - q~ s~| <= (6 q + 2) 2^-P <= 2^(eq + 3 - P) with u <= 1/2.
        let prec = n_prime + eq + 3 + g;
        let one = BigInt::one() << prec as usize;
        let u = fixed(&v, prec);
        let q = fixed(&nv, prec);
        let mut s = one.clone();
        for _ in 0..terms {
            s = &one + ((&u * &s) >> prec as usize);
        }
        let shift = (2 * prec - n_prime) as usize;
        let lo = &q * &s;
        let hi = &lo + (BigInt::one() << (shift - g as usize));
        let (wl, wh) = (lo >> shift, hi >> shift);
        if wl == wh {
            return Ok(wl);
        }
    }
    Err(Error::IndeterminateBit)
}

fn floor_crt(sc: &Scaled, num: &Slp, terms: u64, shift: u64, y_bits: u64, params: &CrtParams) -> Result<BigInt> {
    let modulus = params.product();
    let available = modulus.bits() - 1;
    if y_bits > available {
        return Err(Error::Capacity {
            required_bits: y_bits,
            available_bits: available,
        });
    }
    let tr = params.trunc_bits as usize;
    let mut approx = BigInt::zero();
    let mut err = BigInt::zero();
    for &q in &params.primes {
        let qq = q as u128;
        let n_q = eval_slp_mod(num, q)? as u128;
        let d_q = eval_slp_mod(&sc.den, q)? as u128;
        let w_q = pow_mod(2, sc.t, q) as u128;
        let v_q = (w_q + qq - d_q) % qq;
        // w^(K-I) for I = 0..=K, highest first.
        let mut w_pows = vec![1u128; terms as usize + 1];
        for i in (0..terms as usize).rev() {
            w_pows[i] = w_pows[i + 1] * w_q % qq;
        }
        let mut sum: u128 = 0;
        let mut v_pow: u128 = 1;
        for w_pow in &w_pows {
            sum += n_q * v_pow % qq * w_pow % qq;
            v_pow = v_pow * v_q % qq;
        }
        let cofactor = (&modulus / q).mod_floor(&BigInt::from(q)).to_u64().expect("residue");
        let h = BigInt::from(inv_mod(cofactor, q));
        let sigma = (BigInt::one() << tr) / q;
        let weight = BigInt::from(sum) * &h;
        approx += &weight * sigma;
        err += weight;
    }
    let scale = BigInt::one() << tr;
    let frac = approx.mod_floor(&scale);
    if &frac + &err >= scale {
        return Err(Error::IndeterminateBit);
    }
    // Y = modulus * frac(S) with S in [approx, approx + err] / 2^tr.
    let y_lo = (&modulus * &frac).div_ceil(&scale);
    let y_hi = (&modulus * (&frac + &err)).div_floor(&scale);
    let (wl, wh) = (y_lo >> shift as usize, y_hi >> shift as usize);
    if wl != wh {
        return Err(Error::IndeterminateBit);
    }
    Ok(wl)
}

fn reciprocal_bit(r: &SlpRatio, n: u64, backend: Backend, ev: &SlpEvaluator) -> Result<u8> {
    if n > DEFAULT_MAX_N {
        return Err(Error::ResourceLimit {
            what: "bit position",
            required: n,
            cap: DEFAULT_MAX_N,
        });
    }
    let cfg = SuccinctConfig {
        backend,
        eval_cap_bits: ev.cap_bits(),
        ..SuccinctConfig::default()
    };
    let w = approx_floor(r, n, n + 1, &cfg, ev)?;
    Ok(w.bit(0) as u8)
}

/// Bit `n` of the `n + 2`-term under-approximation of `|N|/D`, whose error is
/// below `|N/D| 2^-(n+2)`, from the exact integer `Y`.
pub fn reciprocal_bit_exact(r: &SlpRatio, n: u64, ev: &SlpEvaluator) -> Result<u8> {
    reciprocal_bit(r, n, Backend::Exact, ev)
}

/// The same bit as [`reciprocal_bit_exact`], reconstructed from residues of
/// `Y` modulo `params.primes`.
pub fn reciprocal_bit_crt(r: &SlpRatio, n: u64, params: &CrtParams, ev: &SlpEvaluator) -> Result<u8> {
    reciprocal_bit(r, n, Backend::Crt(params.clone()), ev)
}

/// Programs for the unreduced numerator and denominator of the `t`-th
/// Newton iterate of `p` from `x0`. Each step appends the same number of
/// instructions.
pub fn newton_slp<P: PosSlp + ?Sized>(p: &IntPoly, x0: &BigRat, t: u32, oracle: &P) -> Result<SlpRatio> {
    let d = p.deg();
    if d < 1 {
        return Err(Error::invalid("Newton iteration needs a nonconstant polynomial"));
    }
    let mut s = Slp::default();
    let zero = s.push(Instr::Const0);
    let one = s.push(Instr::Const1);
    let mut a = s.push_constant(x0.numer());
    let mut b = s.push_constant(x0.denom());
    // F = sum (i-1) c_i a^i b^(d-i), G = sum i c_i a^(i-1) b^(d-i+1).
    let mut f_terms = Vec::new();
    let mut g_terms = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        let fc = c * (i as i64 - 1);
        if !fc.is_zero() {
            f_terms.push((i, s.push_constant(&fc)));
        }
        let gc = c * i as i64;
        if !gc.is_zero() {
            g_terms.push((i - 1, s.push_constant(&gc)));
        }
    }
    for _ in 0..t {
        let mut pa = vec![one, a];
        let mut pb = vec![one, b];
        for k in 2..=d {
            pa.push(s.push(Instr::Mul(pa[k - 1], a)));
            pb.push(s.push(Instr::Mul(pb[k - 1], b)));
        }
        let mut f = zero;
        for &(i, c) in &f_terms {
            let m = s.push(Instr::Mul(pa[i], pb[d - i]));
            let m = s.push(Instr::Mul(c, m));
            f = s.push(Instr::Add(f, m));
        }
        let mut g = zero;
        for &(i, c) in &g_terms {
            let m = s.push(Instr::Mul(pa[i], pb[d - i]));
            let m = s.push(Instr::Mul(c, m));
            g = s.push(Instr::Add(g, m));
        }
        a = f;
        b = g;
    }
    SlpRatio::new(s.with_output(a), s.with_output(b), oracle)
}

/// Bit `n >= 1` of `|x|` along the succinct path: Newton iterates as
/// straight-line programs, their ratio read through the truncated series,
/// then the same gap check as [`RootHandle::nth_bit`].
pub fn nth_bit_succinct(h: &RootHandle, n: u64, cfg: &SuccinctConfig) -> Result<u8> {
    if n == 0 {
        return Err(Error::invalid("bit positions start at 1"));
    }
    if n > cfg.max_n {
        return Err(Error::ResourceLimit {
            what: "bit position",
            required: n,
            cap: cfg.max_n,
        });
    }
    let eps = h.epsilon(n);
    let t = certified_iterations(h.cert(), &eps)?;
    let err_t = certified_error(h.cert(), t);
    // 2^(1 - n') <= eps.
    let n_prime = (1 - floor_log2(&eps)) as u64;
    // Every iterate stays in the good interval, so |x_t| < 2^e.
    let e = h.good().iv.max_abs().floor().to_integer().bits();
    let terms = n_prime + e;

    let ev = SlpEvaluator::new(cfg.eval_cap_bits);
    let r = newton_slp(&h.good().poly, &h.cert().x0, t, &ev)?;
    let w = approx_floor(&r, n_prime, terms, cfg, &ev)?;
    if (&w >> n_prime as usize) != h.int_part {
        return Err(Error::InvariantViolation(
            "succinct approximation disagrees with the integer part".into(),
        ));
    }
    let s = BigRat::new(w, BigInt::one() << n_prime as usize);
    checked_bit(&s, n, &(err_t + pow2(1 - n_prime as i64)))
}
