//! Capped-precision p-adic integers.
//!
//! A `PadicInt` is a residue modulo p^N. Every value carries its ring
//! (prime and precision); binary operations between values of different
//! precision are carried out at the smaller precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{big_pow, floor_log, is_prime, val_big, val_u64};
use crate::error::{Error, Result};

#[derive(Debug)]
struct RingInner {
    p: u64,
    prec: u32,
    modulus: BigInt,
}

/// The ring Z/p^N Z viewed as Z_p at precision N.
#[derive(Clone, Debug)]
pub struct Zp(Arc<RingInner>);

impl PartialEq for Zp {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.prec == other.0.prec
    }
}
impl Eq for Zp {}

impl Zp {
    pub fn new(p: u64, prec: u32) -> Result<Zp> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        if prec == 0 {
            return Err(Error::InvalidPrecision("precision must be positive".into()));
        }
        Ok(Zp(Arc::new(RingInner {
            p,
            prec,
            modulus: big_pow(p, prec),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn prec(&self) -> u32 {
        self.0.prec
    }

    pub fn modulus(&self) -> &BigInt {
        &self.0.modulus
    }

    /// Same prime, different precision.
    pub fn at_prec(&self, prec: u32) -> Zp {
        if prec == self.prec() {
            return self.clone();
        }
        Zp::new(self.p(), prec).expect("prime already validated")
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(self.modulus())
    }

    pub fn elem(&self, x: impl Into<BigInt>) -> PadicInt {
        let x: BigInt = x.into();
        PadicInt {
            r: self.reduce(&x),
            ring: self.clone(),
        }
    }

    pub fn zero(&self) -> PadicInt {
        self.elem(0)
    }

    pub fn one(&self) -> PadicInt {
        self.elem(1)
    }

    /// num/den with den a p-adic unit.
    pub fn rational(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<PadicInt> {
        let d = self.elem(den);
        Ok(self.elem(num).div(&d)?)
    }
}

/// Valuation as reported by a capped-precision value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    /// The residue is zero; the true valuation is at least this.
    AtLeast(u32),
}

impl Valuation {
    /// Lower bound usable in arithmetic.
    pub fn lower(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicInt {
    ring: Zp,
    r: BigInt,
}

impl PadicInt {
    pub fn ring(&self) -> &Zp {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn prec(&self) -> u32 {
        self.ring.prec()
    }

    /// Residue in [0, p^N).
    pub fn residue(&self) -> &BigInt {
        &self.r
    }

    /// Representative in (-p^N/2, p^N/2].
    pub fn signed_residue(&self) -> BigInt {
        let m = self.ring.modulus();
        if &self.r * 2 > *m {
            &self.r - m
        } else {
            self.r.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.r.is_zero() {
            Valuation::AtLeast(self.prec())
        } else {
            Valuation::Exact(val_big(&self.r, self.p()))
        }
    }

    pub fn is_unit(&self) -> bool {
        !(&self.r % self.p()).is_zero()
    }

    /// Reduce to a lower precision.
    pub fn reduce_to(&self, prec: u32) -> PadicInt {
        let prec = prec.min(self.prec());
        self.ring.at_prec(prec).elem(self.r.clone())
    }

    fn common(&self, other: &PadicInt) -> Zp {
        assert_eq!(
            self.p(),
            other.p(),
            "p-adic operation across different primes"
        );
        if self.prec() <= other.prec() {
            self.ring.clone()
        } else {
            other.ring.clone()
        }
    }

    pub fn pow(&self, e: u64) -> PadicInt {
        PadicInt {
            r: self.r.modpow(&BigInt::from(e), self.ring.modulus()),
            ring: self.ring.clone(),
        }
    }

    pub fn pow_big(&self, e: &BigInt) -> PadicInt {
        assert!(!e.is_negative());
        PadicInt {
            r: self.r.modpow(e, self.ring.modulus()),
            ring: self.ring.clone(),
        }
    }

    pub fn inv(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::DivisionByNonUnit);
        }
        let m = self.ring.modulus();
        let g = self.r.extended_gcd(m);
        Ok(PadicInt {
            r: g.x.mod_floor(m),
            ring: self.ring.clone(),
        })
    }

    pub fn div(&self, other: &PadicInt) -> Result<PadicInt> {
        Ok(self * &other.inv()?)
    }

    /// Exact division by p^k; precision drops by k.
    pub fn div_p_power(&self, k: u32) -> Result<PadicInt> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= self.prec() {
            return Err(Error::InvalidPrecision(format!(
                "cannot divide by p^{k} at precision {}",
                self.prec()
            )));
        }
        let pk = big_pow(self.p(), k);
        if !(&self.r % &pk).is_zero() {
            return Err(Error::DivisionByNonUnit);
        }
        Ok(self.ring.at_prec(self.prec() - k).elem(&self.r / pk))
    }

    /// Multiply by p^k at the same precision.
    pub fn mul_p_power(&self, k: u32) -> PadicInt {
        self.ring.elem(&self.r * big_pow(self.p(), k))
    }

    /// Unit part u with self = p^v * u, at precision N - v.
    pub fn unit_part(&self) -> Result<(u32, PadicInt)> {
        match self.valuation() {
            Valuation::AtLeast(_) => Err(Error::ValuationOfZero),
            Valuation::Exact(v) => Ok((v, self.div_p_power(v)?)),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.signed_residue().to_i64()
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.r, self.p(), self.prec())
    }
}

impl<'a> Add<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn add(self, o: &PadicInt) -> PadicInt {
        let ring = self.common(o);
        ring.elem(&self.r + &o.r)
    }
}

impl<'a> Sub<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn sub(self, o: &PadicInt) -> PadicInt {
        let ring = self.common(o);
        ring.elem(&self.r - &o.r)
    }
}

impl<'a> Mul<&'a PadicInt> for &'a PadicInt {
    type Output = PadicInt;
    fn mul(self, o: &PadicInt) -> PadicInt {
        let ring = self.common(o);
        ring.elem(&self.r * &o.r)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        self.ring.elem(-&self.r)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $m(self, o: PadicInt) -> PadicInt {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $m(self, o: &PadicInt) -> PadicInt {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}

/// Working precisions: digits N, series terms M, weight-variable terms M_W.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PrecisionPolicy {
    pub digits: u32,
    pub series_terms: usize,
    pub weight_terms: usize,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            digits: 30,
            series_terms: 40,
            weight_terms: 8,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(digits: u32, series_terms: usize, weight_terms: usize) -> Result<Self> {
        let p = PrecisionPolicy {
            digits,
            series_terms,
            weight_terms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.digits < 4 || self.series_terms < 4 {
            return Err(Error::InvalidPrecision(format!(
                "need N >= 4 and M >= 4, got N={} M={}",
                self.digits, self.series_terms
            )));
        }
        if self.weight_terms < 1 {
            return Err(Error::InvalidPrecision("need M_W >= 1".into()));
        }
        Ok(())
    }

    /// Parse "N,M" or "N,M,MW".
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |x: &str| {
            x.parse::<u64>()
                .map_err(|_| Error::InvalidPrecision(format!("not a number: {x:?}")))
        };
        let d = PrecisionPolicy::default();
        match parts.as_slice() {
            [n, m] => Self::new(num(n)? as u32, num(m)? as usize, d.weight_terms),
            [n, m, w] => Self::new(num(n)? as u32, num(m)? as usize, num(w)? as usize),
            _ => Err(Error::InvalidPrecision(format!("expected N,M[,MW], got {s:?}"))),
        }
    }
}

/// Teichmüller lift ω(z): the (p-1)-th root of unity congruent to z mod p.
pub fn teichmueller(z: &PadicInt) -> Result<PadicInt> {
    if !z.is_unit() {
        return Err(Error::NoTeichmuellerLift);
    }
    // z^(p^(N-1)) is constant on z + pZ_p modulo p^N
    let e = big_pow(z.p(), z.prec() - 1);
    Ok(z.pow_big(&e))
}

/// Unit root of X^2 - a_p X + p^(k-1).
pub fn hensel_unit_root(a_p: &PadicInt, k: u32) -> Result<PadicInt> {
    if !a_p.is_unit() {
        return Err(Error::NotOrdinary);
    }
    if k < 2 {
        return Err(Error::OutOfRange(format!("weight {k} < 2")));
    }
    let ring = a_p.ring();
    let c = ring.elem(big_pow(a_p.p(), k - 1));
    let mut x = a_p.clone();
    let mut steps = 0;
    loop {
        let f = &(&x * &x) - &(&(a_p * &x) - &c);
        if f.is_zero() {
            return Ok(x);
        }
        let df = &(&x + &x) - a_p;
        x = &x - &f.div(&df)?;
        steps += 1;
        if steps > 2 * a_p.prec() + 8 {
            return Err(Error::Invalid("Hensel iteration did not converge".into()));
        }
    }
}

/// log_p(u) for a 1-unit u, with rigorous truncation of the alternating series.
pub fn one_unit_log(u: &PadicInt) -> Result<PadicInt> {
    let ring = u.ring();
    let p = u.p();
    let n = u.prec();
    let x = &u.r - BigInt::one();
    let x = x.mod_floor(ring.modulus());
    if x.is_zero() {
        return Ok(ring.zero());
    }
    let v = val_big(&x, p);
    if v == 0 {
        return Err(Error::NotOneUnit(u.to_string()));
    }
    // first index M with v*M - floor(log_p M) >= N; the bound is monotone in M
    let mut terms = 1u64;
    while (v as u64) * terms < n as u64 + floor_log(terms, p) as u64 {
        terms += 1;
    }
    let extra = if terms > 1 { floor_log(terms - 1, p) } else { 0 };
    let wide = big_pow(p, n + extra);
    let mut acc = BigInt::zero();
    let mut xi = BigInt::one();
    for i in 1..terms {
        xi = (&xi * &x).mod_floor(&wide);
        let vi = val_u64(i, p);
        let unit_i = i / p.pow(vi);
        let num = &xi / big_pow(p, vi);
        let inv = BigInt::from(unit_i)
            .extended_gcd(ring.modulus())
            .x
            .mod_floor(ring.modulus());
        let term = num * inv;
        if i % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(ring.elem(acc))
}

/// The square root congruent to 1 mod p of a 1-unit.
pub fn one_unit_sqrt(u: &PadicInt) -> Result<PadicInt> {
    let one = u.ring().one();
    if (u - &one).valuation().lower() == 0 {
        return Err(Error::NotOneUnit(u.to_string()));
    }
    let mut s = one.clone();
    for _ in 0..(2 * u.prec() + 8) {
        let f = &(&s * &s) - u;
        if f.is_zero() {
            return Ok(s);
        }
        s = &s - &f.div(&(&s + &s))?;
    }
    Err(Error::Invalid("square-root iteration did not converge".into()))
}

/// 1-unit part ⟨z⟩ = z / ω(z).
pub fn one_unit_part(z: &PadicInt) -> Result<PadicInt> {
    z.div(&teichmueller(z)?)
}
