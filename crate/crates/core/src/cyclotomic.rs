//! Exact arithmetic in Z[ζ_m] with m = t·p^n, t | p−1, and its p-adic
//! completion at precision N for t = 1.
//!
//! Elements are coefficient vectors in the power basis 1, ζ, …, ζ^{φ(m)−1},
//! reduced modulo the m-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{euler_phi, factorize, is_prime, primitive_root_prime_power, val_big};
use crate::error::{Error, Result};
use crate::padic::{teichmueller, PadicInt, Zp};

/// Level of a cyclotomic ring: ζ has order t·p^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level {
    pub p: u64,
    pub n: u32,
    pub tame: u64,
}

impl Level {
    pub fn new(p: u64, n: u32, tame: u64) -> Result<Level> {
        if p == 2 || !is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        if tame == 0 || (p - 1) % tame != 0 {
            return Err(Error::Invalid(format!("tame level {tame} must divide {}", p - 1)));
        }
        Ok(Level { p, n, tame })
    }

    pub fn order(&self) -> u64 {
        self.tame * self.p.pow(self.n)
    }

    pub fn phi(&self) -> usize {
        euler_phi(self.order()) as usize
    }

    /// Index i with ζ_order^k = ζ_m^i, if that root of unity lies in this level.
    pub fn root_index(&self, order: u64, k: i64) -> Option<usize> {
        let k = k.rem_euclid(order as i64) as u64;
        if k == 0 {
            return Some(0);
        }
        let g = k.gcd(&order);
        let (o, k) = (order / g, k / g);
        let m = self.order();
        (m % o == 0).then(|| (k * (m / o)) as usize)
    }

    /// Smallest level containing both.
    pub fn join(&self, other: &Level) -> Result<Level> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(Level {
            p: self.p,
            n: self.n.max(other.n),
            tame: self.tame.lcm(&other.tame),
        })
    }
}

/// Sparse Φ_m as (exponent, coefficient) pairs, highest term first, leading term excluded.
struct CycloPoly {
    degree: usize,
    tail: Vec<(usize, i64)>,
    dense: Vec<i64>,
}

fn cyclo_cache() -> &'static Mutex<HashMap<u64, Arc<CycloPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Dense coefficients of Φ_m, low degree first.
fn cyclotomic_dense(m: u64) -> Vec<i64> {
    // Φ_m(x) = Φ_rad(x^{m/rad}), and Φ_rad = Π_{d | rad} (x^d − 1)^{μ(rad/d)}
    let primes: Vec<u64> = factorize(m).into_iter().map(|(q, _)| q).collect();
    let rad: u64 = primes.iter().product();
    let stretch = (m / rad) as usize;
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for mask in 0u32..(1 << primes.len()) {
        let mut d = rad;
        for (i, q) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d /= q;
            }
        }
        let factor = {
            let mut f = vec![0i64; d as usize + 1];
            f[0] = -1;
            f[d as usize] = 1;
            f
        };
        if mask.count_ones() % 2 == 0 {
            num = poly_mul_i64(&num, &factor);
        } else {
            den = poly_mul_i64(&den, &factor);
        }
    }
    let base = poly_div_exact_i64(&num, &den);
    let mut out = vec![0i64; (base.len() - 1) * stretch + 1];
    for (i, c) in base.into_iter().enumerate() {
        out[i * stretch] = c;
    }
    out
}

fn poly_mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_div_exact_i64(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dl = den.len();
    let lead = *den.last().unwrap();
    let mut q = vec![0i64; num.len() - dl + 1];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1] / lead;
        q[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

fn cyclo(m: u64) -> Arc<CycloPoly> {
    let mut cache = cyclo_cache().lock().unwrap();
    cache
        .entry(m)
        .or_insert_with(|| {
            let dense = cyclotomic_dense(m);
            let degree = dense.len() - 1;
            let tail = (0..degree)
                .rev()
                .filter(|&i| dense[i] != 0)
                .map(|i| (i, dense[i]))
                .collect();
            Arc::new(CycloPoly {
                degree,
                tail,
                dense,
            })
        })
        .clone()
}

/// Reduce an arbitrary-length coefficient vector modulo x^m − 1 and Φ_m.
fn reduce_big(level: &Level, raw: Vec<BigInt>) -> Vec<BigInt> {
    let m = level.order() as usize;
    let mut folded = vec![BigInt::zero(); m];
    for (i, c) in raw.into_iter().enumerate() {
        if !c.is_zero() {
            folded[i % m] += c;
        }
    }
    let phi = cyclo(level.order());
    for i in (phi.degree..m).rev() {
        if folded[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut folded[i]);
        let shift = i - phi.degree;
        for &(e, k) in &phi.tail {
            folded[shift + e] -= &c * k;
        }
    }
    folded.truncate(phi.degree);
    folded
}

/// Same reduction on i128, None on overflow.
fn reduce_small(level: &Level, raw: &[i128]) -> Option<Vec<i128>> {
    let m = level.order() as usize;
    let mut folded = vec![0i128; m];
    for (i, &c) in raw.iter().enumerate() {
        folded[i % m] = folded[i % m].checked_add(c)?;
    }
    let phi = cyclo(level.order());
    for i in (phi.degree..m).rev() {
        let c = folded[i];
        if c == 0 {
            continue;
        }
        folded[i] = 0;
        let shift = i - phi.degree;
        for &(e, k) in &phi.tail {
            let t = c.checked_mul(k as i128)?;
            folded[shift + e] = folded[shift + e].checked_sub(t)?;
        }
    }
    folded.truncate(phi.degree);
    Some(folded)
}

/// Element of Z[ζ_m].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycElem {
    level: Level,
    c: Vec<BigInt>,
}

impl CycElem {
    pub fn zero(level: Level) -> CycElem {
        CycElem {
            c: vec![BigInt::zero(); level.phi()],
            level,
        }
    }

    pub fn from_int(level: Level, x: impl Into<BigInt>) -> CycElem {
        let mut e = CycElem::zero(level);
        e.c[0] = x.into();
        e
    }

    pub fn one(level: Level) -> CycElem {
        CycElem::from_int(level, 1)
    }

    /// ζ_m^e for the level's primitive root ζ_m.
    pub fn zeta_pow(level: Level, e: i64) -> CycElem {
        let m = level.order() as i64;
        let mut raw = vec![BigInt::zero(); m as usize];
        raw[e.rem_euclid(m) as usize] = BigInt::one();
        CycElem {
            c: reduce_big(&level, raw),
            level,
        }
    }

    /// ζ_order^k, where order divides the level's order; ζ_order = ζ_m^(m/order).
    pub fn root_of_unity(level: Level, order: u64, k: i64) -> Result<CycElem> {
        let i = level.root_index(order, k).ok_or_else(|| {
            Error::Invalid(format!(
                "root of unity of order {order} not in level {}",
                level.order()
            ))
        })?;
        Ok(CycElem::zeta_pow(level, i as i64))
    }

    /// Build from coefficients on powers of ζ_m (any length; reduced).
    pub fn from_powers(level: Level, raw: Vec<BigInt>) -> CycElem {
        CycElem {
            c: reduce_big(&level, raw),
            level,
        }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.c.iter().skip(1).all(Zero::is_zero) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Canonical image in a larger level.
    pub fn embed(&self, target: Level) -> Result<CycElem> {
        if target == self.level {
            return Ok(self.clone());
        }
        let joined = self.level.join(&target)?;
        if joined != target {
            return Err(Error::Invalid(format!(
                "level {:?} does not contain {:?}",
                target, self.level
            )));
        }
        let stride = (target.order() / self.level.order()) as usize;
        let mut raw = vec![BigInt::zero(); (self.c.len().max(1) - 1) * stride + 1];
        for (i, c) in self.c.iter().enumerate() {
            raw[i * stride] = c.clone();
        }
        Ok(CycElem::from_powers(target, raw))
    }

    fn aligned(&self, other: &CycElem) -> Result<(CycElem, CycElem)> {
        let lvl = self.level.join(&other.level)?;
        Ok((self.embed(lvl)?, other.embed(lvl)?))
    }

    pub fn add(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = self.aligned(other)?;
        Ok(CycElem {
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
            level: a.level,
        })
    }

    pub fn sub(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = self.aligned(other)?;
        Ok(CycElem {
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
            level: a.level,
        })
    }

    pub fn neg(&self) -> CycElem {
        CycElem {
            c: self.c.iter().map(|x| -x).collect(),
            level: self.level,
        }
    }

    pub fn scale(&self, k: &BigInt) -> CycElem {
        CycElem {
            c: self.c.iter().map(|x| x * k).collect(),
            level: self.level,
        }
    }

    pub fn mul(&self, other: &CycElem) -> Result<CycElem> {
        let (a, b) = self.aligned(other)?;
        let level = a.level;
        if let Some(c) = mul_small(&level, &a.c, &b.c) {
            return Ok(CycElem { c, level });
        }
        let mut raw = vec![BigInt::zero(); a.c.len() + b.c.len()];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Ok(CycElem {
            c: reduce_big(&level, raw),
            level,
        })
    }

    pub fn pow(&self, mut e: u64) -> CycElem {
        let mut base = self.clone();
        let mut acc = CycElem::one(self.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same level");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same level");
            }
        }
        acc
    }

    /// σ_t: ζ ↦ ζ^t.
    pub fn galois_conjugate(&self, t: i64) -> Result<CycElem> {
        let m = self.level.order() as i64;
        if t.gcd(&m) != 1 {
            return Err(Error::NotCoprime(t.to_string(), m.to_string()));
        }
        let mut raw = vec![BigInt::zero(); m as usize];
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_zero() {
                let j = (i as i64 * t).rem_euclid(m) as usize;
                raw[j] += c;
            }
        }
        Ok(CycElem::from_powers(self.level, raw))
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycElem {
        self.galois_conjugate(-1).expect("-1 is always coprime")
    }

    /// Absolute norm to Q.
    pub fn norm(&self) -> BigInt {
        let phi = cyclo(self.level.order());
        resultant_multimodular(&phi.dense, &self.c)
    }

    /// Valuation normalized so that v(p) = 1: v_p(Norm) / φ(m).
    pub fn valuation_above_p(&self) -> Result<BigRational> {
        if self.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let nm = self.norm();
        let v = val_big(&nm, self.level.p);
        Ok(BigRational::new(
            BigInt::from(v),
            BigInt::from(self.level.phi() as u64),
        ))
    }

    /// Image in Z_p[ζ_{p^n}] at the given precision: ζ_m ↦ ω_t^x · ζ_{p^n}^y where
    /// ζ_t = ζ_m^{p^n}, ζ_{p^n} = ζ_m^t, x·p^n + y·t = 1 and ω_t is the Teichmüller
    /// lift of g^{(p−1)/t} for the least primitive root g mod p.
    pub fn to_padic(&self, ring: &Zp) -> Result<PadicCyc> {
        let lv = self.level;
        if ring.p() != lv.p {
            return Err(Error::PrimeMismatch(ring.p(), lv.p));
        }
        let pn = lv.p.pow(lv.n) as i64;
        let t = lv.tame as i64;
        let g = pn.extended_gcd(&t);
        let (x, y) = (g.x, g.y);
        let gen = primitive_root_prime_power(lv.p, 1);
        let omega_t = teichmueller(&ring.elem(gen))?.pow((lv.p - 1) / lv.tame);
        let mut out = PadicCyc::zero(ring, lv.n);
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = i as i64;
            let tame_part = omega_t.pow((x * i).rem_euclid(t) as u64);
            let wild = PadicCyc::zeta_pow(ring, lv.n, (y * i).rem_euclid(pn));
            out = out.add(&wild.scale(&(&tame_part * &ring.elem(c.clone()))));
        }
        Ok(out)
    }
}

impl fmt::Display for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [z^{}=1]", self.level.order())
    }
}

fn mul_small(level: &Level, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    const LIM: i64 = 1 << 40;
    let small = |v: &[BigInt]| -> Option<Vec<i64>> {
        v.iter()
            .map(|x| x.to_i64().filter(|y| y.abs() < LIM))
            .collect()
    };
    let sa = small(a)?;
    let sb = small(b)?;
    let mut raw = vec![0i128; sa.len() + sb.len()];
    for (i, &x) in sa.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in sb.iter().enumerate() {
            if y != 0 {
                raw[i + j] += x as i128 * y as i128;
            }
        }
    }
    let red = reduce_small(level, &raw)?;
    Some(red.into_iter().map(BigInt::from).collect())
}

fn crt_primes() -> &'static Vec<u64> {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut c = (1u64 << 62) - 1;
        while out.len() < 4096 {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn powm(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, b, q);
        }
        b = mulm(b, b, q);
        e >>= 1;
    }
    r
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Res(f, g) over F_q by the Euclidean algorithm.
fn resultant_mod(f: &[u64], g: &[u64], q: u64) -> u64 {
    let mut a: Vec<u64> = f.to_vec();
    let mut b: Vec<u64> = g.to_vec();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut res = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mulm(res, powm(b[0], da as u64, q), q);
        }
        // r = a mod b
        let inv_lead = powm(b[db], q - 2, q);
        let mut r = a.clone();
        for i in (db..=da).rev() {
            let c = mulm(r[i], inv_lead, q);
            if c == 0 {
                continue;
            }
            for j in 0..=db {
                let t = mulm(c, b[j], q);
                r[i - db + j] = (r[i - db + j] + q - t) % q;
            }
        }
        r.truncate(db);
        trim(&mut r);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            res = (q - res) % q;
        }
        res = mulm(res, powm(b[db], (da - dr) as u64, q), q);
        a = b;
        b = r;
    }
}

/// Exact Res(f, g) for integer polynomials via CRT over 62-bit primes.
fn resultant_multimodular(f: &[i64], g: &[BigInt]) -> BigInt {
    let df = f.len() as f64 - 1.0;
    let dg = g.len() as f64 - 1.0;
    // Hadamard: |Res| ≤ ‖f‖₂^deg g · ‖g‖₂^deg f
    let nf = 0.5 * f.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().max(1.0).log2();
    let maxbits = g.iter().map(|x| x.bits()).max().unwrap_or(0) as f64;
    let ng = maxbits + 0.5 * (g.len() as f64).log2();
    let bound_bits = (dg.max(0.0) * nf + df * ng + 2.0).ceil() as u64;
    let mut modulus = BigInt::one();
    let mut value = BigInt::zero();
    for &q in crt_primes() {
        let fq: Vec<u64> = f.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect();
        let qb = BigInt::from(q);
        let gq: Vec<u64> = g
            .iter()
            .map(|x| x.mod_floor(&qb).to_u64().unwrap())
            .collect();
        let r = resultant_mod(&fq, &gq, q);
        // combine: value ≡ current mod modulus, ≡ r mod q
        let cur = value.mod_floor(&qb).to_u64().unwrap();
        let diff = (r + q - cur) % q;
        let minv = powm(modulus.mod_floor(&qb).to_u64().unwrap(), q - 2, q);
        let k = mulm(diff, minv, q);
        value += &modulus * BigInt::from(k);
        modulus *= &qb;
        if modulus.bits() > bound_bits + 1 {
            break;
        }
    }
    // symmetric representative
    if &value * 2 > modulus {
        value - modulus
    } else {
        value
    }
}

/// Element of (Z/p^N)[ζ_{p^n}], p-power level only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicCyc {
    ring: Zp,
    n: u32,
    c: Vec<BigInt>,
}

impl PadicCyc {
    pub fn zero(ring: &Zp, n: u32) -> PadicCyc {
        let lv = Level {
            p: ring.p(),
            n,
            tame: 1,
        };
        PadicCyc {
            ring: ring.clone(),
            n,
            c: vec![BigInt::zero(); lv.phi()],
        }
    }

    pub fn from_padic(x: &PadicInt, n: u32) -> PadicCyc {
        let mut e = PadicCyc::zero(x.ring(), n);
        e.c[0] = x.residue().clone();
        e
    }

    pub fn one(ring: &Zp, n: u32) -> PadicCyc {
        PadicCyc::from_padic(&ring.one(), n)
    }

    fn level(&self) -> Level {
        Level {
            p: self.ring.p(),
            n: self.n,
            tame: 1,
        }
    }

    pub fn zeta_pow(ring: &Zp, n: u32, e: i64) -> PadicCyc {
        let lv = Level {
            p: ring.p(),
            n,
            tame: 1,
        };
        let m = lv.order() as i64;
        let mut raw = vec![BigInt::zero(); m as usize];
        raw[e.rem_euclid(m) as usize] = BigInt::one();
        let c = reduce_big(&lv, raw)
            .into_iter()
            .map(|x| ring.reduce(&x))
            .collect();
        PadicCyc {
            ring: ring.clone(),
            n,
            c,
        }
    }

    pub fn ring(&self) -> &Zp {
        &self.ring
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Lift to a higher cyclotomic level by ζ_{p^n} = ζ_{p^n'}^{p^{n'−n}}.
    pub fn embed(&self, n: u32) -> PadicCyc {
        if n == self.n {
            return self.clone();
        }
        assert!(n > self.n);
        let stride = self.ring.p().pow(n - self.n) as usize;
        let lv = Level {
            p: self.ring.p(),
            n,
            tame: 1,
        };
        let mut raw = vec![BigInt::zero(); (self.c.len().max(1) - 1) * stride + 1];
        for (i, c) in self.c.iter().enumerate() {
            raw[i * stride] = c.clone();
        }
        let c = reduce_big(&lv, raw)
            .into_iter()
            .map(|x| self.ring.reduce(&x))
            .collect();
        PadicCyc {
            ring: self.ring.clone(),
            n,
            c,
        }
    }

    fn aligned(&self, o: &PadicCyc) -> (PadicCyc, PadicCyc, Zp) {
        assert_eq!(self.ring.p(), o.ring.p(), "prime mismatch");
        let ring = if self.ring.prec() <= o.ring.prec() {
            self.ring.clone()
        } else {
            o.ring.clone()
        };
        let n = self.n.max(o.n);
        (self.embed(n), o.embed(n), ring)
    }

    pub fn add(&self, o: &PadicCyc) -> PadicCyc {
        let (a, b, ring) = self.aligned(o);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| ring.reduce(&(x + y))).collect();
        PadicCyc { ring, n: a.n, c }
    }

    pub fn sub(&self, o: &PadicCyc) -> PadicCyc {
        let (a, b, ring) = self.aligned(o);
        let c = a.c.iter().zip(&b.c).map(|(x, y)| ring.reduce(&(x - y))).collect();
        PadicCyc { ring, n: a.n, c }
    }

    pub fn scale(&self, k: &PadicInt) -> PadicCyc {
        let ring = if self.ring.prec() <= k.prec() {
            self.ring.clone()
        } else {
            k.ring().clone()
        };
        let c = self
            .c
            .iter()
            .map(|x| ring.reduce(&(x * k.residue())))
            .collect();
        PadicCyc {
            ring,
            n: self.n,
            c,
        }
    }

    pub fn mul(&self, o: &PadicCyc) -> PadicCyc {
        let (a, b, ring) = self.aligned(o);
        let mut raw = vec![BigInt::zero(); a.c.len() + b.c.len()];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        let c = reduce_big(&a.level(), raw)
            .into_iter()
            .map(|x| ring.reduce(&x))
            .collect();
        PadicCyc { ring, n: a.n, c }
    }

    pub fn pow(&self, mut e: u64) -> PadicCyc {
        let mut base = self.clone();
        let mut acc = PadicCyc::one(&self.ring, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reduce coefficients to a lower precision.
    pub fn reduce_to(&self, prec: u32) -> PadicCyc {
        let ring = self.ring.at_prec(prec.min(self.ring.prec()));
        let c = self.c.iter().map(|x| ring.reduce(x)).collect();
        PadicCyc { ring, n: self.n, c }
    }

    /// Valuation normalized by v(p) = 1, read off from the expansion in powers of ζ − 1.
    /// Returns None when the element vanishes at this precision.
    pub fn valuation(&self) -> Option<BigRational> {
        let d = self.c.len();
        // rewrite Σ c_i ζ^i = Σ d_j (ζ−1)^j via ζ = 1 + π, exact binomial expansion
        let mut dcoef = vec![BigInt::zero(); d];
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut binom = BigInt::one();
            for j in 0..=i {
                dcoef[j] += c * &binom;
                binom = binom * BigInt::from((i - j) as u64) / BigInt::from((j + 1) as u64);
            }
        }
        let p = self.ring.p();
        let prec = self.ring.prec();
        let mut best: Option<BigRational> = None;
        for (j, x) in dcoef.iter().enumerate() {
            let x = self.ring.reduce(x);
            if x.is_zero() {
                continue;
            }
            let v = val_big(&x, p).min(prec);
            let cand = BigRational::new(BigInt::from(v as u64 * d as u64 + j as u64), BigInt::from(d as u64));
            best = Some(match best {
                Some(b) if b <= cand => b,
                _ => cand,
            });
        }
        best
    }
}

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
