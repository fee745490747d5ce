//! Truncated power series over Z_p in T (and in W, T), Weierstrass preparation,
//! group-like elements, the critical character and twists.
//!
//! A truncated series with M terms is handled as a polynomial of degree < M.
//! Operations that preserve degree (twists) are then exact; products are
//! truncated at T^M.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{big_pow, floor_log, val_big};
use crate::cyclotomic::PadicCyc;
use crate::error::{Error, Result};
use crate::padic::{PadicInt, Zp};

/// Σ c_i T^i, i < M, coefficients mod p^N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries1 {
    ring: Zp,
    c: Vec<BigInt>,
}

impl PowerSeries1 {
    pub fn zero(ring: &Zp, m: usize) -> PowerSeries1 {
        PowerSeries1 {
            ring: ring.clone(),
            c: vec![BigInt::zero(); m],
        }
    }

    pub fn constant(c: &PadicInt, m: usize) -> PowerSeries1 {
        let mut s = PowerSeries1::zero(c.ring(), m);
        s.c[0] = c.residue().clone();
        s
    }

    pub fn one(ring: &Zp, m: usize) -> PowerSeries1 {
        PowerSeries1::constant(&ring.one(), m)
    }

    /// The variable T.
    pub fn var(ring: &Zp, m: usize) -> PowerSeries1 {
        let mut s = PowerSeries1::zero(ring, m);
        if m > 1 {
            s.c[1] = BigInt::one();
        }
        s
    }

    /// From integer coefficients; missing terms are zero, extra terms dropped.
    pub fn from_coeffs<I, T>(ring: &Zp, m: usize, coeffs: I) -> PowerSeries1
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = PowerSeries1::zero(ring, m);
        for (i, x) in coeffs.into_iter().enumerate().take(m) {
            s.c[i] = ring.reduce(&x.into());
        }
        s
    }

    pub fn ring(&self) -> &Zp {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn prec(&self) -> u32 {
        self.ring.prec()
    }

    /// Number of terms M.
    pub fn terms(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        self.ring.elem(self.c[i].clone())
    }

    pub fn residues(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn reduce_to(&self, prec: u32) -> PowerSeries1 {
        let ring = self.ring.at_prec(prec.min(self.prec()));
        PowerSeries1 {
            c: self.c.iter().map(|x| ring.reduce(x)).collect(),
            ring,
        }
    }

    pub fn truncate(&self, m: usize) -> PowerSeries1 {
        let mut c = self.c.clone();
        c.resize(m, BigInt::zero());
        PowerSeries1 {
            ring: self.ring.clone(),
            c,
        }
    }

    fn common(&self, o: &PowerSeries1) -> (Zp, usize) {
        assert_eq!(self.p(), o.p(), "series over different primes");
        let ring = if self.prec() <= o.prec() {
            self.ring.clone()
        } else {
            o.ring.clone()
        };
        (ring, self.terms().min(o.terms()))
    }

    pub fn add(&self, o: &PowerSeries1) -> PowerSeries1 {
        let (ring, m) = self.common(o);
        let c = (0..m).map(|i| ring.reduce(&(&self.c[i] + &o.c[i]))).collect();
        PowerSeries1 { ring, c }
    }

    pub fn sub(&self, o: &PowerSeries1) -> PowerSeries1 {
        let (ring, m) = self.common(o);
        let c = (0..m).map(|i| ring.reduce(&(&self.c[i] - &o.c[i]))).collect();
        PowerSeries1 { ring, c }
    }

    pub fn neg(&self) -> PowerSeries1 {
        PowerSeries1 {
            c: self.c.iter().map(|x| self.ring.reduce(&-x)).collect(),
            ring: self.ring.clone(),
        }
    }

    pub fn scale(&self, k: &PadicInt) -> PowerSeries1 {
        let ring = if self.prec() <= k.prec() {
            self.ring.clone()
        } else {
            k.ring().clone()
        };
        PowerSeries1 {
            c: self.c.iter().map(|x| ring.reduce(&(x * k.residue()))).collect(),
            ring,
        }
    }

    /// Product truncated at T^M.
    pub fn mul(&self, o: &PowerSeries1) -> PowerSeries1 {
        let (ring, m) = self.common(o);
        let c = (0..m)
            .map(|k| {
                let mut acc = BigInt::zero();
                for i in 0..=k {
                    if !self.c[i].is_zero() && !o.c[k - i].is_zero() {
                        acc += &self.c[i] * &o.c[k - i];
                    }
                }
                ring.reduce(&acc)
            })
            .collect();
        PowerSeries1 { ring, c }
    }

    pub fn pow(&self, e: u32) -> PowerSeries1 {
        let mut acc = PowerSeries1::one(&self.ring, self.terms());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; needs a unit constant term.
    pub fn inverse(&self) -> Result<PowerSeries1> {
        let c0 = self.coeff(0).inv()?;
        let m = self.terms();
        let mut out = vec![BigInt::zero(); m];
        out[0] = c0.residue().clone();
        for k in 1..m {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                acc += &self.c[i] * &out[k - i];
            }
            out[k] = self.ring.reduce(&(-(acc * c0.residue())));
        }
        Ok(PowerSeries1 {
            ring: self.ring.clone(),
            c: out,
        })
    }

    /// Substitute T ↦ a + b·T as a polynomial of degree < M; exact, degree preserving.
    pub fn substitute_affine(&self, a: &PadicInt, b: &PadicInt) -> PowerSeries1 {
        let m = self.terms();
        let ring = self.ring.clone();
        let mut out = vec![BigInt::zero(); m];
        // Horner: ((c_{M-1})·L + c_{M-2})·L + ... with L = a + bT
        for i in (0..m).rev() {
            let mut next = vec![BigInt::zero(); m];
            for (j, x) in out.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                next[j] += x * a.residue();
                if j + 1 < m {
                    next[j + 1] += x * b.residue();
                }
            }
            next[0] += &self.c[i];
            out = next.into_iter().map(|x| ring.reduce(&x)).collect();
        }
        PowerSeries1 { ring, c: out }
    }

    /// Value at T = z for z in (Z/p^N)[ζ]; with z = ζ − 1 the tail beyond T^M
    /// has valuation ≥ M/φ(ord ζ).
    pub fn eval_cyc(&self, z: &PadicCyc) -> PadicCyc {
        let mut acc = PadicCyc::zero(z.ring(), z.n());
        for i in (0..self.terms()).rev() {
            acc = acc.mul(z).add(&PadicCyc::from_padic(&self.coeff(i), z.n()));
        }
        acc.reduce_to(self.prec().min(z.ring().prec()))
    }

    pub fn eval(&self, z: &PadicInt) -> PadicInt {
        let mut acc = z.ring().zero();
        for i in (0..self.terms()).rev() {
            acc = &(&acc * z) + &self.coeff(i);
        }
        acc.reduce_to(self.prec())
    }

    /// Coefficients as decimal strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_string()).collect()
    }

    /// Coefficients as base-p digit strings, most significant digit first.
    pub fn to_digit_strings(&self) -> Vec<String> {
        self.c.iter().map(|x| x.to_str_radix(self.p() as u32)).collect()
    }
}

/// Twist by a character of Γ: T ↦ η·(1+T) − 1. η must be a 1-unit.
pub fn twist(f: &PowerSeries1, eta: &PadicInt) -> Result<PowerSeries1> {
    check_one_unit(eta)?;
    Ok(f.substitute_affine(&(eta - &eta.ring().one()), eta))
}

fn check_one_unit(eta: &PadicInt) -> Result<()> {
    if !eta.is_unit() {
        return Err(Error::DivisionByNonUnit);
    }
    if (eta - &eta.ring().one()).valuation().lower() == 0 {
        return Err(Error::NotOneUnit(eta.to_string()));
    }
    Ok(())
}

/// (1+T)^x = Σ C(x, i) T^i. Coefficients are exact for the integer lift of x and
/// determined by x mod p^N only modulo p^{N − ⌊log_p(M−1)⌋}, which is the precision returned.
pub fn grouplike_power(x: &PadicInt, m: usize) -> PowerSeries1 {
    let p = x.p();
    let loss = if m > 1 { floor_log(m as u64 - 1, p) } else { 0 };
    let ring = x.ring().at_prec(x.prec().saturating_sub(loss).max(1));
    let xx = x.residue().clone();
    let mut c = Vec::with_capacity(m);
    let mut binom = BigInt::one();
    for i in 0..m {
        if i > 0 {
            binom = binom * (&xx - BigInt::from(i as u64 - 1)) / BigInt::from(i as u64);
        }
        c.push(ring.reduce(&binom));
    }
    PowerSeries1 { ring, c }
}

/// Monic polynomial T^λ + g_{λ−1}T^{λ−1} + … + g_0 with p | g_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedPoly {
    ring: Zp,
    /// g_0 … g_{λ−1}.
    lower: Vec<BigInt>,
}

impl DistinguishedPoly {
    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    /// Precision at which the coefficients are determined.
    pub fn prec(&self) -> u32 {
        self.ring.prec()
    }

    pub fn coeff(&self, i: usize) -> PadicInt {
        if i == self.lower.len() {
            self.ring.one()
        } else {
            self.ring.elem(self.lower[i].clone())
        }
    }

    /// All coefficients, leading 1 included, as decimal strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.lower
            .iter()
            .map(|x| x.to_string())
            .chain(std::iter::once("1".to_string()))
            .collect()
    }

    pub fn reduce_to(&self, prec: u32) -> DistinguishedPoly {
        let ring = self.ring.at_prec(prec.min(self.prec()));
        DistinguishedPoly {
            lower: self.lower.iter().map(|x| ring.reduce(x)).collect(),
            ring,
        }
    }

    /// As a series with M terms over the given ring.
    pub fn to_series(&self, ring: &Zp, m: usize) -> PowerSeries1 {
        let mut c: Vec<BigInt> = self.lower.clone();
        c.push(BigInt::one());
        PowerSeries1::from_coeffs(ring, m, c)
    }
}

#[derive(Clone, Debug)]
pub struct Weierstrass {
    pub mu: u32,
    pub lambda: usize,
    /// Unit with f = p^μ·u·g mod (p^N, T^M).
    pub unit: PowerSeries1,
    /// Distinguished factor as computed, at precision N − μ.
    pub g_full: DistinguishedPoly,
    /// Distinguished factor at the precision where it is independent of the truncation.
    pub g: DistinguishedPoly,
}

impl Weierstrass {
    /// p^μ·u·g truncated at T^M.
    pub fn recombine(&self, ring: &Zp) -> PowerSeries1 {
        let m = self.unit.terms();
        let pm = ring.elem(big_pow(ring.p(), self.mu));
        let u = PowerSeries1::from_coeffs(ring, m, self.unit.c.clone());
        self.g_full.to_series(ring, m).mul(&u).scale(&pm)
    }
}

/// Weierstrass preparation f = p^μ·u·g of the polynomial Σ_{i<M} c_i T^i.
///
/// The factorization is exact modulo p^N; g is reported at precision
/// min(N − μ, ⌊M/λ⌋), beyond which it depends on the discarded tail.
pub fn wprep(f: &PowerSeries1) -> Result<Weierstrass> {
    let p = f.p();
    let n = f.prec();
    let m = f.terms();
    let mu = f
        .c
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| val_big(x, p))
        .min()
        .ok_or(Error::PrecisionExhausted)?;
    let np = n - mu;
    let ring = f.ring.at_prec(np);
    let pmu = big_pow(p, mu);
    let fp: Vec<BigInt> = f.c.iter().map(|x| ring.reduce(&(x / &pmu))).collect();
    let pb = BigInt::from(p);
    let lambda = fp
        .iter()
        .position(|x| !(x % &pb).is_zero())
        .expect("some coefficient is a unit after removing p^mu");
    // g = T^λ, h = Σ_{i≥λ} f'_i T^{i−λ}; lift f' = g·h one digit at a time
    let mut g: Vec<BigInt> = vec![BigInt::zero(); lambda];
    let mut h: Vec<BigInt> = fp[lambda..].to_vec();
    let hbar: Vec<BigInt> = h.iter().map(|x| x.mod_floor(&pb)).collect();
    let hbar_inv = inverse_mod_p(&hbar, lambda, &pb);
    let modulus = ring.modulus().clone();
    let mut pk = pb.clone();
    for _ in 1..np {
        // e = f' − (T^λ + g)·h, degree < M
        let mut e: Vec<BigInt> = fp.clone();
        for (j, hj) in h.iter().enumerate() {
            e[j + lambda] -= hj;
            for (i, gi) in g.iter().enumerate() {
                if i + j < m {
                    e[i + j] -= gi * hj;
                }
            }
        }
        let e: Vec<BigInt> = e.iter().map(|x| x.mod_floor(&modulus)).collect();
        if e.iter().all(Zero::is_zero) {
            break;
        }
        let ep: Vec<BigInt> = e.iter().map(|x| (x / &pk).mod_floor(&pb)).collect();
        // δg = e'·h̄^{-1} mod T^λ; δh = (e' − h̄·δg)/T^λ
        let mut dg = vec![BigInt::zero(); lambda];
        for k in 0..lambda {
            let mut acc = BigInt::zero();
            for i in 0..=k {
                acc += &ep[i] * &hbar_inv[k - i];
            }
            dg[k] = acc.mod_floor(&pb);
        }
        let mut rest = ep.clone();
        for (i, dgi) in dg.iter().enumerate() {
            for (j, hj) in hbar.iter().enumerate() {
                if i + j < m {
                    rest[i + j] -= dgi * hj;
                }
            }
        }
        for (i, x) in g.iter_mut().enumerate() {
            *x = (&*x + &dg[i] * &pk).mod_floor(&modulus);
        }
        for (j, x) in h.iter_mut().enumerate() {
            let d = rest[j + lambda].mod_floor(&pb);
            *x = (&*x + d * &pk).mod_floor(&modulus);
        }
        pk *= &pb;
    }
    let mut unit = PowerSeries1::zero(&ring, m);
    for (j, x) in h.iter().enumerate() {
        unit.c[j] = ring.reduce(x);
    }
    let g_full = DistinguishedPoly {
        ring: ring.clone(),
        lower: g,
    };
    let det = if lambda == 0 {
        np
    } else {
        np.min((m / lambda) as u32)
    };
    let g_red = g_full.reduce_to(det);
    Ok(Weierstrass {
        mu,
        lambda,
        unit,
        g_full,
        g: g_red,
    })
}

/// Inverse of a mod-p series with unit constant term, to `terms` terms.
fn inverse_mod_p(h: &[BigInt], terms: usize, p: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); terms];
    if terms == 0 {
        return out;
    }
    let c0 = h[0].extended_gcd(p).x.mod_floor(p);
    out[0] = c0.clone();
    for k in 1..terms {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(h.len() - 1) {
            acc += &h[i] * &out[k - i];
        }
        out[k] = (-(acc * &c0)).mod_floor(p);
    }
    out
}

/// (μ, λ) of f.
pub fn mu_lambda(f: &PowerSeries1) -> Result<(u32, usize)> {
    let w = wprep(f)?;
    Ok((w.mu, w.lambda))
}

/// Equal ideals: same μ and same distinguished factor at the common determined precision.
pub fn same_ideal(f: &PowerSeries1, g: &PowerSeries1) -> Result<bool> {
    let a = wprep(f)?;
    let b = wprep(g)?;
    if a.mu != b.mu || a.lambda != b.lambda {
        return Ok(false);
    }
    let prec = a.g.prec().min(b.g.prec());
    Ok(a.g.reduce_to(prec).lower == b.g.reduce_to(prec).lower)
}

/// Θ on Γ_K = Γ₊ × Γ₋, valued in O[[W]].
#[derive(Clone, Debug)]
pub struct CriticalCharacter {
    pub k: u32,
    pub p: u64,
    /// (k−2)/2 mod (p−1): the exponent of the tame part ω.
    pub tame_exponent: u64,
    /// Θ(γ₊) = ω^{(k−2)/2}(1+p)·(1+W)^{1/2}; ω(1+p) = 1.
    pub plus: PowerSeries1,
    /// Θ(γ₋); 1 unless overridden.
    pub minus: PadicInt,
}

/// The critical character with Θ(γ₋) = 1.
pub fn critical_character(k: u32, ring: &Zp, mw: usize) -> Result<CriticalCharacter> {
    critical_character_with(k, ring, mw, &ring.one())
}

/// The critical character with a chosen value on γ₋ (a 1-unit).
pub fn critical_character_with(
    k: u32,
    ring: &Zp,
    mw: usize,
    minus: &PadicInt,
) -> Result<CriticalCharacter> {
    if k % 2 == 1 || k < 2 {
        return Err(Error::OddWeight(k));
    }
    check_one_unit(minus)?;
    let p = ring.p();
    let half = ring.elem(2).inv()?;
    Ok(CriticalCharacter {
        k,
        p,
        tame_exponent: ((k as u64 - 2) / 2) % (p - 1),
        plus: grouplike_power(&half, mw),
        minus: minus.clone(),
    })
}

/// Σ c_{ij} W^i T^j, i < M_W, j < M_T.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries2 {
    ring: Zp,
    mw: usize,
    mt: usize,
    c: Vec<Vec<BigInt>>,
}

impl PowerSeries2 {
    pub fn zero(ring: &Zp, mw: usize, mt: usize) -> PowerSeries2 {
        PowerSeries2 {
            ring: ring.clone(),
            mw,
            mt,
            c: vec![vec![BigInt::zero(); mt]; mw],
        }
    }

    pub fn from_fn(ring: &Zp, mw: usize, mt: usize, f: impl Fn(usize, usize) -> BigInt) -> PowerSeries2 {
        let c = (0..mw)
            .map(|i| (0..mt).map(|j| ring.reduce(&f(i, j))).collect())
            .collect();
        PowerSeries2 {
            ring: ring.clone(),
            mw,
            mt,
            c,
        }
    }

    /// F(W, T) = Σ_i W^i·rows[i](T).
    pub fn from_rows(rows: &[PowerSeries1]) -> PowerSeries2 {
        let ring = rows[0].ring().clone();
        let mt = rows[0].terms();
        PowerSeries2 {
            mw: rows.len(),
            mt,
            c: rows.iter().map(|r| r.truncate(mt).c).collect(),
            ring,
        }
    }

    /// A series in W alone, constant in T.
    pub fn from_w_series(f: &PowerSeries1, mt: usize) -> PowerSeries2 {
        PowerSeries2::from_fn(f.ring(), f.terms(), mt, |i, j| {
            if j == 0 {
                f.c[i].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// A series in T alone, constant in W.
    pub fn from_t_series(f: &PowerSeries1, mw: usize) -> PowerSeries2 {
        PowerSeries2::from_fn(f.ring(), mw, f.terms(), |i, j| {
            if i == 0 {
                f.c[j].clone()
            } else {
                BigInt::zero()
            }
        })
    }

    pub fn ring(&self) -> &Zp {
        &self.ring
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.mw, self.mt)
    }

    pub fn coeff(&self, i: usize, j: usize) -> PadicInt {
        self.ring.elem(self.c[i][j].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// The T-series multiplying W^i.
    pub fn row(&self, i: usize) -> PowerSeries1 {
        PowerSeries1 {
            ring: self.ring.clone(),
            c: self.c[i].clone(),
        }
    }

    /// Ring of the lower precision and the smaller truncation.
    fn common(&self, o: &PowerSeries2) -> (Zp, usize, usize) {
        assert_eq!(self.ring.p(), o.ring.p(), "series over different primes");
        let ring = if self.ring.prec() <= o.ring.prec() {
            self.ring.clone()
        } else {
            o.ring.clone()
        };
        (ring, self.mw.min(o.mw), self.mt.min(o.mt))
    }

    pub fn add(&self, o: &PowerSeries2) -> PowerSeries2 {
        let (ring, mw, mt) = self.common(o);
        PowerSeries2::from_fn(&ring, mw, mt, |i, j| &self.c[i][j] + &o.c[i][j])
    }

    pub fn sub(&self, o: &PowerSeries2) -> PowerSeries2 {
        let (ring, mw, mt) = self.common(o);
        PowerSeries2::from_fn(&ring, mw, mt, |i, j| &self.c[i][j] - &o.c[i][j])
    }

    pub fn scale(&self, k: &PadicInt) -> PowerSeries2 {
        let ring = if self.ring.prec() <= k.prec() { &self.ring } else { k.ring() };
        PowerSeries2::from_fn(ring, self.mw, self.mt, |i, j| &self.c[i][j] * k.residue())
    }

    /// Product truncated at W^{M_W}, T^{M_T}.
    pub fn mul(&self, o: &PowerSeries2) -> PowerSeries2 {
        let (ring, mw, mt) = self.common(o);
        let c: Vec<Vec<BigInt>> = (0..mw)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![BigInt::zero(); mt];
                for a in 0..=i {
                    for (j1, x) in self.c[a].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j2, y) in o.c[i - a].iter().enumerate().take(mt - j1) {
                            if !y.is_zero() {
                                row[j1 + j2] += x * y;
                            }
                        }
                    }
                }
                row.into_iter().map(|x| ring.reduce(&x)).collect()
            })
            .collect();
        PowerSeries2 {
            ring,
            mw,
            mt,
            c,
        }
    }

    /// Substitute W ↦ w for w ∈ Z_p.
    pub fn eval_w(&self, w: &PadicInt) -> PowerSeries1 {
        let mut acc = PowerSeries1::zero(&self.ring, self.mt);
        for i in (0..self.mw).rev() {
            acc = acc.scale(w).add(&self.row(i));
        }
        acc
    }

    /// Substitute W ↦ w for w ∈ (Z/p^N)[ζ]; coefficients in T become cyclotomic.
    pub fn eval_w_cyc(&self, w: &PadicCyc) -> CycSeries {
        let c = (0..self.mt)
            .map(|j| {
                let mut acc = PadicCyc::zero(w.ring(), w.n());
                for i in (0..self.mw).rev() {
                    acc = acc.mul(w).add(&PadicCyc::from_padic(&self.coeff(i, j), w.n()));
                }
                acc
            })
            .collect();
        CycSeries { c }
    }

    /// T ↦ η(W)·(1+T) − 1 with η ∈ O[[W]] and η(0) a 1-unit.
    pub fn twist_t(&self, eta: &PowerSeries1) -> Result<PowerSeries2> {
        check_one_unit(&eta.coeff(0))?;
        let mw = self.mw;
        let eta2 = PowerSeries2::from_w_series(&eta.truncate(mw), self.mt);
        let one = PowerSeries2::from_w_series(&PowerSeries1::one(&self.ring, mw), self.mt);
        let t = PowerSeries2::from_t_series(&PowerSeries1::var(&self.ring, self.mt), mw);
        // L = η(W)(1+T) − 1; degree in T is 1, so Horner stays within degree < M_T
        let lin = eta2.mul(&one.add(&t)).sub(&one);
        let mut acc = PowerSeries2::zero(&self.ring, mw, self.mt);
        for j in (0..self.mt).rev() {
            let col = PowerSeries2::from_fn(&self.ring, mw, self.mt, |i, jj| {
                if jj == 0 {
                    self.c[i][j].clone()
                } else {
                    BigInt::zero()
                }
            });
            acc = acc.mul(&lin).add(&col);
        }
        Ok(acc)
    }
}

/// Series in T with coefficients in (Z/p^N)[ζ_{p^n}].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycSeries {
    pub c: Vec<PadicCyc>,
}

impl CycSeries {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(PadicCyc::is_zero)
    }

    pub fn from_series(f: &PowerSeries1, n: u32) -> CycSeries {
        CycSeries {
            c: (0..f.terms())
                .map(|i| PadicCyc::from_padic(&f.coeff(i), n))
                .collect(),
        }
    }
}

/// The arithmetic point W ↦ ζ·(1+p)^{k−2} − 1 as an element of (Z/p^N)[ζ_{p^n}].
pub fn arithmetic_point(ring: &Zp, k: u32, zeta_n: u32, zeta_exp: i64) -> Result<PadicCyc> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("weight {k} < 2")));
    }
    let u = ring.elem(1 + ring.p()).pow(k as u64 - 2);
    let z = PadicCyc::zeta_pow(ring, zeta_n, zeta_exp);
    Ok(z.scale(&u).sub(&PadicCyc::one(ring, zeta_n)))
}

/// φ_{k,ζ}(F): substitute W ↦ ζ(1+p)^{k−2} − 1.
pub fn specialize_arith(f: &PowerSeries2, k: u32, zeta_n: u32, zeta_exp: i64) -> Result<CycSeries> {
    let w = arithmetic_point(f.ring(), k, zeta_n, zeta_exp)?;
    Ok(f.eval_w_cyc(&w))
}

/// φ_k with ζ = 1, staying in Z_p.
pub fn specialize_weight(f: &PowerSeries2, k: u32) -> Result<PowerSeries1> {
    if k < 2 {
        return Err(Error::OutOfRange(format!("weight {k} < 2")));
    }
    let ring = f.ring();
    let w = &ring.elem(1 + ring.p()).pow(k as u64 - 2) - &ring.one();
    Ok(f.eval_w(&w))
}

/// Series over 𝕀[[Γ_K]] = O[[W, S, T]] with S = γ₊ − 1 and T = γ₋ − 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaSeries {
    /// slices[s] multiplies S^s.
    pub slices: Vec<PowerSeries2>,
}

impl GammaSeries {
    /// γ₊ ↦ 1, γ₋ ↦ γ₋: keep the S^0 slice.
    pub fn project_anticyclotomic(&self) -> PowerSeries2 {
        self.slices[0].clone()
    }

    /// Specialize the weight variable in every S-slice.
    pub fn specialize(&self, k: u32, zeta_n: u32, zeta_exp: i64) -> Result<Vec<CycSeries>> {
        self.slices
            .iter()
            .map(|f| specialize_arith(f, k, zeta_n, zeta_exp))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Separation {
    pub zero: bool,
    /// First specialization index with a nonzero value.
    pub witness: Option<usize>,
    pub points: usize,
    pub working_precision: u32,
}

/// Decide F = 0 from the specializations at k_j = 2 + (p−1)j, j < M_W.
///
/// The points w_j = (1+p)^{(p−1)j} − 1 satisfy v(w_b − w_a) = 1 + v_p(b − a), so the
/// Vandermonde determinant has valuation δ = Σ_{a<b} (1 + v_p(b − a)). Evaluating the
/// canonical lift of F at precision N + δ detects every nonzero F mod p^N.
pub fn specialization_separates(f: &PowerSeries2) -> Result<Separation> {
    let (mw, _) = f.dims();
    let p = f.ring().p();
    if mw == 0 || mw > 256 {
        return Err(Error::InsufficientPoints);
    }
    let mut delta: u32 = 0;
    for a in 0..mw {
        for b in a + 1..mw {
            delta += 1 + crate::arith::val_u64((b - a) as u64, p);
        }
    }
    let wide = f.ring().at_prec(f.ring().prec() + delta);
    let lifted = PowerSeries2::from_fn(&wide, mw, f.mt, |i, j| f.c[i][j].clone());
    let gen = wide.elem(1 + p).pow(p - 1);
    let mut witness = None;
    for jdx in 0..mw {
        let w = &gen.pow(jdx as u64) - &wide.one();
        if !lifted.eval_w(&w).is_zero() {
            witness = Some(jdx);
            break;
        }
    }
    Ok(Separation {
        zero: witness.is_none(),
        witness,
        points: mw,
        working_precision: wide.prec(),
    })
}
