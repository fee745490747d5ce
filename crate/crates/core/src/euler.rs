//! Hecke eigenform data, local L-factors of f twisted by χ, the Rankin–Selberg
//! factorization, and Euler correction elements in Λ and 𝕀[[Γ⁻]].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{big_pow, is_prime};
use crate::cyclotomic::{CycElem, Level, PadicCyc};
use crate::error::{Error, Result};
use crate::gauss_theta::theta_coefficient;
use crate::hecke::AnticycloChar;
use crate::iwasawa::{grouplike_power, CriticalCharacter, PowerSeries1, PowerSeries2};
use crate::padic::{hensel_unit_root, one_unit_log, one_unit_part, teichmueller, PadicInt, Zp};
use crate::quad::{Embedding, QuadIdeal, Splitting};

const LEVEL11: &str = include_str!("../data/level11_weight2.json");
const LEVEL14: &str = include_str!("../data/level14_weight2.json");
const LEVEL5_WT4: &str = include_str!("../data/level5_weight4.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FormFile {
    label: String,
    k: u32,
    #[serde(rename = "N")]
    level: u64,
    p: u64,
    stabilized: bool,
    eigenvalues: Vec<(u64, i64)>,
}

/// Weight, level, ordinary prime and a table of a_ℓ for primes ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeFormData {
    pub label: String,
    pub k: u32,
    pub level: u64,
    pub p: u64,
    /// True when the form is the p-stabilization of a level-N newform (p ∤ N).
    pub stabilized: bool,
    a: BTreeMap<u64, i64>,
}

impl HeckeFormData {
    pub fn from_json(s: &str) -> Result<HeckeFormData> {
        let f: FormFile = serde_json::from_str(s).map_err(|e| Error::Invalid(e.to_string()))?;
        if f.k < 2 || f.k % 2 == 1 {
            return Err(Error::OddWeight(f.k));
        }
        Ok(HeckeFormData {
            label: f.label,
            k: f.k,
            level: f.level,
            p: f.p,
            stabilized: f.stabilized,
            a: f.eigenvalues.into_iter().collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let f = FormFile {
            label: self.label.clone(),
            k: self.k,
            level: self.level,
            p: self.p,
            stabilized: self.stabilized,
            eigenvalues: self.a.iter().map(|(&l, &v)| (l, v)).collect(),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    /// Shipped tables: "11a" (k=2), "14a" (k=2), "5.4.a.a" (k=4).
    pub fn builtin(label: &str) -> Result<HeckeFormData> {
        match label {
            "11a" => HeckeFormData::from_json(LEVEL11),
            "14a" => HeckeFormData::from_json(LEVEL14),
            "5.4.a.a" => HeckeFormData::from_json(LEVEL5_WT4),
            _ => Err(Error::Invalid(format!("unknown form label {label:?}"))),
        }
    }

    pub fn builtin_labels() -> [&'static str; 3] {
        ["11a", "14a", "5.4.a.a"]
    }

    pub fn a(&self, l: u64) -> Result<i64> {
        self.a.get(&l).copied().ok_or(Error::MissingEigenvalue(l))
    }

    pub fn max_prime(&self) -> u64 {
        self.a.keys().next_back().copied().unwrap_or(0)
    }

    /// Copy with one eigenvalue replaced.
    pub fn with_eigenvalue(&self, l: u64, v: i64) -> HeckeFormData {
        let mut out = self.clone();
        out.a.insert(l, v);
        out.label = format!("{}[a_{l}={v}]", self.label);
        out
    }

    /// ℓ^{k−1} for ℓ ∤ N, 0 for ℓ | N.
    pub fn det(&self, l: u64) -> BigInt {
        if self.level % l == 0 {
            BigInt::zero()
        } else {
            big_pow(l, self.k - 1)
        }
    }

    /// (s1, s2) with 1 − s1·Y + s2·Y² = (1 − α^f Y)(1 − β^f Y), the factor at a place of norm ℓ^f.
    pub fn char_poly_at(&self, l: u64, f: u32) -> Result<(BigInt, BigInt)> {
        let a = BigInt::from(self.a(l)?);
        let d = self.det(l);
        match f {
            1 => Ok((a, d)),
            2 => Ok((&a * &a - &d * 2, &d * &d)),
            _ => Err(Error::OutOfRange(format!("residue degree {f}"))),
        }
    }

    /// a_{ℓ^r} for r = 0..=r_max, from the Hecke recursion.
    pub fn a_prime_powers(&self, l: u64, r_max: usize) -> Result<Vec<BigInt>> {
        let a = BigInt::from(self.a(l)?);
        let d = self.det(l);
        let mut out = vec![BigInt::one(), a.clone()];
        while out.len() <= r_max {
            let n = out.len();
            let next = &a * &out[n - 1] - &d * &out[n - 2];
            out.push(next);
        }
        out.truncate(r_max + 1);
        Ok(out)
    }

    /// The unit root α_p of X² − a_p X + p^{k−1}.
    pub fn alpha(&self, ring: &Zp) -> Result<PadicInt> {
        let ap = ring.elem(self.a(self.p)?);
        if self.level % self.p == 0 {
            return if ap.is_unit() { Ok(ap) } else { Err(Error::NotOrdinary) };
        }
        hensel_unit_root(&ap, self.k)
    }

    /// β_p = p^{k−1}/α_p as (valuation, unit); None when p | N (β = 0).
    pub fn beta(&self, ring: &Zp) -> Result<Option<(u32, PadicInt)>> {
        if self.level % self.p == 0 {
            return Ok(None);
        }
        Ok(Some((self.k - 1, self.alpha(ring)?.inv()?)))
    }
}

/// Polynomial in X = q^{−s} with constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub q: u64,
    pub coeffs: Vec<CycElem>,
}

impl LocalFactor {
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// q^e·P(1/q) for e ≥ deg P.
    pub fn eval_scaled(&self, e: u32) -> CycElem {
        let lv = self.coeffs[0].level();
        let mut acc = CycElem::zero(lv);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = big_pow(self.q, e - i as u32);
            acc = acc.add(&c.scale(&s)).unwrap();
        }
        acc
    }
}

fn poly_mul(a: &[CycElem], b: &[CycElem], cap: usize) -> Vec<CycElem> {
    let lv = a[0].level();
    let mut out = vec![CycElem::zero(lv); cap];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j < cap && !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y).unwrap()).unwrap();
            }
        }
    }
    out
}

/// 1 − s1·c·X^f + s2·c²·X^{2f}.
fn place_factor(lv: Level, s1: &BigInt, s2: &BigInt, c: &CycElem, f: usize) -> Vec<CycElem> {
    let mut out = vec![CycElem::zero(lv); 2 * f + 1];
    out[0] = CycElem::one(lv);
    out[f] = c.scale(s1).neg();
    out[2 * f] = c.mul(c).unwrap().scale(s2);
    out
}

/// P_q(X) = Π_{v | q} (1 − α_{Nv}χ(v)X^{f_v})(1 − β_{Nv}χ(v)X^{f_v}); χ(v) = 0 at v | cond(χ).
pub fn local_factor_f_chi(f: &HeckeFormData, chi: &AnticycloChar, q: u64) -> Result<LocalFactor> {
    if !is_prime(q) {
        return Err(Error::Invalid(format!("{q} is not prime")));
    }
    let lv = chi.level();
    let field = chi.setup().field();
    let mut poly = vec![CycElem::one(lv)];
    for v in field.primes_above(q) {
        let fdeg = if v.norm() == q { 1 } else { 2 };
        let (s1, s2) = f.char_poly_at(q, fdeg as u32)?;
        let c = chi.value_on_ideal(&v);
        let pf = place_factor(lv, &s1, &s2, &c, fdeg);
        poly = poly_mul(&poly, &pf, 5);
    }
    poly.resize(5, CycElem::zero(lv));
    Ok(LocalFactor { q, coeffs: poly })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankinReport {
    pub q: u64,
    pub pass: bool,
    /// Local factor from χ(v) equals the one assembled from the theta Euler data.
    pub factor_from_theta: bool,
    /// α_g·β_g read off the theta coefficients equals ψ(q)·q^m.
    pub nebentypus: bool,
    /// P(X)·Σ a_{q^r} b_{q^r} X^r = 1 − ψ(q)q^{k+m−1}X² through X^R.
    pub series: bool,
    pub terms: usize,
}

/// Number of terms compared in the Rankin–Selberg series; both sides are rational
/// with denominator of degree ≤ 4, so agreement through X^8 is an identity.
pub const RANKIN_TERMS: usize = 8;

/// Rankin–Selberg at q: Σ_r a_{q^r}(f) b_{q^r}(g_χ) X^r = (1 − ψ(q)q^{k+m−1}X²)/P_q(X).
/// The Dirichlet series side uses `series_form`, the Euler factor side uses `f`;
/// they coincide except in mutation tests.
pub fn rankin_selberg_check_with(
    f: &HeckeFormData,
    series_form: &HeckeFormData,
    chi: &AnticycloChar,
    q: u64,
) -> Result<RankinReport> {
    let setup = chi.setup();
    if !is_prime(q)
        || q == setup.p
        || f.level % q == 0
        || (setup.d.unsigned_abs()) % q == 0
    {
        return Err(Error::BadPrime(q));
    }
    let lv = chi.level();
    let r = RANKIN_TERMS;
    let b: Vec<CycElem> = {
        let mut out = Vec::with_capacity(r + 1);
        let mut qr: u64 = 1;
        for _ in 0..=r {
            out.push(theta_coefficient(chi, qr).to_cyc(lv));
            qr = qr.checked_mul(q).ok_or_else(|| Error::OutOfRange("q^8 overflows".into()))?;
        }
        out
    };
    let psi = crate::arith::kronecker(setup.d, q) as i64;
    let m = chi.m();
    let psi_qm = BigInt::from(psi) * big_pow(q, m.max(0) as u32);

    // theta Euler data: t2 = b_q, d2 = b_q² − b_{q²}
    let t2 = b[1].clone();
    let d2 = t2.mul(&t2)?.sub(&b[2])?;
    let nebentypus = d2.sub(&CycElem::from_int(lv, psi_qm.clone()))?.is_zero();

    let t1 = CycElem::from_int(lv, f.a(q)?);
    let d1 = CycElem::from_int(lv, f.det(q));
    let t1t2 = t1.mul(&t2)?;
    let d1d2 = d1.mul(&d2)?;
    let theta_poly = vec![
        CycElem::one(lv),
        t1t2.neg(),
        t1.mul(&t1)?
            .mul(&d2)?
            .add(&t2.mul(&t2)?.mul(&d1)?)?
            .sub(&d1d2.scale(&BigInt::from(2)))?,
        t1t2.mul(&d1d2)?.neg(),
        d1d2.mul(&d1d2)?,
    ];
    let direct = local_factor_f_chi(f, chi, q)?;
    let factor_from_theta = theta_poly
        .iter()
        .zip(&direct.coeffs)
        .all(|(a, b)| a.sub(b).map(|d| d.is_zero()).unwrap_or(false));

    let a = series_form.a_prime_powers(q, r)?;
    let dser: Vec<CycElem> = (0..=r).map(|i| b[i].scale(&a[i])).collect();
    let lhs = poly_mul(&direct.coeffs, &dser, r + 1);
    let mut rhs = vec![CycElem::zero(lv); r + 1];
    rhs[0] = CycElem::one(lv);
    let kk = f.k as i32 + m - 1;
    rhs[2] = CycElem::from_int(lv, -(BigInt::from(psi) * big_pow(q, kk.max(0) as u32)));
    let series = lhs
        .iter()
        .zip(&rhs)
        .all(|(a, b)| a.sub(b).map(|d| d.is_zero()).unwrap_or(false));
    Ok(RankinReport {
        q,
        pass: factor_from_theta && nebentypus && series,
        factor_from_theta,
        nebentypus,
        series,
        terms: r + 1,
    })
}

pub fn rankin_selberg_check(f: &HeckeFormData, chi: &AnticycloChar, q: u64) -> Result<RankinReport> {
    rankin_selberg_check_with(f, f, chi, q)
}

/// 𝓔_v = 1 − (s1/Nv)·G + (s2/Nv²)·G² with G = (1+T)^{x_v}, for v ∤ p.
#[derive(Clone, Debug)]
pub struct EulerElement {
    pub place: QuadIdeal,
    pub nv: u64,
    pub s1: BigInt,
    pub s2: BigInt,
    pub x: PadicInt,
}

/// Euler correction element at a place v of K. For v ∤ p the exponent defaults to the
/// Frobenius exponent of v. For v | p an exponent must be supplied, and the factor
/// (1 − γ·α_p/p) has a coefficient of negative valuation, which is an error.
pub fn euler_element(
    f: &HeckeFormData,
    v: &QuadIdeal,
    x_v: Option<&PadicInt>,
    emb: &Embedding,
) -> Result<EulerElement> {
    let p = emb.ring().p();
    let nv = v.norm();
    let l = crate::arith::factorize(nv)[0].0;
    if l == p {
        if x_v.is_none() {
            return Err(Error::RamifiedInTower);
        }
        let alpha = f.alpha(emb.ring())?;
        // α_p/N(v) = α_p/p with α_p a unit
        return Err(Error::NegativeValuation(format!("alpha/N(v) = {alpha}/{p}")));
    }
    let fdeg = if nv == l { 1 } else { 2 };
    let (s1, s2) = f.char_poly_at(l, fdeg)?;
    let x = match x_v {
        Some(x) => x.clone(),
        None => emb.frobenius_exponent(v)?,
    };
    Ok(EulerElement {
        place: *v,
        nv,
        s1,
        s2,
        x,
    })
}

impl EulerElement {
    /// The element of Λ truncated at T^M.
    pub fn series(&self, m: usize) -> Result<PowerSeries1> {
        let g = grouplike_power(&self.x, m);
        let ring = g.ring().clone();
        let inv_nv = ring.elem(self.nv).inv()?;
        let c1 = &ring.elem(self.s1.clone()) * &inv_nv;
        let c2 = &(&ring.elem(self.s2.clone()) * &inv_nv) * &inv_nv;
        Ok(PowerSeries1::one(&ring, m)
            .sub(&g.scale(&c1))
            .add(&g.mul(&g).scale(&c2)))
    }

    /// Nv²·χ̂(𝓔_v) = Nv² − s1·Nv·z + s2·z² with z = χ̂(γ₋^{x_v}), exact.
    pub fn eval_scaled(&self, chi: &AnticycloChar) -> Result<CycElem> {
        let z = chi.avatar_value(&self.x)?;
        let lv = z.level();
        let nv = BigInt::from(self.nv);
        Ok(CycElem::from_int(lv, &nv * &nv)
            .sub(&z.scale(&(&self.s1 * &nv)))?
            .add(&z.mul(&z)?.scale(&self.s2))?)
    }

    /// Nv²·(1 − α/Nv)(1 − β/Nv): the value at the trivial character.
    pub fn eval_trivial_scaled(&self) -> BigInt {
        let nv = BigInt::from(self.nv);
        &nv * &nv - &self.s1 * &nv + &self.s2
    }

    /// The truncated series evaluated at T = ζ − 1.
    pub fn eval_series_cyc(&self, m: usize, zeta: &PadicCyc) -> Result<PadicCyc> {
        let t = zeta.sub(&PadicCyc::one(zeta.ring(), zeta.n()));
        Ok(self.series(m)?.eval_cyc(&t))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossPathReport {
    pub l: u64,
    pub places: usize,
    pub pass: bool,
}

/// χ̂(𝓔_ℓ)·L_ℓ(f,χ,1) = 1, with 𝓔_ℓ = Π_{v | ℓ} 𝓔_v, checked as
/// Π_v Nv²·χ̂(𝓔_v) = q^e·P_ℓ(1/ℓ) in Z[ζ].
pub fn cross_path_check(f: &HeckeFormData, chi: &AnticycloChar, l: u64) -> Result<CrossPathReport> {
    if l == chi.setup().p {
        return Err(Error::RamifiedInTower);
    }
    let emb = chi.setup().embedding(chi.n() + 2)?;
    let field = chi.setup().field();
    let lv = chi.level();
    let mut lhs = CycElem::one(lv);
    let mut e = 0u32;
    let places = field.primes_above(l);
    for v in &places {
        let el = euler_element(f, v, None, &emb)?;
        lhs = lhs.mul(&el.eval_scaled(chi)?)?;
        e += if v.norm() == l { 2 } else { 4 };
    }
    let rhs = local_factor_f_chi(f, chi, l)?.eval_scaled(e);
    Ok(CrossPathReport {
        l,
        places: places.len(),
        pass: lhs.sub(&rhs)?.is_zero(),
    })
}

/// Family data at a prime ℓ ∤ Np: 𝐚_ℓ ∈ O[[W]] and the tame weight class k0 (mod p−1).
#[derive(Clone, Debug)]
pub struct FamilyEigen {
    pub l: u64,
    pub a: PowerSeries1,
    pub k0: u32,
    /// ℓ | N: the determinant vanishes.
    pub bad: bool,
}

/// s with ⟨y⟩ = (1+p)^s, so (1+W)^s is ⟨y⟩^{k−2} at W = (1+p)^{k−2} − 1.
fn weight_exponent(y: u64, ring: &Zp) -> Result<PadicInt> {
    let u = one_unit_part(&ring.elem(y))?;
    one_unit_log(&u)?
        .div_p_power(1)?
        .div(&one_unit_log(&ring.elem(1 + ring.p()))?.div_p_power(1)?)
}

/// The two-variable Euler element 𝔼_v = 1 − (𝐚_v/Nv)·Θ^{−1}(frob_v)·G + (d_v/Nv²)·Θ^{−2}(frob_v)·G²,
/// G = (1+T)^{x_v}, d_ℓ = ℓ·ω(ℓ)^{k0−2}·(1+W)^{s_ℓ}. The Θ-factors are present only when
/// a critical character is supplied.
pub fn euler_element_family(
    fam: &FamilyEigen,
    nv: u64,
    x_v: &PadicInt,
    theta: Option<&CriticalCharacter>,
    mt: usize,
) -> Result<PowerSeries2> {
    let l = fam.l;
    let ring = fam.a.ring().clone();
    let p = ring.p();
    if l == p || nv % p == 0 {
        return Err(Error::RamifiedInTower);
    }
    let mw = fam.a.terms();
    let fdeg = if nv == l {
        1
    } else if nv == l * l {
        2
    } else {
        return Err(Error::Invalid(format!("{nv} is not the norm of a place above {l}")));
    };
    // d_ℓ in O[[W]]
    let d = if fam.bad {
        PowerSeries1::zero(&ring, mw)
    } else {
        let tame = teichmueller(&ring.elem(l))?.pow((fam.k0 as u64 + p - 3) % (p - 1));
        grouplike_power(&weight_exponent(l, &ring)?, mw).scale(&(&ring.elem(l) * &tame))
    };
    let (s1, s2) = if fdeg == 1 {
        (fam.a.clone(), d.clone())
    } else {
        let two = ring.elem(2);
        (fam.a.mul(&fam.a).sub(&d.scale(&two)), d.mul(&d))
    };
    let inv_nv = ring.elem(nv).inv()?;
    let mut c1 = s1.scale(&inv_nv);
    let mut c2 = s2.scale(&(&inv_nv * &inv_nv));
    if let Some(th) = theta {
        // Θ(frob_v) = ω(Nv)^{(k0−2)/2}·(1+W)^{s_v/2}
        let s_half = weight_exponent(nv, &ring)?.div(&ring.elem(2))?;
        let tame = teichmueller(&ring.elem(nv))?.pow(th.tame_exponent);
        let th_v = grouplike_power(&s_half, mw).scale(&tame);
        let inv = th_v.inverse()?;
        c1 = c1.mul(&inv);
        c2 = c2.mul(&inv).mul(&inv);
    }
    let g = grouplike_power(x_v, mt);
    let g2 = g.mul(&g);
    let one = PowerSeries2::from_w_series(&PowerSeries1::one(&ring, mw), mt);
    Ok(one
        .sub(&PowerSeries2::from_w_series(&c1, mt).mul(&PowerSeries2::from_t_series(&g, mw)))
        .add(&PowerSeries2::from_w_series(&c2, mt).mul(&PowerSeries2::from_t_series(&g2, mw))))
}

/// Euler element from p-adic (s1, s2) at a place of norm Nv prime to p.
pub fn euler_series_padic(
    s1: &PadicInt,
    s2: &PadicInt,
    nv: u64,
    x_v: &PadicInt,
    m: usize,
) -> Result<PowerSeries1> {
    let g = grouplike_power(x_v, m);
    let ring = g.ring().clone();
    let inv_nv = ring.elem(nv).inv()?;
    let c1 = s1 * &inv_nv;
    let c2 = &(s2 * &inv_nv) * &inv_nv;
    Ok(PowerSeries1::one(&ring, m)
        .sub(&g.scale(&c1))
        .add(&g.mul(&g).scale(&c2)))
}

/// Places of K above ℓ together with their residue degree.
pub fn places_above(chi: &AnticycloChar, l: u64) -> Vec<(QuadIdeal, u32)> {
    let field = chi.setup().field();
    let f = match field.splitting(l) {
        Splitting::Inert => 2,
        _ => 1,
    };
    field.primes_above(l).into_iter().map(|v| (v, f)).collect()
}
