//! Interpolation prefactors of the four p-adic L-functions as formal values,
//! the period rewrite rules, and the character-grid comparison of prefactor ratios.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{big_pow, val_big};
use crate::cyclotomic::{CycElem, PadicCyc};
use crate::error::{Error, Result};
use crate::euler::HeckeFormData;
use crate::gauss_theta::global_gauss_sum;
use crate::hecke::{AnticycloChar, CharSpec};
use crate::iwasawa::{twist, PowerSeries1};
use crate::padic::{PadicInt, Zp};
use crate::quad::{QuadIdeal, QuadSetup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Pi,
    I,
    OmegaPlus,
    OmegaMinus,
    OmegaGross,
    PetN,
    Eta,
    EtaNminus,
    UF,
    UCH,
    UHBL,
    TauSign,
    ChiNplus,
    Gamma(u32),
}

impl Symbol {
    /// Symbols that must cancel in every comparison.
    pub fn is_transcendental(&self) -> bool {
        matches!(
            self,
            Symbol::Pi
                | Symbol::I
                | Symbol::OmegaPlus
                | Symbol::OmegaMinus
                | Symbol::OmegaGross
                | Symbol::PetN
                | Symbol::Gamma(_)
        )
    }

    /// Symbols allowed in a residual.
    pub fn is_residual(&self) -> bool {
        matches!(
            self,
            Symbol::Eta
                | Symbol::EtaNminus
                | Symbol::UF
                | Symbol::UCH
                | Symbol::UHBL
                | Symbol::TauSign
                | Symbol::ChiNplus
        )
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Pi => write!(f, "pi"),
            Symbol::I => write!(f, "i"),
            Symbol::OmegaPlus => write!(f, "Omega+"),
            Symbol::OmegaMinus => write!(f, "Omega-"),
            Symbol::OmegaGross => write!(f, "Omega_Gross"),
            Symbol::PetN => write!(f, "PetN"),
            Symbol::Eta => write!(f, "eta"),
            Symbol::EtaNminus => write!(f, "eta_Nminus"),
            Symbol::UF => write!(f, "u_f"),
            Symbol::UCH => write!(f, "u_CH"),
            Symbol::UHBL => write!(f, "u_HBL"),
            Symbol::TauSign => write!(f, "tau_sign"),
            Symbol::ChiNplus => write!(f, "chi(N+)"),
            Symbol::Gamma(j) => write!(f, "Gamma({j})"),
        }
    }
}

/// rational · p^{padic_val} · padic_unit · Π symbol^{e}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalValue {
    pub rational: BigRational,
    pub padic_val: i64,
    pub padic_unit: PadicInt,
    pub symbols: BTreeMap<Symbol, i64>,
    /// Exact value of χ(𝔑⁺) when known.
    pub chi_nplus: Option<CycElem>,
}

impl FormalValue {
    pub fn one(ring: &Zp) -> FormalValue {
        FormalValue {
            rational: BigRational::one(),
            padic_val: 0,
            padic_unit: ring.one(),
            symbols: BTreeMap::new(),
            chi_nplus: None,
        }
    }

    pub fn rational(ring: &Zp, q: BigRational) -> FormalValue {
        FormalValue {
            rational: q,
            ..FormalValue::one(ring)
        }
    }

    /// A p-adic number; zero is rejected.
    pub fn padic(x: &PadicInt) -> Result<FormalValue> {
        let (v, u) = x.unit_part()?;
        Ok(FormalValue {
            padic_val: v as i64,
            padic_unit: u,
            ..FormalValue::one(x.ring())
        })
    }

    pub fn symbol(ring: &Zp, s: Symbol, e: i64) -> FormalValue {
        let mut out = FormalValue::one(ring);
        out.symbols.insert(s, e);
        out.normalize()
    }

    pub fn exponent(&self, s: Symbol) -> i64 {
        self.symbols.get(&s).copied().unwrap_or(0)
    }

    /// Drop zero exponents and use i² = −1.
    pub fn normalize(mut self) -> FormalValue {
        if let Some(e) = self.symbols.get(&Symbol::I).copied() {
            let mut r = e.rem_euclid(4);
            if r >= 2 {
                self.rational = -self.rational;
                r -= 2;
            }
            self.symbols.insert(Symbol::I, r);
        }
        self.symbols.retain(|_, e| *e != 0);
        self
    }

    pub fn mul(&self, o: &FormalValue) -> FormalValue {
        let mut symbols = self.symbols.clone();
        for (s, e) in &o.symbols {
            *symbols.entry(*s).or_insert(0) += e;
        }
        FormalValue {
            rational: &self.rational * &o.rational,
            padic_val: self.padic_val + o.padic_val,
            padic_unit: &self.padic_unit * &o.padic_unit,
            symbols,
            chi_nplus: self.chi_nplus.clone().or_else(|| o.chi_nplus.clone()),
        }
        .normalize()
    }

    pub fn inv(&self) -> Result<FormalValue> {
        if self.rational.is_zero() {
            return Err(Error::DivisionByNonUnit);
        }
        Ok(FormalValue {
            rational: self.rational.recip(),
            padic_val: -self.padic_val,
            padic_unit: self.padic_unit.inv()?,
            symbols: self.symbols.iter().map(|(s, e)| (*s, -e)).collect(),
            chi_nplus: self.chi_nplus.clone(),
        }
        .normalize())
    }

    pub fn div(&self, o: &FormalValue) -> Result<FormalValue> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn p(&self) -> u64 {
        self.padic_unit.p()
    }

    /// Total p-adic valuation of the scalar.
    pub fn valuation(&self) -> Result<i64> {
        if self.rational.is_zero() {
            return Err(Error::ValuationOfZero);
        }
        let p = self.p();
        let vr = val_big(self.rational.numer(), p) as i64 - val_big(self.rational.denom(), p) as i64;
        Ok(vr + self.padic_val)
    }

    /// Symbols that must cancel but did not, with their exponents.
    pub fn imbalance(&self) -> Vec<(Symbol, i64)> {
        self.symbols
            .iter()
            .filter(|(s, _)| s.is_transcendental())
            .map(|(s, e)| (*s, *e))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let symbols: serde_json::Map<String, Value> = self
            .symbols
            .iter()
            .map(|(s, e)| (s.to_string(), json!(e)))
            .collect();
        json!({
            "rational": self.rational.to_string(),
            "padic_valuation": self.padic_val,
            "padic_unit": self.padic_unit.residue().to_string(),
            "symbols": symbols,
            "chi_nplus": self.chi_nplus.as_ref().map(|c| c.to_string()),
        })
    }
}

impl fmt::Display for FormalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.padic_val != 0 {
            write!(f, "·p^{}", self.padic_val)?;
        }
        write!(f, "·[{}]", self.padic_unit)?;
        for (s, e) in &self.symbols {
            write!(f, "·{s}^{e}")?;
        }
        Ok(())
    }
}

/// Order of application of the two period relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOrder {
    GrossFirst,
    CanonicalFirst,
}

/// Ω_Gross → (4π)^k·PetN/η_Nminus and Ω⁺·Ω⁻ → PetN/η, both up to p-adic units.
#[derive(Clone, Copy, Debug)]
pub struct RewriteRules {
    pub k: u32,
}

impl RewriteRules {
    pub fn gross(&self, v: &FormalValue) -> FormalValue {
        let e = v.exponent(Symbol::OmegaGross);
        if e == 0 {
            return v.clone();
        }
        let mut out = v.clone();
        out.symbols.remove(&Symbol::OmegaGross);
        out.rational *= BigRational::from_integer(BigInt::from(4)).pow((self.k as i64 * e) as i32);
        *out.symbols.entry(Symbol::Pi).or_insert(0) += self.k as i64 * e;
        *out.symbols.entry(Symbol::PetN).or_insert(0) += e;
        *out.symbols.entry(Symbol::EtaNminus).or_insert(0) -= e;
        out.normalize()
    }

    /// Applies to the common power of Ω⁺ and Ω⁻.
    pub fn canonical(&self, v: &FormalValue) -> FormalValue {
        let a = v.exponent(Symbol::OmegaPlus);
        let b = v.exponent(Symbol::OmegaMinus);
        let e = if a.signum() == b.signum() {
            a.signum() * a.abs().min(b.abs())
        } else {
            0
        };
        if e == 0 {
            return v.clone();
        }
        let mut out = v.clone();
        *out.symbols.entry(Symbol::OmegaPlus).or_insert(0) -= e;
        *out.symbols.entry(Symbol::OmegaMinus).or_insert(0) -= e;
        *out.symbols.entry(Symbol::PetN).or_insert(0) += e;
        *out.symbols.entry(Symbol::Eta).or_insert(0) -= e;
        out.normalize()
    }

    pub fn apply(&self, v: &FormalValue, order: RuleOrder) -> FormalValue {
        match order {
            RuleOrder::GrossFirst => self.canonical(&self.gross(v)),
            RuleOrder::CanonicalFirst => self.gross(&self.canonical(v)),
        }
    }
}

fn gamma_sym(ring: &Zp, j: u32, e: i64) -> FormalValue {
    FormalValue::symbol(ring, Symbol::Gamma(j), e)
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn p_power(p: u64, e: i64) -> BigRational {
    int(p).pow(e as i32)
}

/// Skinner–Urban prefactor at a character of conductor pⁿ, n ≥ 1:
/// u_f·((k−2)!)²·𝔤·𝐍(pⁿ𝔡)^{k−2} / (α^{2n}·(−2πi)^{2k−2}·Ω⁺Ω⁻).
pub fn prefactor_su(k: u32, chi: &AnticycloChar, alpha: &PadicInt) -> Result<FormalValue> {
    let n = chi.n();
    if n == 0 {
        return Err(Error::RamifiedRegimeOnly);
    }
    let ring = alpha.ring();
    let setup = chi.setup();
    let p = setup.p;
    let g = global_gauss_sum(chi)?;
    let norm_fd = big_pow(p, 2 * n) * BigInt::from(setup.d.unsigned_abs());
    let two_k = 2 * k as i64 - 2;
    let rational = int(g.value) * int(num_traits::pow(norm_fd, (k - 2) as usize))
        / int(BigInt::from(-2)).pow(two_k as i32);
    let mut v = FormalValue::rational(ring, rational)
        .mul(&FormalValue::padic(&alpha.pow(2 * n as u64))?.inv()?)
        .mul(&gamma_sym(ring, k - 1, 2));
    for (s, e) in [
        (Symbol::UF, 1),
        (Symbol::Pi, -two_k),
        (Symbol::I, -two_k),
        (Symbol::OmegaPlus, -1),
        (Symbol::OmegaMinus, -1),
    ] {
        v = v.mul(&FormalValue::symbol(ring, s, e));
    }
    Ok(v)
}

/// 𝔑⁺ with 𝔑⁺·𝔑̄⁺ = N⁺O_K: for each ℓ^e ∥ N⁺, the e-th power of the first prime above ℓ.
pub fn n_plus_ideal(setup: &QuadSetup) -> Result<QuadIdeal> {
    let field = setup.field();
    let mut out = QuadIdeal::new(&field.from_int(1));
    for (l, e) in crate::arith::factorize(setup.n_plus) {
        let ps = field.primes_above(l);
        if ps.len() != 2 {
            return Err(Error::NotSplit(l));
        }
        for _ in 0..e {
            out = out.mul(&ps[0]);
        }
    }
    Ok(out)
}

/// Form-side inputs shared by the CH and HBL prefactors.
#[derive(Clone, Debug)]
pub struct FormLocal {
    pub k: u32,
    pub alpha: PadicInt,
    pub a_p: i64,
    /// 0 for a p-stabilized form, 1 for a form new at p.
    pub t: u32,
    /// p^{k−1}/α, None when new at p.
    pub beta: Option<PadicInt>,
}

impl FormLocal {
    pub fn new(f: &HeckeFormData, ring: &Zp) -> Result<FormLocal> {
        let alpha = f.alpha(ring)?;
        let beta = f
            .beta(ring)?
            .map(|(v, u)| u.mul_p_power(v));
        Ok(FormLocal {
            k: f.k,
            alpha,
            a_p: f.a(f.p)?,
            t: if f.stabilized { 0 } else { 1 },
            beta,
        })
    }
}

/// Chida–Hsieh prefactor:
/// e_p^{2−t}·u_K²·√D·χ(𝔑⁺)·D^{k−2}·ε_p(f)·(−1)^m·Γ(k/2+m)Γ(k/2−m)·p^{n(k−1)}/α^{2n}/Ω_Gross.
pub fn prefactor_ch(fl: &FormLocal, chi: &AnticycloChar) -> Result<FormalValue> {
    let k = fl.k;
    let m = chi.m();
    let half = (k / 2) as i32;
    if m.abs() > half - 1 {
        return Err(Error::OutOfRange(format!("|m| = {} exceeds k/2 - 1 = {}", m.abs(), half - 1)));
    }
    let setup = chi.setup();
    let ring = fl.alpha.ring();
    let p = setup.p;
    let n = chi.n();
    let mut v = FormalValue::one(ring);
    // e_p(f, χ)^{2−t}
    if n == 0 {
        let c = p_power_padic(ring, (k - 2) / 2).div(&fl.alpha)?;
        let e = (&ring.one() - &c).pow(2);
        let e = FormalValue::padic(&e.pow((2 - fl.t) as u64))?;
        v = v.mul(&e);
    }
    let eps_p: i64 = if fl.t == 0 {
        1
    } else {
        // −p^{−(k−2)/2}·a_p
        let pk = big_pow(p, (k - 2) / 2);
        let s = -BigInt::from(fl.a_p);
        if s.abs() != pk {
            return Err(Error::Invalid(format!("a_p = {} is not ±p^{{(k-2)/2}}", fl.a_p)));
        }
        if s.is_positive() {
            1
        } else {
            -1
        }
    };
    let uk = setup.u_k() as i64;
    let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
    let rational = int(uk * uk)
        * int(BigInt::from(setup.d)).pow(k as i32 - 2)
        * int(eps_p * sign)
        * p_power(p, n as i64 * (k as i64 - 1));
    let sqrt_d = setup.embedding(ring.prec())?.sqrt_d().clone();
    v = v
        .mul(&FormalValue::rational(ring, rational))
        .mul(&FormalValue::padic(&sqrt_d)?)
        .mul(&FormalValue::padic(&fl.alpha.pow(2 * n as u64))?.inv()?)
        .mul(&gamma_sym(ring, (half + m) as u32, 1))
        .mul(&gamma_sym(ring, (half - m) as u32, 1))
        .mul(&FormalValue::symbol(ring, Symbol::OmegaGross, -1))
        .mul(&FormalValue::symbol(ring, Symbol::UCH, 1))
        .mul(&FormalValue::symbol(ring, Symbol::ChiNplus, 1));
    v.chi_nplus = Some(chi.value_on_ideal(&n_plus_ideal(setup)?));
    Ok(v)
}

fn p_power_padic(ring: &Zp, e: u32) -> PadicInt {
    ring.elem(big_pow(ring.p(), e))
}

/// 𝓔(f) = 1 − β/(pα) and 𝓔*(f) = 1 − β/α.
pub fn e_factors(fl: &FormLocal) -> Result<(PadicInt, PadicInt)> {
    let ring = fl.alpha.ring();
    match &fl.beta {
        None => Ok((ring.one(), ring.one())),
        Some(beta) => {
            let b_over_a = beta.div(&fl.alpha)?;
            let e_star = &ring.one() - &b_over_a;
            let e = &ring.one() - &b_over_a.div_p_power(1)?;
            Ok((e, e_star))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EFactorReport {
    pub e_valuation: String,
    pub e_star_valuation: String,
    pub units: bool,
}

pub fn e_factor_report(fl: &FormLocal) -> Result<EFactorReport> {
    let (e, es) = e_factors(fl)?;
    Ok(EFactorReport {
        e_valuation: e.valuation().to_string(),
        e_star_valuation: es.valuation().to_string(),
        units: e.is_unit() && es.is_unit(),
    })
}

/// Hida–Büyükboduk–Lei prefactor at conductor pⁿ, n ≥ 1, with τ = p^{−n}·τ_sign:
/// p^{2jn}·τ·u_HBL·Γ(j)²/(α^{2n}·𝓔·𝓔*·π^{2j}·PetN).
pub fn prefactor_hbl(fl: &FormLocal, j: u32, chi: &AnticycloChar) -> Result<FormalValue> {
    let k = fl.k;
    if j < 1 || j > k - 1 {
        return Err(Error::OutOfRange(format!("j = {j} outside [1, {}]", k - 1)));
    }
    let n = chi.n();
    if n == 0 {
        return Err(Error::RamifiedRegimeOnly);
    }
    let ring = fl.alpha.ring();
    let p = chi.setup().p;
    let (e, es) = e_factors(fl)?;
    let denom = FormalValue::padic(&fl.alpha.pow(2 * n as u64))?
        .mul(&FormalValue::padic(&e)?)
        .mul(&FormalValue::padic(&es)?);
    let v = FormalValue::rational(ring, p_power(p, 2 * j as i64 * n as i64 - n as i64))
        .mul(&denom.inv()?)
        .mul(&gamma_sym(ring, j, 2))
        .mul(&FormalValue::symbol(ring, Symbol::TauSign, 1))
        .mul(&FormalValue::symbol(ring, Symbol::UHBL, 1))
        .mul(&FormalValue::symbol(ring, Symbol::Pi, -2 * j as i64))
        .mul(&FormalValue::symbol(ring, Symbol::PetN, -1));
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Pair {
    #[serde(rename = "su-ch")]
    SuCh,
    #[serde(rename = "hbl-ch")]
    HblCh,
    #[serde(rename = "hbl-su")]
    HblSu,
}

impl FromStr for Pair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Pair> {
        match s {
            "su-ch" => Ok(Pair::SuCh),
            "hbl-ch" => Ok(Pair::HblCh),
            "hbl-su" => Ok(Pair::HblSu),
            _ => Err(Error::Invalid(format!("unknown pair {s:?}"))),
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::SuCh => "su-ch",
            Pair::HblCh => "hbl-ch",
            Pair::HblSu => "hbl-su",
        })
    }
}

impl Pair {
    /// The HBL evaluation point j, if the pair involves HBL.
    pub fn hbl_j(&self, k: u32) -> Option<u32> {
        match self {
            Pair::SuCh => None,
            Pair::HblCh => Some(k / 2),
            Pair::HblSu => Some(k - 1),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointResult {
    pub spec: CharSpec,
    pub residual: FormalValue,
    pub imbalance: Vec<(Symbol, i64)>,
    pub valuation: i64,
    pub residual_symbols_ok: bool,
    pub confluent: bool,
}

impl PointResult {
    pub fn pass(&self) -> bool {
        self.imbalance.is_empty() && self.valuation == 0 && self.residual_symbols_ok && self.confluent
    }
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub pair: Pair,
    pub k: u32,
    pub points: Vec<PointResult>,
    /// Residuals agree across the grid up to χ(𝔑⁺) and a sign.
    pub chi_dependence_ok: bool,
    /// Distinct signs of residual_i/residual_0.
    pub signs: Vec<i8>,
    pub e_factors: Option<EFactorReport>,
    /// Twist-evaluation identity relating j = k/2 and j = k−1 (hbl-su only).
    pub twist_shift: Option<bool>,
}

impl CompareReport {
    pub fn pass(&self) -> bool {
        self.points.iter().all(PointResult::pass)
            && self.chi_dependence_ok
            && self.twist_shift.unwrap_or(true)
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|pt| {
                json!({
                    "character": serde_json::to_value(&pt.spec).unwrap(),
                    "residual": pt.residual.to_json(),
                    "imbalance": pt.imbalance.iter().map(|(s, e)| format!("{s}^{e}")).collect::<Vec<_>>(),
                    "valuation": pt.valuation,
                    "residual_symbols_ok": pt.residual_symbols_ok,
                    "confluent": pt.confluent,
                    "pass": pt.pass(),
                })
            })
            .collect();
        json!({
            "pair": self.pair.to_string(),
            "k": self.k,
            "points": points,
            "chi_dependence_ok": self.chi_dependence_ok,
            "signs": self.signs,
            "e_factors": self.e_factors.as_ref().map(|e| serde_json::to_value(e).unwrap()),
            "twist_shift": self.twist_shift,
            "pass": self.pass(),
        })
    }
}

/// Minimum number of grid characters for a comparison.
pub const MIN_GRID: usize = 5;

fn ratio(pair: Pair, fl: &FormLocal, chi: &AnticycloChar, alpha: &PadicInt) -> Result<FormalValue> {
    let k = fl.k;
    match pair {
        Pair::SuCh => prefactor_su(k, chi, alpha)?.div(&prefactor_ch(fl, chi)?),
        Pair::HblCh => prefactor_hbl(fl, k / 2, chi)?.div(&prefactor_ch(fl, chi)?),
        Pair::HblSu => prefactor_hbl(fl, k - 1, chi)?.div(&prefactor_su(k, chi, alpha)?),
    }
}

/// Prefactor ratios over a character grid, reduced by the period rewrite rules.
pub fn compare(
    pair: Pair,
    f: &HeckeFormData,
    chars: &[AnticycloChar],
    prec: u32,
) -> Result<CompareReport> {
    if chars.len() < MIN_GRID {
        return Err(Error::OutOfRange(format!(
            "comparison needs at least {MIN_GRID} characters, got {}",
            chars.len()
        )));
    }
    if pair == Pair::SuCh && f.k != 2 {
        return Err(Error::OutOfRange("su-ch is stated for weight 2".into()));
    }
    let p = chars[0].setup().p;
    if f.p != p {
        return Err(Error::PrimeMismatch(f.p, p));
    }
    let ring = Zp::new(p, prec)?;
    let fl = FormLocal::new(f, &ring)?;
    let rules = RewriteRules { k: f.k };
    let points: Vec<PointResult> = chars
        .par_iter()
        .map(|chi| -> Result<PointResult> {
            let r = ratio(pair, &fl, chi, &fl.alpha)?;
            let a = rules.apply(&r, RuleOrder::GrossFirst);
            let b = rules.apply(&r, RuleOrder::CanonicalFirst);
            Ok(PointResult {
                spec: chi.spec(),
                imbalance: a.imbalance(),
                valuation: a.valuation()?,
                residual_symbols_ok: a.symbols.keys().all(|s| s.is_residual()),
                confluent: a == b,
                residual: a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (chi_dependence_ok, signs) = chi_dependence(&points);
    let e_factors = match pair {
        Pair::SuCh => None,
        _ => Some(e_factor_report(&fl)?),
    };
    let twist_shift = match pair {
        Pair::HblSu => Some(twist_shift_check(&ring, f.k, chars, 12)?),
        _ => None,
    };
    Ok(CompareReport {
        pair,
        k: f.k,
        points,
        chi_dependence_ok,
        signs,
        e_factors,
        twist_shift,
    })
}

/// residual_i/residual_0 must be ±1 with identical symbols; the χ(𝔑⁺) values carry the rest.
fn chi_dependence(points: &[PointResult]) -> (bool, Vec<i8>) {
    let r0 = &points[0].residual;
    let mut ok = true;
    let mut signs = Vec::new();
    for pt in points {
        let r = &pt.residual;
        let q = &r.rational / &r0.rational;
        let sign: i8 = if q == BigRational::one() {
            1
        } else if q == -BigRational::one() {
            -1
        } else {
            ok = false;
            0
        };
        ok &= r.padic_val == r0.padic_val
            && r.padic_unit.reduce_to(r0.padic_unit.prec()) == r0.padic_unit.reduce_to(r.padic_unit.prec())
            && r.symbols == r0.symbols;
        if !signs.contains(&sign) {
            signs.push(sign);
        }
    }
    signs.sort();
    (ok && signs.len() <= 2, signs)
}

/// Tw_η(F)(ζ − 1) = F(η·ζ − 1) for the j-shift η = (1+p)^{k/2−1} and a deterministic
/// mock series F, at every p-power root of unity χ̂(γ₋) of the grid.
pub fn twist_shift_check(ring: &Zp, k: u32, chars: &[AnticycloChar], m: usize) -> Result<bool> {
    let p = ring.p();
    let eta = ring.elem(1 + p).pow((k / 2 - 1) as u64);
    let f = PowerSeries1::from_coeffs(ring, m, (0..m as u64).map(|i| BigInt::from(i * i + 3 * i + 1)));
    let tw = twist(&f, &eta)?;
    for chi in chars {
        let ord = chi.avatar_order();
        let n = crate::arith::floor_log(ord, p).max(1);
        // χ̂(γ₋) = ζ_φ^w = ζ_{p^n}^{w·p^n/φ}
        let e = chi.eps().wild_exponent() * p.pow(n) / chi.eps().phi().max(1);
        let zeta = PadicCyc::zeta_pow(ring, n, e as i64);
        let one = PadicCyc::one(ring, n);
        let lhs = tw.eval_cyc(&zeta.sub(&one));
        let rhs = f.eval_cyc(&zeta.scale(&eta).sub(&one));
        let prec = lhs.ring().prec().min(rhs.ring().prec());
        if lhs.reduce_to(prec) != rhs.reduce_to(prec) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Primitive characters of conductor p^n, 1 ≤ n ≤ n_max, infinity type 0.
pub fn default_grid(setup: &QuadSetup, n_max: u32) -> Result<Vec<AnticycloChar>> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        out.extend(AnticycloChar::admissible(setup, n, 0)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::validate_setup;

    fn run(pair: Pair, label: &str, d: i64) -> CompareReport {
        let f = HeckeFormData::builtin(label).unwrap();
        let s = validate_setup(d, f.p, f.level, None).unwrap();
        let grid = default_grid(&s, 2).unwrap();
        compare(pair, &f, &grid, 20).unwrap()
    }

    #[test]
    fn su_ch_weight_two() {
        for (label, d) in [("11a", -4), ("14a", -3)] {
            let r = run(Pair::SuCh, label, d);
            assert!(r.pass(), "{label}: {}", r.to_json());
            let res = &r.points[0].residual;
            assert_eq!(res.exponent(Symbol::Eta), 1);
            assert_eq!(res.exponent(Symbol::EtaNminus), -1);
        }
    }

    #[test]
    fn hbl_pairs_weight_four() {
        for pair in [Pair::HblCh, Pair::HblSu] {
            let r = run(pair, "5.4.a.a", -3);
            assert!(r.pass(), "{pair}: {}", r.to_json());
        }
    }

    #[test]
    fn e_factor_weight_two_at_three() {
        let f = HeckeFormData::builtin("11a").unwrap();
        let mut f3 = f.clone();
        f3.p = 3;
        let ring = Zp::new(3, 20).unwrap();
        let fl = FormLocal::new(&f3, &ring).unwrap();
        let (e, _) = e_factors(&fl).unwrap();
        assert_eq!(e.valuation().lower(), 1);
        assert_eq!(fl.alpha.pow(2).reduce_to(2).residue(), &BigInt::from(4));
    }

    #[test]
    fn rules_commute() {
        let ring = Zp::new(5, 10).unwrap();
        let v = FormalValue::symbol(&ring, Symbol::OmegaGross, 1)
            .mul(&FormalValue::symbol(&ring, Symbol::OmegaPlus, -1))
            .mul(&FormalValue::symbol(&ring, Symbol::OmegaMinus, -1));
        let r = RewriteRules { k: 2 };
        assert_eq!(r.apply(&v, RuleOrder::GrossFirst), r.apply(&v, RuleOrder::CanonicalFirst));
        assert!(r.apply(&v, RuleOrder::GrossFirst).imbalance().iter().all(|(s, _)| *s == Symbol::Pi));
    }
}
