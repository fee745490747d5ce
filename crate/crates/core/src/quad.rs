//! Imaginary quadratic fields of class number one.
//!
//! Elements are stored as (A + B·√D)/2 with A ≡ B·D (mod 2); ideals are
//! stored by a canonical generator of their unit orbit.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, kronecker};
use crate::error::{Error, Result};
use crate::padic::{one_unit_log, one_unit_part, PadicInt, Zp};

/// Fundamental discriminants of imaginary quadratic fields with class number one.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// Splitting of a rational prime ℓ in Q(√D), read off the Kronecker symbol.
pub fn splitting_type(l: u64, d: i64) -> Splitting {
    match kronecker(d, l) {
        1 => Splitting::Split,
        -1 => Splitting::Inert,
        _ => Splitting::Ramified,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    pub fn new(d: i64) -> Result<QuadField> {
        if !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::UnsupportedClassNumber(d));
        }
        Ok(QuadField { d })
    }

    pub fn disc(&self) -> i64 {
        self.d
    }

    /// #O_K^×.
    pub fn unit_count(&self) -> u32 {
        match self.d {
            -4 => 4,
            -3 => 6,
            _ => 2,
        }
    }

    pub fn units(&self) -> Vec<QuadElem> {
        let d = self.d;
        match d {
            -4 => vec![(2, 0), (0, 1), (-2, 0), (0, -1)],
            -3 => vec![(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)],
            _ => vec![(2, 0), (-2, 0)],
        }
        .into_iter()
        .map(|(a, b)| QuadElem { d, a, b })
        .collect()
    }

    pub fn from_int(&self, n: i64) -> QuadElem {
        QuadElem {
            d: self.d,
            a: 2 * n as i128,
            b: 0,
        }
    }

    /// x + y·τ with τ = √D/2 (D ≡ 0 mod 4) or (1+√D)/2 (D ≡ 1 mod 4).
    pub fn elem(&self, x: i64, y: i64) -> QuadElem {
        let odd = (self.d.rem_euclid(4) == 1) as i128;
        QuadElem {
            d: self.d,
            a: 2 * x as i128 + odd * y as i128,
            b: y as i128,
        }
    }

    /// (A + B√D)/2; fails unless integral.
    pub fn from_half(&self, a: i128, b: i128) -> Result<QuadElem> {
        if (a - b * self.d as i128).rem_euclid(2) != 0 {
            return Err(Error::Invalid(format!("({a} + {b}√D)/2 is not integral")));
        }
        Ok(QuadElem { d: self.d, a, b })
    }

    pub fn splitting(&self, l: u64) -> Splitting {
        splitting_type(l, self.d)
    }

    /// All integral ideals of norm n, each once.
    pub fn ideals_of_norm(&self, n: u64) -> Vec<QuadIdeal> {
        let d = self.d as i128;
        let target = 4 * n as i128;
        let ad = -d;
        let mut seen = BTreeSet::new();
        let mut b: i128 = 0;
        while ad * b * b <= target {
            let rest = target - ad * b * b;
            if let Some(a) = crate::arith::exact_isqrt(rest) {
                for (sa, sb) in [(a, b), (-a, b), (a, -b), (-a, -b)] {
                    if (sa - sb * d).rem_euclid(2) == 0 {
                        let x = QuadElem { d: self.d, a: sa, b: sb };
                        seen.insert(QuadIdeal::new(&x));
                    }
                }
            }
            b += 1;
        }
        seen.into_iter().collect()
    }

    /// Prime ideals above the rational prime ℓ.
    pub fn primes_above(&self, l: u64) -> Vec<QuadIdeal> {
        match self.splitting(l) {
            Splitting::Inert => vec![QuadIdeal::new(&self.from_int(l as i64))],
            _ => self.ideals_of_norm(l),
        }
    }

    /// All integral ideals of norm n, assembled from the prime ideals above each p | n.
    /// Agrees with `ideals_of_norm` and avoids the O(√n) search for large n.
    pub fn ideals_of_norm_factored(&self, n: u64) -> Vec<QuadIdeal> {
        let mut acc = vec![QuadIdeal::new(&self.from_int(1))];
        for (l, e) in factorize(n) {
            let local: Vec<QuadIdeal> = match self.splitting(l) {
                Splitting::Split => {
                    let pr = self.ideals_of_norm(l);
                    let (a, b) = (pr[0].gen, pr[1].gen);
                    (0..=e)
                        .map(|i| QuadIdeal::new(&a.pow(i).mul(&b.pow(e - i))))
                        .collect()
                }
                Splitting::Inert if e % 2 == 0 => {
                    vec![QuadIdeal::new(&self.from_int(l.pow(e / 2) as i64))]
                }
                Splitting::Inert => Vec::new(),
                Splitting::Ramified => {
                    let pr = self.ideals_of_norm(l);
                    vec![QuadIdeal::new(&pr[0].gen.pow(e))]
                }
            };
            acc = acc
                .iter()
                .flat_map(|x| local.iter().map(move |y| x.mul(y)))
                .collect();
        }
        acc.sort();
        acc
    }

    /// Every integral ideal of norm ≤ bound, grouped by norm (index = norm).
    pub fn ideals_up_to(&self, bound: u64) -> Vec<Vec<QuadIdeal>> {
        (0..=bound)
            .map(|n| if n == 0 { Vec::new() } else { self.ideals_of_norm(n) })
            .collect()
    }
}

/// Integral element (a + b√D)/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElem {
    d: i64,
    a: i128,
    b: i128,
}

impl QuadElem {
    pub fn disc(&self) -> i64 {
        self.d
    }

    /// Half-coordinates (A, B) with x = (A + B√D)/2.
    pub fn half_coords(&self) -> (i128, i128) {
        (self.a, self.b)
    }

    /// Coordinates (x, y) in the basis 1, τ.
    pub fn tau_coords(&self) -> (i128, i128) {
        let odd = (self.d.rem_euclid(4) == 1) as i128;
        ((self.a - odd * self.b) / 2, self.b)
    }

    pub fn norm(&self) -> i128 {
        (self.a * self.a - self.d as i128 * self.b * self.b) / 4
    }

    pub fn conj(&self) -> QuadElem {
        QuadElem { b: -self.b, ..*self }
    }

    pub fn mul(&self, o: &QuadElem) -> QuadElem {
        assert_eq!(self.d, o.d, "field mismatch");
        let d = self.d as i128;
        QuadElem {
            d: self.d,
            a: (self.a * o.a + d * self.b * o.b) / 2,
            b: (self.a * o.b + self.b * o.a) / 2,
        }
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem { d: self.d, a: self.a + o.a, b: self.b + o.b }
    }

    pub fn sub(&self, o: &QuadElem) -> QuadElem {
        QuadElem { d: self.d, a: self.a - o.a, b: self.b - o.b }
    }

    pub fn neg(&self) -> QuadElem {
        QuadElem { d: self.d, a: -self.a, b: -self.b }
    }

    pub fn pow(&self, e: u32) -> QuadElem {
        let mut acc = QuadElem { d: self.d, a: 2, b: 0 };
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_rational(&self) -> bool {
        self.b == 0
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// self / o if the quotient is integral.
    pub fn div_exact(&self, o: &QuadElem) -> Option<QuadElem> {
        let n = o.norm();
        if n == 0 {
            return None;
        }
        let t = self.mul(&o.conj());
        if t.a % n != 0 || t.b % n != 0 {
            return None;
        }
        let q = QuadElem { d: self.d, a: t.a / n, b: t.b / n };
        ((q.a - q.b * self.d as i128).rem_euclid(2) == 0).then_some(q)
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.tau_coords();
        let sym = match self.d {
            -4 => "i",
            _ => "w",
        };
        match (x, y) {
            (x, 0) => write!(f, "{x}"),
            (0, y) => write!(f, "{y}{sym}"),
            (x, y) if y < 0 => write!(f, "{x}{y}{sym}"),
            (x, y) => write!(f, "{x}+{y}{sym}"),
        }
    }
}

/// Integral ideal, stored by the lexicographically largest generator of its unit orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadIdeal {
    norm: u64,
    gen: QuadElem,
}

impl QuadIdeal {
    pub fn new(x: &QuadElem) -> QuadIdeal {
        assert!(!x.is_zero(), "zero ideal");
        let field = QuadField { d: x.d };
        let gen = field
            .units()
            .iter()
            .map(|u| u.mul(x))
            .max_by_key(|e| (e.a, e.b))
            .unwrap();
        QuadIdeal {
            norm: x.norm() as u64,
            gen,
        }
    }

    pub fn generator(&self) -> &QuadElem {
        &self.gen
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn conj(&self) -> QuadIdeal {
        QuadIdeal::new(&self.gen.conj())
    }

    pub fn mul(&self, o: &QuadIdeal) -> QuadIdeal {
        QuadIdeal::new(&self.gen.mul(&o.gen))
    }

    pub fn divides(&self, o: &QuadIdeal) -> bool {
        o.gen.div_exact(&self.gen).is_some()
    }

    /// Factorization into prime ideals with multiplicities.
    pub fn factor(&self) -> Vec<(QuadIdeal, u32)> {
        let field = QuadField { d: self.gen.d };
        let mut rest = self.gen;
        let mut out = Vec::new();
        for (l, _) in factorize(self.norm) {
            for pr in field.primes_above(l) {
                let mut e = 0;
                while let Some(q) = rest.div_exact(&pr.gen) {
                    rest = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((pr, e));
                }
            }
        }
        out
    }
}

impl fmt::Display for QuadIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

/// One clause of the standing hypotheses on (f, K, p, N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    EvenWeight,
    PNotDividing6N,
    TrivialCharacter,
    PStabilizedNewform,
    POrdinary,
    DiscCoprimeToNp,
    NminusSquarefreeOddCount,
    ResidualIrreducible,
    ResidualRamifiedAtNplus,
    ResidualRamifiedAtNminus,
    PSplits,
}

impl Clause {
    pub const ALL: [Clause; 11] = [
        Clause::EvenWeight,
        Clause::PNotDividing6N,
        Clause::TrivialCharacter,
        Clause::PStabilizedNewform,
        Clause::POrdinary,
        Clause::DiscCoprimeToNp,
        Clause::NminusSquarefreeOddCount,
        Clause::ResidualIrreducible,
        Clause::ResidualRamifiedAtNplus,
        Clause::ResidualRamifiedAtNminus,
        Clause::PSplits,
    ];

    pub fn key(&self) -> &'static str {
        match self {
            Clause::EvenWeight => "even_weight",
            Clause::PNotDividing6N => "p_not_dividing_6N",
            Clause::TrivialCharacter => "trivial_character",
            Clause::PStabilizedNewform => "p_stabilized_newform",
            Clause::POrdinary => "p_ordinary",
            Clause::DiscCoprimeToNp => "disc_coprime_to_Np",
            Clause::NminusSquarefreeOddCount => "Nminus_squarefree_odd_count",
            Clause::ResidualIrreducible => "residual_irreducible",
            Clause::ResidualRamifiedAtNplus => "residual_ramified_at_Nplus",
            Clause::ResidualRamifiedAtNminus => "residual_ramified_at_Nminus",
            Clause::PSplits => "p_splits",
        }
    }

    pub fn statement(&self) -> &'static str {
        match self {
            Clause::EvenWeight => "k >= 2 is even",
            Clause::PNotDividing6N => "N >= 1 and p does not divide 6N",
            Clause::TrivialCharacter => "the form has trivial character",
            Clause::PStabilizedNewform => "the form is a p-stabilized newform",
            Clause::POrdinary => "a_p is a p-adic unit",
            Clause::DiscCoprimeToNp => "D is prime to Np",
            Clause::NminusSquarefreeOddCount => {
                "N- is a square-free product of an odd number of primes, N+ split, N- inert"
            }
            Clause::ResidualIrreducible => "the residual representation is irreducible",
            Clause::ResidualRamifiedAtNplus => {
                "residual representation ramified at primes of N+ congruent to 1 mod p"
            }
            Clause::ResidualRamifiedAtNminus => {
                "residual representation ramified at all primes of N-"
            }
            Clause::PSplits => "p splits in K",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.key(), self.statement())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Needs data not supplied (form) or not computable here (residual representation).
    NotChecked,
}

/// Facts about the form that enter the hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormFacts {
    pub k: u32,
    pub a_p: i64,
    pub level: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadSetup {
    pub d: i64,
    pub p: u64,
    pub level: u64,
    pub n_plus: u64,
    pub n_minus: u64,
}

impl QuadSetup {
    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    pub fn unit_count(&self) -> u32 {
        self.field().unit_count()
    }

    /// u_K = #O_K^× / 2.
    pub fn u_k(&self) -> u32 {
        self.unit_count() / 2
    }

    pub fn embedding(&self, prec: u32) -> Result<Embedding> {
        Embedding::new(self.field(), &Zp::new(self.p, prec)?)
    }
}

/// Verdict for every clause of the hypotheses. Form-dependent clauses are
/// `NotChecked` when no form is supplied.
pub fn setup_report(
    d: i64,
    p: u64,
    level: u64,
    factorization: Option<(u64, u64)>,
    form: Option<&FormFacts>,
) -> Result<Vec<(Clause, Verdict)>> {
    QuadField::new(d)?;
    let pass = |b: bool| if b { Verdict::Pass } else { Verdict::Fail };
    let (n_plus, n_minus) = factorization.unwrap_or_else(|| default_factorization(d, level));
    let mut out = Vec::new();
    for c in Clause::ALL {
        let v = match c {
            Clause::EvenWeight => form.map_or(Verdict::NotChecked, |f| pass(f.k >= 2 && f.k % 2 == 0)),
            Clause::PNotDividing6N => pass(level >= 1 && (6 * level) % p != 0),
            Clause::TrivialCharacter => form.map_or(Verdict::NotChecked, |_| Verdict::Pass),
            Clause::PStabilizedNewform => form.map_or(Verdict::NotChecked, |f| pass(f.level == level)),
            Clause::POrdinary => form.map_or(Verdict::NotChecked, |f| pass(f.a_p.rem_euclid(p as i64) != 0)),
            Clause::DiscCoprimeToNp => {
                pass(num_integer::gcd(level * p, d.unsigned_abs()) == 1)
            }
            Clause::NminusSquarefreeOddCount => pass(factorization_ok(d, level, n_plus, n_minus)),
            Clause::ResidualIrreducible
            | Clause::ResidualRamifiedAtNplus
            | Clause::ResidualRamifiedAtNminus => Verdict::NotChecked,
            Clause::PSplits => pass(p >= 2 && crate::arith::is_prime(p) && splitting_type(p, d) == Splitting::Split),
        };
        out.push((c, v));
    }
    Ok(out)
}

fn default_factorization(d: i64, level: u64) -> (u64, u64) {
    let mut plus = 1;
    let mut minus = 1;
    for (l, e) in factorize(level) {
        match splitting_type(l, d) {
            Splitting::Split => plus *= l.pow(e),
            Splitting::Inert => minus *= l.pow(e),
            Splitting::Ramified => {}
        }
    }
    (plus, minus)
}

fn factorization_ok(d: i64, level: u64, n_plus: u64, n_minus: u64) -> bool {
    if n_plus * n_minus != level {
        return false;
    }
    let plus_split = factorize(n_plus)
        .iter()
        .all(|&(l, _)| splitting_type(l, d) == Splitting::Split);
    let minus = factorize(n_minus);
    let minus_inert = minus
        .iter()
        .all(|&(l, _)| splitting_type(l, d) == Splitting::Inert);
    let squarefree = minus.iter().all(|&(_, e)| e == 1);
    plus_split && minus_inert && squarefree && minus.len() % 2 == 1
}

/// Validate (D, p, N) with an optional explicit N = N⁺·N⁻.
/// Only clauses decidable from the setup are enforced here.
pub fn validate_setup(
    d: i64,
    p: u64,
    level: u64,
    factorization: Option<(u64, u64)>,
) -> Result<QuadSetup> {
    if p == 2 || !crate::arith::is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    let report = setup_report(d, p, level, factorization, None)?;
    let failed: Vec<Clause> = report
        .into_iter()
        .filter(|(_, v)| *v == Verdict::Fail)
        .map(|(c, _)| c)
        .collect();
    if !failed.is_empty() {
        return Err(Error::InvalidSetup(failed));
    }
    let (n_plus, n_minus) = factorization.unwrap_or_else(|| default_factorization(d, level));
    Ok(QuadSetup {
        d,
        p,
        level,
        n_plus,
        n_minus,
    })
}

/// Which prime above p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    P,
    PBar,
}

/// The embeddings ι_𝔭, ι_𝔭̄ : O_K → Z_p at a fixed precision.
///
/// √D is sent to the root of X² − D whose residue mod p is the smaller one in [0, p);
/// 𝔭 is the kernel of ι_𝔭 mod p.
#[derive(Clone, Debug)]
pub struct Embedding {
    field: QuadField,
    ring: Zp,
    sqrt_d: PadicInt,
    half: PadicInt,
}

impl Embedding {
    pub fn new(field: QuadField, ring: &Zp) -> Result<Embedding> {
        let p = ring.p();
        if field.splitting(p) != Splitting::Split {
            return Err(Error::NotSplit(p));
        }
        let d = field.d;
        let r0 = (0..p)
            .find(|&r| (r as i128 * r as i128 - d as i128).rem_euclid(p as i128) == 0)
            .ok_or(Error::NotSplit(p))?;
        let dd = ring.elem(d);
        let mut r = ring.elem(r0);
        for _ in 0..(ring.prec() + 2) {
            let f = &(&r * &r) - &dd;
            if f.is_zero() {
                break;
            }
            r = &r - &f.div(&(&r + &r))?;
        }
        let half = ring.elem(2).inv()?;
        Ok(Embedding {
            field,
            ring: ring.clone(),
            sqrt_d: r,
            half,
        })
    }

    pub fn ring(&self) -> &Zp {
        &self.ring
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn sqrt_d(&self) -> &PadicInt {
        &self.sqrt_d
    }

    pub fn embed(&self, x: &QuadElem, place: Place) -> PadicInt {
        let (a, b) = x.half_coords();
        let r = match place {
            Place::P => self.sqrt_d.clone(),
            Place::PBar => -&self.sqrt_d,
        };
        let s = &self.ring.elem(BigInt::from(a)) + &(&self.ring.elem(BigInt::from(b)) * &r);
        &s * &self.half
    }

    /// Whether the prime 𝔭 (or 𝔭̄) divides the ideal.
    pub fn divisible_by_place(&self, a: &QuadIdeal, place: Place) -> bool {
        !self.embed(a.generator(), place).is_unit()
    }

    /// x_𝔞 ∈ Z_p with the image of 𝔞 in Γ⁻ equal to γ₋^{x_𝔞}, for 𝔞 prime to p.
    /// Computed as log⟨ι_𝔭(α)/ι_𝔭(ᾱ)⟩ / log(1+p); the division by p costs one digit.
    pub fn frobenius_exponent(&self, a: &QuadIdeal) -> Result<PadicInt> {
        let g = a.generator();
        let x = self.embed(g, Place::P);
        let y = self.embed(g, Place::PBar);
        if !x.is_unit() || !y.is_unit() {
            return Err(Error::RamifiedInTower);
        }
        let u = one_unit_part(&x.div(&y)?)?;
        let lu = one_unit_log(&u)?.div_p_power(1)?;
        let lg = one_unit_log(&self.ring.elem(1 + self.ring.p()))?.div_p_power(1)?;
        lu.div(&lg)
    }
}
