//! Dirichlet characters mod p^n and the anticyclotomic Hecke characters built from them.

use serde::{Deserialize, Serialize};

use num_integer::Integer;

use crate::arith::{discrete_log_table, euler_phi, primitive_root_prime_power};
use crate::cyclotomic::{CycElem, Level};
use crate::error::{Error, Result};
use crate::padic::PadicInt;
use crate::quad::{Embedding, Place, QuadElem, QuadIdeal, QuadSetup};

/// Character of (Z/p^n)^× determined by ε(g) = ζ_φ^j, g the least primitive root mod p^n,
/// φ = φ(p^n) and ζ_φ = ζ_m^{m/φ} in any level m divisible by φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletChar {
    p: u64,
    n: u32,
    j: u64,
    modulus: u64,
    phi: u64,
    log: Vec<Option<u64>>,
}

impl DirichletChar {
    pub fn new(p: u64, n: u32, j: u64) -> Result<DirichletChar> {
        if p == 2 || !crate::arith::is_prime(p) {
            return Err(Error::UnsupportedPrime(p));
        }
        let modulus = p.pow(n);
        let phi = euler_phi(modulus);
        let log = if n == 0 {
            vec![Some(0)]
        } else {
            discrete_log_table(primitive_root_prime_power(p, n), modulus)
        };
        Ok(DirichletChar {
            p,
            n,
            j: j % phi,
            modulus,
            phi,
            log,
        })
    }

    pub fn trivial(p: u64) -> DirichletChar {
        DirichletChar::new(p, 0, 0).expect("trivial character")
    }

    /// Legendre symbol mod p.
    pub fn quadratic(p: u64) -> Result<DirichletChar> {
        DirichletChar::new(p, 1, (p - 1) / 2)
    }

    /// All characters mod p^n.
    pub fn all(p: u64, n: u32) -> Result<Vec<DirichletChar>> {
        let phi = euler_phi(p.pow(n));
        (0..phi).map(|j| DirichletChar::new(p, n, j)).collect()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn generator_image(&self) -> u64 {
        self.j
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn order(&self) -> u64 {
        self.phi / self.j.gcd(&self.phi)
    }

    /// Prime-to-p part of the order.
    pub fn tame_order(&self) -> u64 {
        let mut o = self.order();
        while o % self.p == 0 {
            o /= self.p;
        }
        o
    }

    /// Smallest cyclotomic level holding the values and ζ_{p^n}.
    pub fn level(&self) -> Level {
        Level::new(self.p, self.n, self.tame_order()).expect("tame order divides p-1")
    }

    /// Conductor is exactly p^n.
    pub fn is_primitive(&self) -> bool {
        match self.n {
            0 => true,
            1 => self.j != 0,
            n => self.order() % self.p.pow(n - 1) == 0,
        }
    }

    /// e with ε(a) = ζ_φ^e, or None if p | a.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        let r = a.rem_euclid(self.modulus as i64) as usize;
        let l = self.log[r]?;
        Some(((self.j as u128 * l as u128) % self.phi as u128) as u64)
    }

    /// ε(a) as a root of unity in the given level (0 if p | a and n ≥ 1).
    pub fn value_in(&self, level: Level, a: i64) -> Result<CycElem> {
        match self.exponent(a) {
            Some(e) => CycElem::root_of_unity(level, self.phi, e as i64),
            None => Ok(CycElem::zero(level)),
        }
    }

    pub fn value(&self, a: i64) -> CycElem {
        self.value_in(self.level(), a).expect("own level")
    }

    pub fn inverse(&self) -> DirichletChar {
        DirichletChar::new(self.p, self.n, (self.phi - self.j) % self.phi).unwrap()
    }

    /// Exponent of ε(1+p) as a power of ζ_φ; it is a p-power root of unity.
    pub fn wild_exponent(&self) -> u64 {
        if self.n == 0 {
            return 0;
        }
        self.exponent(1 + self.p as i64).expect("1+p is a unit")
    }

    /// The character restricted to the Teichmüller roots is trivial.
    pub fn is_wild(&self) -> bool {
        self.tame_order() == 1
    }
}

/// Serializable description {D, p, n, m, j}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSpec {
    #[serde(rename = "D")]
    pub d: i64,
    pub p: u64,
    pub n: u32,
    pub m: i32,
    pub generator_image: u64,
}

/// χ((α)) = ε(ι_𝔭(α))·ε(ι_𝔭̄(α))^{-1} on ideals prime to p, infinity type (m, −m).
#[derive(Clone, Debug)]
pub struct AnticycloChar {
    setup: QuadSetup,
    eps: DirichletChar,
    m: i32,
    emb: Embedding,
}

impl AnticycloChar {
    pub fn build(setup: &QuadSetup, eps: DirichletChar, m: i32) -> Result<AnticycloChar> {
        if eps.p() != setup.p {
            return Err(Error::PrimeMismatch(eps.p(), setup.p));
        }
        let emb = setup.embedding(eps.n().max(1))?;
        let chi = AnticycloChar {
            setup: setup.clone(),
            eps,
            m,
            emb,
        };
        for u in setup.field().units() {
            if chi.finite_exponent(&u).map_or(true, |e| e != 0) {
                return Err(Error::UnitCheck(u.to_string()));
            }
        }
        Ok(chi)
    }

    pub fn trivial(setup: &QuadSetup) -> AnticycloChar {
        AnticycloChar::build(setup, DirichletChar::trivial(setup.p), 0).expect("trivial")
    }

    pub fn from_spec(setup: &QuadSetup, spec: &CharSpec) -> Result<AnticycloChar> {
        if spec.d != setup.d || spec.p != setup.p {
            return Err(Error::Invalid("character spec does not match setup".into()));
        }
        AnticycloChar::build(
            setup,
            DirichletChar::new(spec.p, spec.n, spec.generator_image)?,
            spec.m,
        )
    }

    pub fn spec(&self) -> CharSpec {
        CharSpec {
            d: self.setup.d,
            p: self.setup.p,
            n: self.eps.n(),
            m: self.m,
            generator_image: self.eps.generator_image(),
        }
    }

    /// Every primitive character of conductor p^n with infinity type m passing the unit check.
    pub fn admissible(setup: &QuadSetup, n: u32, m: i32) -> Result<Vec<AnticycloChar>> {
        let mut out = Vec::new();
        for eps in DirichletChar::all(setup.p, n)? {
            if !eps.is_primitive() {
                continue;
            }
            match AnticycloChar::build(setup, eps, m) {
                Ok(c) => out.push(c),
                Err(Error::UnitCheck(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }

    pub fn setup(&self) -> &QuadSetup {
        &self.setup
    }

    pub fn eps(&self) -> &DirichletChar {
        &self.eps
    }

    pub fn n(&self) -> u32 {
        self.eps.n()
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn level(&self) -> Level {
        self.eps.level()
    }

    fn residues(&self, x: &QuadElem) -> (i64, i64) {
        let md = self.eps.modulus() as i64;
        let r = |pl| {
            let v = self.emb.embed(x, pl).reduce_to(self.eps.n().max(1));
            (v.residue() % num_bigint::BigInt::from(md.max(1)))
                .try_into()
                .unwrap_or(0i64)
        };
        (r(Place::P), r(Place::PBar))
    }

    /// e with χ((x)) = ζ_φ^e, or None when p divides the norm of x and n ≥ 1.
    fn finite_exponent(&self, x: &QuadElem) -> Option<u64> {
        if self.eps.n() == 0 {
            return Some(0);
        }
        let (a, b) = self.residues(x);
        let ea = self.eps.exponent(a)?;
        let eb = self.eps.exponent(b)?;
        Some((ea + self.eps.phi() - eb) % self.eps.phi())
    }

    /// Finite-order part χ(𝔞); zero on ideals not prime to the conductor.
    pub fn value_on_ideal(&self, a: &QuadIdeal) -> CycElem {
        match self.finite_exponent(a.generator()) {
            Some(e) => CycElem::root_of_unity(self.level(), self.eps.phi(), e as i64).unwrap(),
            None => CycElem::zero(self.level()),
        }
    }

    /// Exponent e with χ(𝔞) = ζ_φ^e, None if 𝔞 meets the conductor.
    pub fn value_exponent(&self, a: &QuadIdeal) -> Option<u64> {
        self.finite_exponent(a.generator())
    }

    /// χ̂(γ₋) = ε(1+p): a root of unity of p-power order.
    pub fn avatar_on_gamma(&self) -> CycElem {
        CycElem::root_of_unity(self.level(), self.eps.phi(), self.eps.wild_exponent() as i64)
            .unwrap()
    }

    /// Order of χ̂(γ₋).
    pub fn avatar_order(&self) -> u64 {
        let phi = self.eps.phi();
        let e = self.eps.wild_exponent();
        phi / e.gcd(&phi)
    }

    /// χ̂(γ₋^x) = χ̂(γ₋)^{x mod p^{n−1}}, exact since χ̂(γ₋) has order dividing p^{n−1}.
    pub fn avatar_value(&self, x: &PadicInt) -> Result<CycElem> {
        let ord = self.avatar_order();
        if ord == 1 {
            return Ok(CycElem::one(self.level()));
        }
        let digits = crate::arith::floor_log(ord, self.setup.p);
        if x.prec() < digits {
            return Err(Error::InvalidPrecision(format!(
                "exponent known to {} digits, {} needed",
                x.prec(),
                digits
            )));
        }
        let r = x.reduce_to(digits);
        let e: u64 = r.residue().try_into().expect("small residue");
        Ok(self.avatar_on_gamma().pow(e))
    }

    /// Exponent t with ε(ω(ι_𝔭(α)/ι_𝔭̄(α))) = ζ_φ^t: the part of χ(v) that γ₋ does not see.
    pub fn tame_exponent_on(&self, a: &QuadIdeal) -> Result<u64> {
        let full = self.value_exponent(a).ok_or(Error::RamifiedInTower)?;
        let x = self.emb.frobenius_exponent(a)?;
        let phi = self.eps.phi();
        let wild = self.eps.wild_exponent();
        let k = if self.eps.n() <= 1 {
            0
        } else {
            let digits = self.eps.n() - 1;
            let r: u64 = x.reduce_to(digits).residue().try_into().unwrap();
            r
        };
        let w = ((wild as u128 * k as u128) % phi as u128) as u64;
        Ok((full + phi - w) % phi)
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }
}
