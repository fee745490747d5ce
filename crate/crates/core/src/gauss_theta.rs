//! Gauss sums of characters mod p^n and theta series of anticyclotomic characters.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, kronecker};
use crate::cyclotomic::{CycElem, Level};
use crate::error::{Error, Result};
use crate::hecke::{AnticycloChar, DirichletChar};
use crate::quad::QuadIdeal;

/// Σ_{a ∈ (Z/p^n)^×} ε(a)·ζ_{p^n}^{−a}, with ζ_{p^n} = ζ_m^t for the level m = t·p^n.
pub fn local_gauss_sum(eps: &DirichletChar) -> Result<CycElem> {
    if !eps.is_primitive() {
        return Err(Error::ConductorMismatch);
    }
    let level = eps.level();
    if eps.n() == 0 {
        return Ok(CycElem::one(level));
    }
    let m = level.order() as i64;
    let t = level.tame as i64;
    let mut raw = vec![BigInt::zero(); m as usize];
    for a in 1..eps.modulus() as i64 {
        if let Some(e) = eps.exponent(a) {
            let i = level.root_index(eps.phi(), e as i64).expect("value in own level") as i64;
            let k = (i - t * a).rem_euclid(m);
            raw[k as usize] += 1;
        }
    }
    Ok(CycElem::from_powers(level, raw))
}

/// 𝔤(χ) = 𝔤(ε)·𝔤(ε^{-1}) as an exact element.
pub fn global_gauss_sum_exact(chi: &AnticycloChar) -> Result<CycElem> {
    let e = chi.eps();
    local_gauss_sum(e)?.mul(&local_gauss_sum(&e.inverse())?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalGauss {
    pub value: BigInt,
    pub sign: i8,
}

/// 𝔤(χ) as a rational integer ±p^n; errors if the exact value is anything else.
pub fn global_gauss_sum(chi: &AnticycloChar) -> Result<GlobalGauss> {
    global_gauss_sum_of(chi.eps())
}

/// 𝔤(ε)·𝔤(ε^{-1}) as ±p^n; depends on ε alone.
pub fn global_gauss_sum_of(eps: &DirichletChar) -> Result<GlobalGauss> {
    let g = local_gauss_sum(eps)?.mul(&local_gauss_sum(&eps.inverse())?)?;
    let v = g
        .as_integer()
        .ok_or_else(|| Error::Invalid(format!("Gauss sum is not rational: {g}")))?;
    let pn = BigInt::from(eps.p()).pow(eps.n());
    let sign = if v == pn {
        1
    } else if v == -pn.clone() {
        -1
    } else {
        return Err(Error::Invalid(format!("Gauss sum {v} is not ±{pn}")));
    };
    Ok(GlobalGauss { value: v, sign })
}

/// Sum of roots of unity Σ c_e ζ_o^e in the group ring of Z/o.
/// Equality is decided in Z[ζ_o] (after reduction), with a group-ring fast path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSum {
    order: u64,
    c: Vec<i64>,
}

impl RootSum {
    pub fn zero(order: u64) -> RootSum {
        RootSum {
            order,
            c: vec![0; order as usize],
        }
    }

    pub fn root(order: u64, e: u64) -> RootSum {
        let mut r = RootSum::zero(order);
        r.c[(e % order) as usize] = 1;
        r
    }

    pub fn integer(order: u64, k: i64) -> RootSum {
        let mut r = RootSum::zero(order);
        r.c[0] = k;
        r
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn add(&self, o: &RootSum) -> RootSum {
        RootSum {
            order: self.order,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &RootSum) -> RootSum {
        RootSum {
            order: self.order,
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> RootSum {
        RootSum {
            order: self.order,
            c: self.c.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, o: &RootSum) -> RootSum {
        let n = self.order as usize;
        let mut c = vec![0i64; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                if b != 0 {
                    c[(i + j) % n] += a * b;
                }
            }
        }
        RootSum { order: self.order, c }
    }

    /// Image in Z[ζ_m]; every occurring root must lie in the level.
    pub fn to_cyc(&self, level: Level) -> CycElem {
        let mut raw = vec![BigInt::zero(); level.order() as usize];
        for (e, &c) in self.c.iter().enumerate() {
            if c != 0 {
                let i = level
                    .root_index(self.order, e as i64)
                    .expect("root of unity outside level");
                raw[i] += c;
            }
        }
        CycElem::from_powers(level, raw)
    }

    /// Zero in Z[ζ_o].
    pub fn is_zero_in(&self, level: Level) -> bool {
        self.c.iter().all(|&x| x == 0) || self.to_cyc(level).is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct ThetaExpansion {
    chi: AnticycloChar,
    coeffs: Vec<RootSum>,
    /// Weight m + 1.
    pub weight: i32,
    /// |D|·p^{2n}.
    pub level: u64,
    pub cusp: bool,
}

/// b_n = Σ_{N(𝔞)=n} χ(𝔞) for 0 ≤ n ≤ bound; b_0 = 0.
pub fn theta_coeffs(chi: &AnticycloChar, bound: u64) -> Result<ThetaExpansion> {
    if bound < 1 {
        return Err(Error::OutOfRange("theta bound must be >= 1".into()));
    }
    if chi.m() != 0 {
        return Err(Error::Invalid(
            "theta expansion is implemented for infinity type m = 0".into(),
        ));
    }
    let field = chi.setup().field();
    let phi = chi.eps().phi();
    let coeffs: Vec<RootSum> = (0..=bound)
        .into_par_iter()
        .map(|n| {
            if n == 0 {
                return RootSum::zero(phi);
            }
            coefficient_from_ideals(chi, &field.ideals_of_norm(n))
        })
        .collect();
    let eps = chi.eps();
    let cusp = !(chi.m() == 0 && (2 * eps.generator_image()) % phi == 0);
    let level = chi.setup().d.unsigned_abs() * chi.setup().p.pow(2 * chi.n());
    Ok(ThetaExpansion {
        chi: chi.clone(),
        coeffs,
        weight: chi.m() + 1,
        level,
        cusp,
    })
}

fn coefficient_from_ideals(chi: &AnticycloChar, ideals: &[QuadIdeal]) -> RootSum {
    let phi = chi.eps().phi();
    let mut s = RootSum::zero(phi);
    for a in ideals {
        if let Some(e) = chi.value_exponent(a) {
            s.c[e as usize] += 1;
        }
    }
    s
}

/// b_n for a single (possibly large) n, from the prime factorization of the ideals.
pub fn theta_coefficient(chi: &AnticycloChar, n: u64) -> RootSum {
    if n == 0 {
        return RootSum::zero(chi.eps().phi());
    }
    coefficient_from_ideals(chi, &chi.setup().field().ideals_of_norm_factored(n))
}

impl ThetaExpansion {
    pub fn bound(&self) -> u64 {
        self.coeffs.len() as u64 - 1
    }

    pub fn character(&self) -> &AnticycloChar {
        &self.chi
    }

    pub fn coeff(&self, n: u64) -> &RootSum {
        &self.coeffs[n as usize]
    }

    pub fn coeff_cyc(&self, n: u64) -> CycElem {
        self.coeffs[n as usize].to_cyc(self.chi.level())
    }

    /// ψ(x) = χ_D(x)·χ((x)) for x > 0; zero unless gcd(x, level) = 1.
    pub fn nebentypus(&self, x: u64) -> i64 {
        if num_integer::gcd(x, self.level) != 1 {
            return 0;
        }
        // χ is trivial on rational ideals prime to p
        kronecker(self.chi.setup().d, x) as i64
    }

    /// Hecke relations at ℓ: b_{ℓ^{r+1}} = b_ℓ b_{ℓ^r} − ψ(ℓ)ℓ^m b_{ℓ^{r−1}} and
    /// b_{ℓ^r n'} = b_{ℓ^r} b_{n'} for ℓ ∤ n', every index within the bound, r ≤ r_max.
    pub fn hecke_check(&self, l: u64, r_max: u32) -> Result<HeckeReport> {
        if !is_prime(l) || self.level % l == 0 {
            return Err(Error::BadPrime(l));
        }
        let lv = self.chi.level();
        let b = self.bound();
        let psi_l = self.nebentypus(l) * (l as i64).pow(self.chi.m() as u32);
        let mut checked = 0u64;
        let mut powers = vec![1u64];
        while powers.len() as u32 <= r_max + 1 {
            match powers.last().unwrap().checked_mul(l) {
                Some(x) if x <= b => powers.push(x),
                _ => break,
            }
        }
        for r in 1..powers.len() {
            if r >= 2 {
                let lhs = self.coeff(powers[r]);
                let rhs = self
                    .coeff(l)
                    .mul(self.coeff(powers[r - 1]))
                    .sub(&self.coeff(powers[r - 2]).scale(psi_l));
                checked += 1;
                if !lhs.sub(&rhs).is_zero_in(lv) {
                    return Ok(HeckeReport::fail(checked, format!("b_{} recursion at l={l}", powers[r])));
                }
            }
            let q = powers[r];
            for n2 in 2..=b / q {
                if n2 % l == 0 {
                    continue;
                }
                let lhs = self.coeff(q * n2);
                let rhs = self.coeff(q).mul(self.coeff(n2));
                checked += 1;
                if !lhs.sub(&rhs).is_zero_in(lv) {
                    return Ok(HeckeReport::fail(
                        checked,
                        format!("b_{} != b_{q} b_{n2}", q * n2),
                    ));
                }
            }
        }
        Ok(HeckeReport {
            pass: true,
            checked,
            counterexample: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeckeReport {
    pub pass: bool,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl HeckeReport {
    fn fail(checked: u64, what: String) -> HeckeReport {
        HeckeReport {
            pass: false,
            checked,
            counterexample: Some(what),
        }
    }
}

/// Σ_{d | n} (D | d): number of ideals of norm n.
pub fn divisor_sum_count(d: i64, n: u64) -> i64 {
    crate::arith::divisors(n)
        .into_iter()
        .map(|x| kronecker(d, x) as i64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::validate_setup;

    #[test]
    fn quadratic_gauss_sum_squares_to_p() {
        let eps = DirichletChar::quadratic(5).unwrap();
        let g = local_gauss_sum(&eps).unwrap();
        assert_eq!(g.mul(&g).unwrap().as_integer(), Some(5.into()));
    }

    #[test]
    fn trivial_theta() {
        let s = validate_setup(-4, 5, 3, None).unwrap();
        let th = theta_coeffs(&AnticycloChar::trivial(&s), 10).unwrap();
        let b: Vec<i64> = (0..=10)
            .map(|n| th.coeff_cyc(n).as_integer().unwrap().try_into().unwrap())
            .collect();
        assert_eq!(b, vec![0, 1, 1, 0, 1, 2, 0, 0, 1, 1, 2]);
        assert!(!th.cusp);
    }
}
