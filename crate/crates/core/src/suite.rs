//! Property checks over grids of setups, characters and random series.
//! Each check returns a tally with the first counterexample.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::compare::{compare, default_grid, Pair};
use crate::cyclotomic::PadicCyc;
use crate::error::Result;
use crate::euler::{cross_path_check, rankin_selberg_check_with, HeckeFormData};
use crate::gauss_theta::{global_gauss_sum_of, local_gauss_sum, theta_coeffs};
use crate::hecke::{AnticycloChar, DirichletChar};
use crate::iwasawa::{
    mu_lambda, same_ideal, specialization_separates, specialize_arith, twist, wprep,
    GammaSeries, PowerSeries1, PowerSeries2,
};
use crate::padic::{PrecisionPolicy, Zp};
use crate::quad::{splitting_type, validate_setup, QuadSetup, Splitting};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub checked: u64,
    pub failed: u64,
    pub counterexample: Option<String>,
}

impl PropertyResult {
    pub fn new(name: &str) -> PropertyResult {
        PropertyResult {
            name: name.to_string(),
            checked: 0,
            failed: 0,
            counterexample: None,
        }
    }

    pub fn pass(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(what());
            }
        }
    }

    /// Fold per-item outcomes, keeping the first failure in input order.
    fn from_outcomes(name: &str, outcomes: Vec<(bool, String)>) -> PropertyResult {
        let mut r = PropertyResult::new(name);
        for (ok, what) in outcomes {
            r.record(ok, || what);
        }
        r
    }

    fn merge(&mut self, o: PropertyResult) {
        self.checked += o.checked;
        self.failed += o.failed;
        if self.counterexample.is_none() {
            self.counterexample = o.counterexample;
        }
    }
}

/// A form together with an imaginary quadratic setup it satisfies.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub form: HeckeFormData,
    pub setup: QuadSetup,
}

impl Scenario {
    pub fn new(label: &str, d: i64) -> Result<Scenario> {
        let form = HeckeFormData::builtin(label)?;
        let setup = validate_setup(d, form.p, form.level, None)?;
        Ok(Scenario { form, setup })
    }

    pub fn name(&self) -> String {
        format!("{}/D={}/p={}", self.form.label, self.setup.d, self.setup.p)
    }
}

/// 11a with Q(i) at 5, 14a with Q(√−3) at 13, and the weight-4 level-5 form with Q(√−3) at 7.
pub fn standard_scenarios() -> Result<Vec<Scenario>> {
    Ok(vec![
        Scenario::new("11a", -4)?,
        Scenario::new("14a", -3)?,
        Scenario::new("5.4.a.a", -3)?,
    ])
}

/// Characters of a scenario: the trivial one and every admissible primitive one of
/// conductor p^n for 1 ≤ n ≤ n_max.
pub fn scenario_chars(s: &Scenario, n_max: u32) -> Result<Vec<AnticycloChar>> {
    let mut out = vec![AnticycloChar::trivial(&s.setup)];
    out.extend(default_grid(&s.setup, n_max)?);
    Ok(out)
}

/// Characters mod p^n entering the Gauss-sum grid: the admissible ones when p splits,
/// every primitive one otherwise (units ±1 impose no condition).
pub fn gauss_grid_chars(d: i64, p: u64, n: u32) -> Result<Vec<DirichletChar>> {
    if splitting_type(p, d) == Splitting::Split {
        let setup = QuadSetup {
            d,
            p,
            level: 1,
            n_plus: 1,
            n_minus: 1,
        };
        Ok(AnticycloChar::admissible(&setup, n, 0)?
            .into_iter()
            .map(|c| c.eps().clone())
            .collect())
    } else {
        Ok(DirichletChar::all(p, n)?
            .into_iter()
            .filter(|e| e.is_primitive())
            .collect())
    }
}

fn gauss_points(ds: &[i64], ps: &[u64], ns: &[u32]) -> Result<Vec<(i64, DirichletChar)>> {
    let mut pts = Vec::new();
    for &d in ds {
        for &p in ps {
            for &n in ns {
                for e in gauss_grid_chars(d, p, n)? {
                    pts.push((d, e));
                }
            }
        }
    }
    Ok(pts)
}

/// 𝔤(χ) is a rational integer of absolute value p^n.
pub fn gauss_grid(ds: &[i64], ps: &[u64], ns: &[u32]) -> Result<PropertyResult> {
    let pts = gauss_points(ds, ps, ns)?;
    let out = pts
        .par_iter()
        .map(|(d, e)| {
            let ok = global_gauss_sum_of(e).is_ok();
            (ok, format!("D={d} p={} n={} j={}", e.p(), e.n(), e.generator_image()))
        })
        .collect();
    Ok(PropertyResult::from_outcomes("gauss_sum_is_plus_minus_p_n", out))
}

/// 𝔤(ε)·𝔤(ε^{-1}) = ε(−1)·p^n exactly.
pub fn martinet_grid(ds: &[i64], ps: &[u64], ns: &[u32]) -> Result<PropertyResult> {
    let pts = gauss_points(ds, ps, ns)?;
    let out = pts
        .par_iter()
        .map(|(d, e)| {
            let what = format!("D={d} p={} n={} j={}", e.p(), e.n(), e.generator_image());
            let ok = (|| -> Result<bool> {
                let lv = e.level();
                let lhs = local_gauss_sum(e)?.mul(&local_gauss_sum(&e.inverse())?)?;
                let rhs = e.value_in(lv, -1)?.scale(&BigInt::from(e.p()).pow(e.n()));
                Ok(lhs.sub(&rhs)?.is_zero())
            })()
            .unwrap_or(false);
            (ok, what)
        })
        .collect();
    Ok(PropertyResult::from_outcomes("martinet_identity", out))
}

/// Primes q < bound not dividing p·N·D.
pub fn good_primes(s: &Scenario, bound: u64) -> Vec<u64> {
    (2..bound)
        .filter(|&q| {
            is_prime(q)
                && q != s.setup.p
                && s.form.level % q != 0
                && s.setup.d.unsigned_abs() % q != 0
        })
        .collect()
}

/// Rankin–Selberg identity at every good q < bound for every character. With a poison
/// (ℓ, δ), the Dirichlet-series side uses a_ℓ + δ.
pub fn rankin_grid(
    scenarios: &[Scenario],
    n_max: u32,
    bound: u64,
    poison: Option<(u64, i64)>,
) -> Result<PropertyResult> {
    let mut jobs = Vec::new();
    for s in scenarios {
        let series_form = match poison {
            Some((l, d)) => s.form.with_eigenvalue(l, s.form.a(l)? + d),
            None => s.form.clone(),
        };
        for chi in scenario_chars(s, n_max)? {
            for q in good_primes(s, bound) {
                jobs.push((s.clone(), series_form.clone(), chi.clone(), q));
            }
        }
    }
    let out = jobs
        .par_iter()
        .map(|(s, sf, chi, q)| {
            let ok = rankin_selberg_check_with(&s.form, sf, chi, *q)
                .map(|r| r.pass)
                .unwrap_or(false);
            (ok, format!("{} chi={:?} q={q}", s.name(), chi.spec()))
        })
        .collect();
    Ok(PropertyResult::from_outcomes("rankin_selberg", out))
}

/// Perturbing a_q on the series side must break the identity at q.
pub fn rankin_mutation(scenarios: &[Scenario], n_max: u32, bound: u64) -> Result<PropertyResult> {
    let mut jobs = Vec::new();
    for s in scenarios {
        for chi in scenario_chars(s, n_max)?.into_iter().take(2) {
            for q in good_primes(s, bound) {
                jobs.push((s.clone(), chi.clone(), q));
            }
        }
    }
    let out = jobs
        .par_iter()
        .map(|(s, chi, q)| {
            let bad = s.form.with_eigenvalue(*q, s.form.a(*q).unwrap_or(0) + 1);
            let detected = rankin_selberg_check_with(&s.form, &bad, chi, *q)
                .map(|r| !r.pass)
                .unwrap_or(false);
            (detected, format!("undetected mutation {} chi={:?} q={q}", s.name(), chi.spec()))
        })
        .collect();
    Ok(PropertyResult::from_outcomes("rankin_mutation_detected", out))
}

/// Hecke recursion and coprime multiplicativity of b_n for n ≤ bound, at every prime
/// ℓ ≤ bound not dividing the level.
pub fn theta_hecke(scenarios: &[Scenario], n_max: u32, bound: u64) -> Result<PropertyResult> {
    let mut chars = Vec::new();
    for s in scenarios {
        for chi in scenario_chars(s, n_max)? {
            chars.push((s.name(), chi));
        }
    }
    let parts: Vec<PropertyResult> = chars
        .par_iter()
        .map(|(name, chi)| -> Result<PropertyResult> {
            let th = theta_coeffs(chi, bound)?;
            let mut r = PropertyResult::new("theta_hecke");
            for l in (2..=bound).filter(|&l| is_prime(l) && th.level % l != 0) {
                let rep = th.hecke_check(l, 64)?;
                r.checked += rep.checked.max(1) - 1;
                r.record(rep.pass, || {
                    format!("{name} chi={:?}: {}", chi.spec(), rep.counterexample.clone().unwrap_or_default())
                });
            }
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let mut out = PropertyResult::new("theta_hecke");
    for p in parts {
        out.merge(p);
    }
    Ok(out)
}

/// Characters for which the exact cross-path identity is expected: trivial and wild ones.
pub fn cross_path_chars(s: &Scenario, n_max: u32) -> Result<Vec<AnticycloChar>> {
    Ok(scenario_chars(s, n_max)?
        .into_iter()
        .filter(|c| c.n() == 0 || c.eps().is_wild())
        .collect())
}

/// χ̂(𝓔_ℓ)·L_ℓ(f,χ,1) = 1 for every ℓ | N·D.
pub fn cross_path_grid(scenarios: &[Scenario], n_max: u32) -> Result<PropertyResult> {
    let mut jobs = Vec::new();
    for s in scenarios {
        let bad: Vec<u64> = crate::arith::factorize(s.form.level * s.setup.d.unsigned_abs())
            .into_iter()
            .map(|(l, _)| l)
            .collect();
        for chi in cross_path_chars(s, n_max)? {
            for &l in &bad {
                jobs.push((s.clone(), chi.clone(), l));
            }
        }
    }
    let out = jobs
        .par_iter()
        .map(|(s, chi, l)| {
            let ok = cross_path_check(&s.form, chi, *l).map(|r| r.pass).unwrap_or(false);
            (ok, format!("{} chi={:?} l={l}", s.name(), chi.spec()))
        })
        .collect();
    Ok(PropertyResult::from_outcomes("euler_cross_path", out))
}

fn rng_for(seed: u64, i: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn random_residue(rng: &mut ChaCha8Rng, ring: &Zp) -> BigInt {
    // enough random bits, then reduce
    let mut x = BigInt::from(0);
    for _ in 0..(ring.prec() as usize * 64 / 60 + 1) {
        x = (x << 60) + BigInt::from(rng.gen::<u64>() >> 4);
    }
    ring.reduce(&x)
}

/// p^μ·(Σ c_i T^i) with p | c_i for i < λ and c_λ a unit.
pub fn random_series(rng: &mut ChaCha8Rng, ring: &Zp, m: usize, mu: u32, lambda: usize) -> PowerSeries1 {
    let p = BigInt::from(ring.p());
    let pm = p.pow(mu);
    let coeffs: Vec<BigInt> = (0..m)
        .map(|i| {
            let r = random_residue(rng, ring);
            let c = if i < lambda {
                &r * &p
            } else if i == lambda {
                let u = &r - (&r % &p) + BigInt::from(rng.gen_range(1..ring.p()));
                u
            } else {
                r
            };
            ring.reduce(&(c * &pm))
        })
        .collect();
    PowerSeries1::from_coeffs(ring, m, coeffs)
}

fn random_unit_series(rng: &mut ChaCha8Rng, ring: &Zp, m: usize) -> PowerSeries1 {
    random_series(rng, ring, m, 0, 0)
}

/// Round trip f = p^μ·u·g, invariance of (μ, λ, g) under unit multiplication, and
/// additivity of (μ, λ) under products, on `samples` random series.
pub fn weierstrass_suite(p: u64, policy: PrecisionPolicy, samples: usize, seed: u64) -> Result<PropertyResult> {
    let ring = Zp::new(p, policy.digits)?;
    let m = policy.series_terms;
    let out = (0..samples)
        .into_par_iter()
        .map(|i| -> (bool, String) {
            let mut rng = rng_for(seed, i);
            let mu = rng.gen_range(0..3u32);
            let lam = rng.gen_range(0..(m / 4).max(1));
            let f = random_series(&mut rng, &ring, m, mu, lam);
            let what = format!("sample {i} (N={}, M={m}, mu={mu}, lambda={lam})", policy.digits);
            let ok = (|| -> Result<bool> {
                let w = wprep(&f)?;
                let roundtrip = w.recombine(&ring) == f && w.mu == mu && w.lambda == lam;
                let u = random_unit_series(&mut rng, &ring, m);
                let uf = u.mul(&f);
                let unit_inv = same_ideal(&f, &uf)?;
                let mu2 = rng.gen_range(0..2u32);
                let lam2 = rng.gen_range(0..(m / 4).max(1));
                let g = random_series(&mut rng, &ring, m, mu2, lam2);
                let additive = mu_lambda(&f.mul(&g))? == (mu + mu2, lam + lam2);
                Ok(roundtrip && unit_inv && additive)
            })()
            .unwrap_or(false);
            (ok, what)
        })
        .collect();
    Ok(PropertyResult::from_outcomes("weierstrass", out))
}

fn random_one_unit(rng: &mut ChaCha8Rng, ring: &Zp) -> crate::padic::PadicInt {
    let r = random_residue(rng, ring);
    ring.elem(BigInt::from(1) + r * BigInt::from(ring.p()))
}

/// Tw_η(F)(ζ−1) = F(ηζ−1) at p-power roots of unity, and Tw_η∘Tw_{η^{-1}} = id.
pub fn twist_suite(p: u64, policy: PrecisionPolicy, samples: usize, seed: u64) -> Result<PropertyResult> {
    let ring = Zp::new(p, policy.digits)?;
    let m = policy.series_terms;
    let out = (0..samples)
        .into_par_iter()
        .map(|i| -> (bool, String) {
            let mut rng = rng_for(seed, i);
            let f = PowerSeries1::from_coeffs(&ring, m, (0..m).map(|_| random_residue(&mut rng, &ring)));
            let eta = random_one_unit(&mut rng, &ring);
            let n = rng.gen_range(1..=2u32);
            let e = rng.gen_range(1..p.pow(n)) as i64;
            let what = format!("sample {i} eta={eta} zeta=z_{{p^{n}}}^{e}");
            let ok = (|| -> Result<bool> {
                let tw = twist(&f, &eta)?;
                let back = twist(&tw, &eta.inv()?)?;
                let zeta = PadicCyc::zeta_pow(&ring, n, e);
                let one = PadicCyc::one(&ring, n);
                let lhs = tw.eval_cyc(&zeta.sub(&one));
                let rhs = f.eval_cyc(&zeta.scale(&eta).sub(&one));
                Ok(back == f && lhs == rhs)
            })()
            .unwrap_or(false);
            (ok, what)
        })
        .collect();
    Ok(PropertyResult::from_outcomes("twist_evaluation", out))
}

fn random_two_var(rng: &mut ChaCha8Rng, ring: &Zp, mw: usize, mt: usize) -> PowerSeries2 {
    let vals: Vec<Vec<BigInt>> = (0..mw)
        .map(|_| (0..mt).map(|_| random_residue(rng, ring)).collect())
        .collect();
    PowerSeries2::from_fn(ring, mw, mt, |i, j| vals[i][j].clone())
}

/// Projecting γ₊ ↦ 1 then specializing the weight agrees with specializing then setting S = 0.
pub fn specialization_diagram(p: u64, policy: PrecisionPolicy, samples: usize, seed: u64) -> Result<PropertyResult> {
    let ring = Zp::new(p, policy.digits)?;
    let (mw, mt) = (policy.weight_terms, policy.series_terms.min(12));
    let out = (0..samples)
        .into_par_iter()
        .map(|i| -> (bool, String) {
            let mut rng = rng_for(seed, i);
            let slices = rng.gen_range(1..4usize);
            let g = GammaSeries {
                slices: (0..slices).map(|_| random_two_var(&mut rng, &ring, mw, mt)).collect(),
            };
            let k = 2 + (p as u32 - 1) * rng.gen_range(0..4u32);
            let n = rng.gen_range(1..=2u32);
            let e = rng.gen_range(0..p.pow(n)) as i64;
            let what = format!("sample {i} k={k} zeta=z_{{p^{n}}}^{e}");
            let ok = (|| -> Result<bool> {
                let a = specialize_arith(&g.project_anticyclotomic(), k, n, e)?;
                let per_slice = g.specialize(k, n, e)?;
                // S ↦ 0 by Horner over the S-slices
                let mut b = per_slice.last().unwrap().clone();
                for s in per_slice.iter().rev().skip(1) {
                    b = crate::iwasawa::CycSeries {
                        c: s
                            .c
                            .iter()
                            .zip(&b.c)
                            .map(|(x, y)| x.add(&y.scale(&ring.zero())))
                            .collect(),
                    };
                }
                Ok(a == b)
            })()
            .unwrap_or(false);
            (ok, what)
        })
        .collect();
    Ok(PropertyResult::from_outcomes("specialization_diagram", out))
}

/// specialization_separates(F).zero agrees with F = 0 coefficientwise.
pub fn separation_suite(p: u64, policy: PrecisionPolicy, samples: usize, seed: u64) -> Result<PropertyResult> {
    let ring = Zp::new(p, policy.digits)?;
    let (mw, mt) = (policy.weight_terms, policy.series_terms.min(8));
    let out = (0..samples)
        .into_par_iter()
        .map(|i| -> (bool, String) {
            let mut rng = rng_for(seed, i);
            let f = match i % 4 {
                0 => PowerSeries2::zero(&ring, mw, mt),
                1 => random_two_var(&mut rng, &ring, mw, mt),
                _ => {
                    // a single coefficient of high valuation
                    let (a, b) = (rng.gen_range(0..mw), rng.gen_range(0..mt));
                    let v = rng.gen_range(0..policy.digits);
                    let c = BigInt::from(p).pow(v) * BigInt::from(rng.gen_range(1..p));
                    PowerSeries2::from_fn(&ring, mw, mt, |x, y| {
                        if (x, y) == (a, b) {
                            c.clone()
                        } else {
                            BigInt::from(0)
                        }
                    })
                }
            };
            let what = format!("sample {i}");
            let ok = specialization_separates(&f)
                .map(|s| s.zero == f.is_zero())
                .unwrap_or(false);
            (ok, what)
        })
        .collect();
    Ok(PropertyResult::from_outcomes("separation", out))
}

/// The three prefactor comparisons over the standard scenarios.
pub fn compare_suite(scenarios: &[Scenario], n_max: u32, prec: u32) -> Result<PropertyResult> {
    let mut r = PropertyResult::new("compare");
    for s in scenarios {
        let pairs: &[Pair] = if s.form.k == 2 {
            &[Pair::SuCh]
        } else {
            &[Pair::HblCh, Pair::HblSu]
        };
        let grid = default_grid(&s.setup, n_max)?;
        for &pair in pairs {
            let rep = compare(pair, &s.form, &grid, prec)?;
            r.record(rep.pass(), || format!("{} {pair}: {}", s.name(), rep.to_json()));
        }
    }
    Ok(r)
}
