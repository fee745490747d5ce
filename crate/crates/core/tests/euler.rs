use anticyc::euler::{
    cross_path_check, euler_element, local_factor_f_chi, places_above, rankin_selberg_check,
    rankin_selberg_check_with, HeckeFormData,
};
use anticyc::hecke::{AnticycloChar, DirichletChar};
use anticyc::quad::{splitting_type, validate_setup, Splitting};
use anticyc::suite::{good_primes, scenario_chars, standard_scenarios};
use anticyc::Error;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

mod common;
use common::{builtin_expansion, chi_numeric, close, eval, is_prime, roots, theta_brute};

const B: usize = 1200;

#[test]
fn eigenvalue_tables_match_eta_products() {
    for label in HeckeFormData::builtin_labels() {
        let f = HeckeFormData::builtin(label).unwrap();
        let a = builtin_expansion(label, B);
        assert_eq!(a[1], 1);
        let mut checked = 0;
        for l in (2..B as u64).filter(|&l| is_prime(l)) {
            let Ok(al) = f.a(l) else { continue };
            assert_eq!(al as i128, a[l as usize], "{label} a_{l}");
            let r_max = (B as f64).log(l as f64) as usize;
            let pows = f.a_prime_powers(l, r_max).unwrap();
            let mut q = 1usize;
            for (r, v) in pows.iter().enumerate().take(r_max + 1) {
                if q <= B {
                    assert_eq!(v.to_i128().unwrap(), a[q], "{label} a_{l}^{r}");
                }
                q = q.saturating_mul(l as usize);
            }
            checked += 1;
        }
        assert!(checked >= 90, "{label}: only {checked} primes checked");
        // multiplicativity of the expansion itself
        assert_eq!(a[6], a[2] * a[3]);
    }
}

/// Π_{v|q} (1 − α_v χ(v) X^f)(1 − β_v χ(v) X^f) from complex roots.
fn local_factor_numeric(f: &HeckeFormData, chi: &AnticycloChar, q: u64) -> Vec<Complex64> {
    let k = chi.setup().field();
    let d = if f.level % q == 0 { 0.0 } else { (q as f64).powi(f.k as i32 - 1) };
    let (a, b) = roots(f.a(q).unwrap() as f64, d);
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for v in k.primes_above(q) {
        let fdeg = if v.norm() == q { 1 } else { 2 };
        let (av, bv) = if fdeg == 1 { (a, b) } else { (a * a, b * b) };
        let c = chi_numeric(chi, v.generator());
        for r in [av, bv] {
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + fdeg];
            for (i, x) in poly.iter().enumerate() {
                next[i] += x;
                next[i + fdeg] -= x * r * c;
            }
            poly = next;
        }
    }
    poly.resize(5, Complex64::new(0.0, 0.0));
    poly
}

#[test]
fn local_factors_match_complex_roots() {
    for s in standard_scenarios().unwrap() {
        for chi in scenario_chars(&s, 2).unwrap() {
            for q in good_primes(&s, 60) {
                let lf = local_factor_f_chi(&s.form, &chi, q).unwrap();
                let num = local_factor_numeric(&s.form, &chi, q);
                for i in 0..5 {
                    assert!(close(eval(&lf.coeffs[i]), num[i]), "{} q={q} i={i}", s.name());
                }
                assert!(lf.degree() <= 4);
                if splitting_type(q, s.setup.d) == Splitting::Split {
                    assert_eq!(lf.degree(), 4);
                }
            }
        }
    }
}

#[test]
fn trivial_character_factor_is_self_dual() {
    for s in standard_scenarios().unwrap() {
        let chi = AnticycloChar::trivial(&s.setup);
        for q in good_primes(&s, 60) {
            let c: Vec<BigInt> = local_factor_f_chi(&s.form, &chi, q)
                .unwrap()
                .coeffs
                .iter()
                .map(|x| x.as_integer().unwrap())
                .collect();
            // c_{4−i} = c_i·q^{(k−1)(2−i)}, computed in rationals
            let w = BigInt::from(q).pow(s.form.k - 1);
            for i in 0..=2usize {
                let lhs = &c[4 - i];
                let rhs = &c[i] * w.pow(2 - i as u32);
                assert_eq!(lhs, &rhs, "{} q={q} i={i}", s.name());
            }
        }
    }
}

#[test]
fn rankin_selberg_grid_and_examples() {
    let scen = standard_scenarios().unwrap();
    let mut forms = 0;
    for s in &scen {
        let chars = scenario_chars(s, 2).unwrap();
        assert!(chars.len() >= 4);
        for chi in chars.iter().take(6) {
            for q in good_primes(s, 50) {
                assert!(rankin_selberg_check(&s.form, chi, q).unwrap().pass, "{} {:?} q={q}", s.name(), chi.spec());
            }
        }
        forms += 1;
    }
    assert!(forms >= 2);
    let f = HeckeFormData::builtin("11a").unwrap();
    let st = validate_setup(-4, 5, 11, None).unwrap();
    let triv = AnticycloChar::trivial(&st);
    assert!(rankin_selberg_check(&f, &triv, 13).unwrap().pass);
    assert!(rankin_selberg_check(&f, &triv, 3).unwrap().pass);
    let bad = f.with_eigenvalue(13, 5);
    assert!(!rankin_selberg_check_with(&f, &bad, &triv, 13).unwrap().pass);
    assert!(matches!(rankin_selberg_check(&f, &triv, 11), Err(Error::BadPrime(11))));
}

#[test]
fn rankin_selberg_against_q_expansions() {
    // Σ_r a_{q^r}(f)·b_{q^r}(g_χ)·X^r · P_q(X) = 1 − χ_D(q)·q^{k−1}·X², with a from the eta
    // product, b from element enumeration and P from complex roots.
    for s in standard_scenarios().unwrap() {
        let a = builtin_expansion(&s.form.label, B);
        for chi in scenario_chars(&s, 1).unwrap() {
            for q in good_primes(&s, 20) {
                let mut series = Vec::new();
                let mut qr = 1u64;
                while qr as usize <= B && series.len() < 5 {
                    series.push(Complex64::new(a[qr as usize] as f64, 0.0) * theta_brute(&chi, qr as i64));
                    qr *= q;
                }
                let p = local_factor_numeric(&s.form, &chi, q);
                let kron = match splitting_type(q, s.setup.d) {
                    Splitting::Split => 1.0,
                    Splitting::Inert => -1.0,
                    Splitting::Ramified => 0.0,
                };
                let mut want = vec![Complex64::new(0.0, 0.0); series.len()];
                want[0] = Complex64::new(1.0, 0.0);
                if want.len() > 2 {
                    want[2] = Complex64::new(-kron * (q as f64).powi(s.form.k as i32 - 1), 0.0);
                }
                for r in 0..series.len() {
                    let got: Complex64 = (0..=r.min(4)).map(|i| p[i] * series[r - i]).sum();
                    assert!(close(got, want[r]), "{} {:?} q={q} r={r}: {got}", s.name(), chi.spec());
                }
            }
        }
    }
}

#[test]
fn euler_element_at_trivial_character() {
    for s in standard_scenarios().unwrap() {
        let chi = AnticycloChar::trivial(&s.setup);
        let emb = s.setup.embedding(20).unwrap();
        for l in (2..60u64).filter(|&l| is_prime(l) && l != s.setup.p) {
            let d = if s.form.level % l == 0 { 0.0 } else { (l as f64).powi(s.form.k as i32 - 1) };
            let (a, b) = roots(s.form.a(l).unwrap() as f64, d);
            for (v, fdeg) in places_above(&chi, l) {
                let el = euler_element(&s.form, &v, None, &emb).unwrap();
                let nv = el.nv as f64;
                let (av, bv) = if fdeg == 1 { (a, b) } else { (a * a, b * b) };
                let want = (Complex64::new(nv, 0.0) - av) * (Complex64::new(nv, 0.0) - bv);
                let got = el.eval_trivial_scaled().to_f64().unwrap();
                assert!(close(Complex64::new(got, 0.0), want), "{} v={v}", s.name());
            }
        }
    }
}

#[test]
fn euler_element_avatar_matches_character_for_wild_chars() {
    for s in standard_scenarios().unwrap() {
        let emb = s.setup.embedding(20).unwrap();
        let wild: Vec<AnticycloChar> = scenario_chars(&s, 2)
            .unwrap()
            .into_iter()
            .filter(|c| c.n() == 0 || c.eps().is_wild())
            .collect();
        assert!(!wild.is_empty());
        for chi in wild {
            for l in (2..40u64).filter(|&l| is_prime(l) && l != s.setup.p) {
                for (v, _) in places_above(&chi, l) {
                    let el = euler_element(&s.form, &v, None, &emb).unwrap();
                    let c = chi_numeric(&chi, v.generator());
                    let nv = el.nv as f64;
                    let want = Complex64::new(nv * nv, 0.0) - c * el.s1.to_f64().unwrap() * nv
                        + c * c * el.s2.to_f64().unwrap();
                    assert!(close(eval(&el.eval_scaled(&chi).unwrap()), want), "{} v={v}", s.name());
                }
            }
        }
    }
}

#[test]
fn cross_path_at_bad_primes() {
    for s in standard_scenarios().unwrap() {
        let bad: Vec<u64> = (2..200u64)
            .filter(|&l| is_prime(l) && (s.form.level * s.setup.d.unsigned_abs()) % l == 0)
            .collect();
        for chi in scenario_chars(&s, 2).unwrap().into_iter().filter(|c| c.n() == 0 || c.eps().is_wild()) {
            for &l in &bad {
                assert!(cross_path_check(&s.form, &chi, l).unwrap().pass, "{} {:?} l={l}", s.name(), chi.spec());
            }
        }
    }
}

#[test]
fn places_above_p_are_rejected() {
    let s = validate_setup(-4, 5, 11, None).unwrap();
    let f = HeckeFormData::builtin("11a").unwrap();
    let emb = s.embedding(10).unwrap();
    let v = s.field().primes_above(5)[0];
    assert!(matches!(euler_element(&f, &v, None, &emb), Err(Error::RamifiedInTower)));
    let x = emb.ring().one();
    assert!(matches!(euler_element(&f, &v, Some(&x), &emb), Err(Error::NegativeValuation(_))));
    let chi = AnticycloChar::build(&s, DirichletChar::quadratic(5).unwrap(), 0).unwrap();
    assert!(cross_path_check(&f, &chi, 5).is_err());
}

#[test]
fn form_json_roundtrip() {
    for label in HeckeFormData::builtin_labels() {
        let f = HeckeFormData::builtin(label).unwrap();
        assert_eq!(HeckeFormData::from_json(&f.to_json()).unwrap(), f);
    }
    let odd = r#"{"label":"x","k":3,"N":5,"p":7,"stabilized":true,"eigenvalues":[[2,1]]}"#;
    assert!(matches!(HeckeFormData::from_json(odd), Err(Error::OddWeight(3))));
}
