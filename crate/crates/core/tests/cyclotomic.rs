use anticyc::cyclotomic::{CycElem, Level};
use anticyc::hecke::DirichletChar;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn eval(x: &CycElem, k: u64) -> Complex64 {
    let m = x.level().order() as f64;
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let t = 2.0 * std::f64::consts::PI * (i as f64) * (k as f64) / m;
            Complex64::from_polar(c.to_f64().unwrap(), t)
        })
        .sum()
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-6 * (1.0 + a.norm().max(b.norm()))
}

fn levels() -> Vec<Level> {
    vec![
        Level::new(5, 1, 1).unwrap(),
        Level::new(5, 1, 4).unwrap(),
        Level::new(5, 2, 1).unwrap(),
        Level::new(7, 1, 3).unwrap(),
        Level::new(13, 1, 4).unwrap(),
    ]
}

fn elem_strategy() -> impl Strategy<Value = CycElem> {
    (0..5usize, proptest::collection::vec(-6i64..=6, 100)).prop_map(|(li, raw)| {
        let lv = levels()[li];
        let m = lv.order() as usize;
        CycElem::from_powers(lv, raw[..m].iter().map(|&x| BigInt::from(x)).collect())
    })
}

fn pair_strategy() -> impl Strategy<Value = (CycElem, CycElem)> {
    (
        0..5usize,
        proptest::collection::vec(-6i64..=6, 100),
        proptest::collection::vec(-6i64..=6, 100),
    )
        .prop_map(|(li, a, b)| {
            let lv = levels()[li];
            let m = lv.order() as usize;
            let mk = |r: &[i64]| CycElem::from_powers(lv, r[..m].iter().map(|&x| BigInt::from(x)).collect());
            (mk(&a), mk(&b))
        })
}

#[test]
fn small_identities() {
    let lv = Level::new(5, 1, 1).unwrap();
    let z = |e| CycElem::zeta_pow(lv, e);
    assert_eq!(z(1).mul(&z(4)).unwrap(), CycElem::one(lv));
    let one = CycElem::one(lv);
    let lhs = one.add(&z(1)).unwrap().mul(&one.add(&z(2)).unwrap()).unwrap();
    // (1+x)(1+x²) = 1 + x + x² + x³ by polynomial multiplication
    let rhs = (0..4).fold(CycElem::zero(lv), |acc, e| acc.add(&z(e)).unwrap());
    assert_eq!(lhs, rhs);
    let all = (0..5).fold(CycElem::zero(lv), |acc, e| acc.add(&z(e)).unwrap());
    assert!(all.is_zero());
    assert_eq!(z(1).galois_conjugate(-1).unwrap(), z(4));
}

/// Σ_a (a|5) ζ^a summed directly.
fn quadratic_gauss_5() -> CycElem {
    let lv = Level::new(5, 1, 1).unwrap();
    let leg = [0i64, 1, -1, -1, 1];
    (1..5).fold(CycElem::zero(lv), |acc, a| {
        acc.add(&CycElem::zeta_pow(lv, a).scale(&BigInt::from(leg[a as usize])))
            .unwrap()
    })
}

#[test]
fn valuation_examples() {
    let lv = Level::new(5, 1, 1).unwrap();
    let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    assert_eq!(CycElem::from_int(lv, 5).valuation_above_p().unwrap(), r(1, 1));
    let u = CycElem::zeta_pow(lv, 1).sub(&CycElem::one(lv)).unwrap();
    assert_eq!(u.valuation_above_p().unwrap(), r(1, 4));
    let g = quadratic_gauss_5();
    assert_eq!(g.mul(&g).unwrap(), CycElem::from_int(lv, 5));
    assert_eq!(g.valuation_above_p().unwrap(), r(1, 2));
    assert_eq!(g.galois_conjugate(2).unwrap(), g.neg());
    assert!(CycElem::zero(lv).valuation_above_p().is_err());
}

#[test]
fn character_values_match_numeric_powers() {
    for (p, n) in [(5u64, 1u32), (5, 2), (13, 1), (7, 2)] {
        for eps in DirichletChar::all(p, n).unwrap().into_iter().step_by(3) {
            let phi = eps.phi() as f64;
            for a in 1..eps.modulus() as i64 {
                let Some(e) = eps.exponent(a) else { continue };
                let want = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / phi);
                assert!(close(eval(&eps.value(a), 1), want));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn multiplication_matches_complex_evaluation((a, b) in pair_strategy()) {
        let c = a.mul(&b).unwrap();
        let m = a.level().order();
        for k in 1..m {
            if k.gcd(&m) == 1 {
                prop_assert!(close(eval(&c, k), eval(&a, k) * eval(&b, k)));
            }
        }
    }

    #[test]
    fn norm_is_product_of_conjugates(a in elem_strategy()) {
        let m = a.level().order();
        let prod: Complex64 = (1..m).filter(|k| k.gcd(&m) == 1).map(|k| eval(&a, k)).product();
        let nm = a.norm().to_f64().unwrap();
        prop_assert!((prod.re - nm).abs() <= 1e-6 * (1.0 + nm.abs()));
        prop_assert!(prod.im.abs() <= 1e-6 * (1.0 + nm.abs()));
    }

    #[test]
    fn galois_is_an_automorphism_of_finite_order((a, b) in pair_strategy(), t in 1i64..100) {
        let m = a.level().order() as i64;
        prop_assume!(t.gcd(&m) == 1);
        let s = |x: &CycElem| x.galois_conjugate(t).unwrap();
        prop_assert_eq!(s(&a.mul(&b).unwrap()), s(&a).mul(&s(&b)).unwrap());
        prop_assert_eq!(s(&a.add(&b).unwrap()), s(&a).add(&s(&b)).unwrap());
        let phi = a.level().phi();
        let mut x = a.clone();
        for _ in 0..phi {
            x = s(&x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn reduction_is_idempotent(a in elem_strategy()) {
        let m = a.level().order() as usize;
        let mut raw = a.coeffs().to_vec();
        raw.resize(m, BigInt::zero());
        prop_assert_eq!(CycElem::from_powers(a.level(), raw), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn valuation_is_additive((a, b) in pair_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(
            ab.valuation_above_p().unwrap(),
            a.valuation_above_p().unwrap() + b.valuation_above_p().unwrap()
        );
    }
}
