use anticyc::compare::{
    compare, default_grid, e_factor_report, e_factors, n_plus_ideal, prefactor_ch, prefactor_hbl,
    prefactor_su, FormLocal, FormalValue, Pair, RewriteRules, RuleOrder, Symbol,
};
use anticyc::euler::HeckeFormData;
use anticyc::gauss_theta::global_gauss_sum;
use anticyc::hecke::{AnticycloChar, DirichletChar};
use anticyc::padic::Zp;
use anticyc::quad::validate_setup;
use anticyc::suite::standard_scenarios;
use anticyc::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

mod common;
use common::{chi_numeric, close, eval};

const PREC: u32 = 20;

fn vp(q: &BigRational, p: u64) -> i64 {
    let v = |mut x: BigInt| {
        let mut e = 0;
        while !x.is_zero() && (&x % p).is_zero() {
            x /= p;
            e += 1;
        }
        e
    };
    v(q.numer().abs()) - v(q.denom().abs())
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn su_prefactor_examples() {
    let f = HeckeFormData::builtin("11a").unwrap();
    let s = validate_setup(-4, 5, 11, None).unwrap();
    let ring = Zp::new(5, PREC).unwrap();
    let alpha = f.alpha(&ring).unwrap();
    let chi = AnticycloChar::build(&s, DirichletChar::quadratic(5).unwrap(), 0).unwrap();
    let g = global_gauss_sum(&chi).unwrap().value;
    assert_eq!(g.abs(), BigInt::from(5));
    let v = prefactor_su(2, &chi, &alpha).unwrap();
    // 𝔤·(−2)^{−2}·i^{−2} = −𝔤/4, the rest in α^{−2} and symbols
    assert_eq!(v.rational, -BigRational::from_integer(g) / BigRational::from_integer(4.into()));
    assert_eq!(v.padic_val, 0);
    assert_eq!(v.padic_unit, alpha.pow(2).inv().unwrap());
    for (sym, e) in [
        (Symbol::Pi, -2),
        (Symbol::I, 0),
        (Symbol::OmegaPlus, -1),
        (Symbol::OmegaMinus, -1),
        (Symbol::UF, 1),
    ] {
        assert_eq!(v.exponent(sym), e, "{sym}");
    }
    let triv = AnticycloChar::trivial(&s);
    assert!(matches!(prefactor_su(2, &triv, &alpha), Err(Error::RamifiedRegimeOnly)));

    // k = 4, n = 1: 𝐍(p𝔡)^{k−2} = (p²|D|)², and (−2i)^{−6} = −1/64
    let f4 = HeckeFormData::builtin("5.4.a.a").unwrap();
    let s4 = validate_setup(-3, 7, 5, None).unwrap();
    let ring7 = Zp::new(7, PREC).unwrap();
    let a7 = f4.alpha(&ring7).unwrap();
    let chi4 = AnticycloChar::build(&s4, DirichletChar::quadratic(7).unwrap(), 0).unwrap();
    let g4 = global_gauss_sum(&chi4).unwrap().value;
    let v4 = prefactor_su(4, &chi4, &a7).unwrap();
    let want = -BigRational::from_integer(g4 * BigInt::from(49 * 3).pow(2)) / BigRational::from_integer(BigInt::from(2).pow(6));
    assert_eq!(v4.rational, want);
}

#[test]
fn ch_prefactor_has_no_euler_factor_in_the_ramified_regime() {
    for sc in standard_scenarios().unwrap() {
        let ring = Zp::new(sc.setup.p, PREC).unwrap();
        let fl = FormLocal::new(&sc.form, &ring).unwrap();
        let p = sc.setup.p;
        let k = sc.form.k;
        let sqrt_d = sc.setup.embedding(PREC).unwrap().sqrt_d().clone();
        for chi in default_grid(&sc.setup, 2).unwrap() {
            let n = chi.n();
            let v = prefactor_ch(&fl, &chi).unwrap();
            // e_p = 1: the p-adic part is exactly √D/α^{2n}
            let want = FormalValue::padic(&sqrt_d)
                .unwrap()
                .mul(&FormalValue::padic(&fl.alpha.pow(2 * n as u64)).unwrap().inv().unwrap());
            assert_eq!(v.padic_val, want.padic_val);
            assert_eq!(v.padic_unit, want.padic_unit);
            let uk = sc.setup.u_k() as i64;
            let dk = BigRational::from_integer(BigInt::from(sc.setup.d).pow(k - 2));
            let pk = BigRational::from_integer(BigInt::from(p).pow(n * (k - 1)));
            assert_eq!(v.rational.abs(), rat(uk * uk, 1) * dk.abs() * pk, "{}", sc.name());
            assert_eq!(v.exponent(Symbol::OmegaGross), -1);
            // χ(𝔑⁺) carried exactly
            let np = n_plus_ideal(&sc.setup).unwrap();
            let z = chi_numeric(&chi, np.generator());
            assert!(close(eval(v.chi_nplus.as_ref().unwrap()), z));
        }
        // n = 0 keeps a nontrivial Euler factor
        let triv = AnticycloChar::trivial(&sc.setup);
        let v0 = prefactor_ch(&fl, &triv).unwrap();
        let c = ring.elem(BigInt::from(p).pow((k - 2) / 2)).div(&fl.alpha).unwrap();
        let e = (&ring.one() - &c).pow(2).pow((2 - fl.t) as u64);
        let plain = FormalValue::padic(&sqrt_d).unwrap();
        let with_e = plain.mul(&FormalValue::padic(&e).unwrap());
        assert_eq!((v0.padic_val, &v0.padic_unit), (with_e.padic_val, &with_e.padic_unit));
        assert!(e != ring.one());
    }
}

#[test]
fn ch_and_hbl_share_the_p_power() {
    for sc in standard_scenarios().unwrap() {
        let k = sc.form.k;
        let p = sc.setup.p;
        let ring = Zp::new(p, PREC).unwrap();
        let fl = FormLocal::new(&sc.form, &ring).unwrap();
        let unrelated = vp(&rat(sc.setup.d, 1), p) * (k as i64 - 2);
        for chi in default_grid(&sc.setup, 3).unwrap() {
            let n = chi.n() as i64;
            let ch = prefactor_ch(&fl, &chi).unwrap();
            let hbl = prefactor_hbl(&fl, k / 2, &chi).unwrap();
            assert_eq!(vp(&ch.rational, p) - unrelated, n * (k as i64 - 1));
            assert_eq!(vp(&hbl.rational, p), n * (k as i64 - 1));
        }
    }
}

#[test]
fn hbl_euler_factors() {
    // k = 4: v(β) = 3, so 1 − β/(pα) and 1 − β/α are units
    let f4 = HeckeFormData::builtin("5.4.a.a").unwrap();
    let fl = FormLocal::new(&f4, &Zp::new(7, PREC).unwrap()).unwrap();
    assert_eq!(fl.beta.as_ref().unwrap().valuation().lower(), 3);
    assert!(e_factor_report(&fl).unwrap().units);

    // weight 2 at p = 3 for 11a: 𝓔 = 1 − 1/α², α² ≡ 4 mod 9
    let f = HeckeFormData::builtin("11a").unwrap();
    let mut js: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
    js["p"] = 3.into();
    let f3 = HeckeFormData::from_json(&js.to_string()).unwrap();
    let ring = Zp::new(3, PREC).unwrap();
    let fl3 = FormLocal::new(&f3, &ring).unwrap();
    assert_eq!(fl3.alpha.pow(2).reduce_to(2), Zp::new(3, 2).unwrap().elem(4));
    let (e, es) = e_factors(&fl3).unwrap();
    assert_eq!(e.valuation().lower(), 1);
    assert!(es.is_unit());
    let rep = e_factor_report(&fl3).unwrap();
    assert_eq!(rep.e_valuation, "1");
    assert!(!rep.units);

    let s = validate_setup(-3, 7, 5, None).unwrap();
    let chi = AnticycloChar::build(&s, DirichletChar::quadratic(7).unwrap(), 0).unwrap();
    assert!(prefactor_hbl(&fl, 0, &chi).is_err());
    assert!(prefactor_hbl(&fl, 4, &chi).is_err());
    assert!(prefactor_hbl(&fl, 3, &chi).is_ok());
}

#[test]
fn comparisons_pass_with_unit_residuals() {
    for sc in standard_scenarios().unwrap() {
        let grid = default_grid(&sc.setup, 2).unwrap();
        assert!(grid.len() >= 5, "{}", sc.name());
        let pairs: &[Pair] = if sc.form.k == 2 { &[Pair::SuCh] } else { &[Pair::HblCh, Pair::HblSu] };
        for &pair in pairs {
            let rep = compare(pair, &sc.form, &grid, PREC).unwrap();
            assert!(rep.pass(), "{} {pair}: {}", sc.name(), rep.to_json());
            assert!(rep.signs.len() <= 2);
            let r0 = &rep.points[0].residual;
            for pt in &rep.points {
                assert_eq!(pt.valuation, 0);
                assert!(pt.confluent);
                for (s, _) in &pt.residual.symbols {
                    assert!(s.is_residual(), "{pair}: {s}");
                }
                // quotients across the grid are ±1
                let q = &pt.residual.rational / &r0.rational;
                assert!(q == BigRational::one() || q == -BigRational::one());
            }
            if pair == Pair::SuCh {
                assert_eq!(r0.exponent(Symbol::Eta), 1);
                assert_eq!(r0.exponent(Symbol::EtaNminus), -1);
            }
            if pair == Pair::HblSu {
                assert_eq!(rep.twist_shift, Some(true));
            }
        }
    }
}

#[test]
fn comparison_preconditions() {
    let f = HeckeFormData::builtin("11a").unwrap();
    let s = validate_setup(-4, 5, 11, None).unwrap();
    let grid = default_grid(&s, 2).unwrap();
    assert!(compare(Pair::SuCh, &f, &grid[..4], PREC).is_err());
    let f4 = HeckeFormData::builtin("5.4.a.a").unwrap();
    let s4 = validate_setup(-3, 7, 5, None).unwrap();
    let g4 = default_grid(&s4, 2).unwrap();
    assert!(compare(Pair::SuCh, &f4, &g4, PREC).is_err());
    assert!(matches!(compare(Pair::HblCh, &f4, &grid, PREC), Err(Error::PrimeMismatch(7, 5))));
    assert_eq!(Pair::HblCh.hbl_j(4), Some(2));
    assert_eq!(Pair::HblSu.hbl_j(4), Some(3));
    assert!("ch-su".parse::<Pair>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn period_rewrites_commute(
        gross in -3i64..4, plus in -3i64..4, minus in -3i64..4, pi in -4i64..4,
        k in prop::sample::select(vec![2u32, 4, 6]),
        num in 1i64..1000, den in 1i64..1000,
    ) {
        let ring = Zp::new(5, 10).unwrap();
        let v = FormalValue::rational(&ring, rat(num, den))
            .mul(&FormalValue::symbol(&ring, Symbol::OmegaGross, gross))
            .mul(&FormalValue::symbol(&ring, Symbol::OmegaPlus, plus))
            .mul(&FormalValue::symbol(&ring, Symbol::OmegaMinus, minus))
            .mul(&FormalValue::symbol(&ring, Symbol::Pi, pi));
        let rules = RewriteRules { k };
        let a = rules.apply(&v, RuleOrder::GrossFirst);
        let b = rules.apply(&v, RuleOrder::CanonicalFirst);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.exponent(Symbol::OmegaGross), 0);
        // Ω⁺Ω⁻ pairs are gone; a lone unmatched period may remain
        let (ap, am) = (a.exponent(Symbol::OmegaPlus), a.exponent(Symbol::OmegaMinus));
        prop_assert!(ap == 0 || am == 0 || ap.signum() != am.signum());
        prop_assert_eq!(a.exponent(Symbol::Pi), pi + k as i64 * gross);
    }
}
