use anticyc::cyclotomic::CycElem;
use anticyc::gauss_theta::{global_gauss_sum, global_gauss_sum_exact, local_gauss_sum, theta_coeffs};
use anticyc::hecke::{AnticycloChar, DirichletChar};
use anticyc::quad::validate_setup;
use anticyc::suite::gauss_grid_chars;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

mod common;
use common::{bare, close, eps_numeric, eval, gauss_numeric, theta_brute};

#[test]
fn local_gauss_sums_match_numeric_summation() {
    for (p, n) in [(5u64, 1u32), (5, 2), (13, 1), (13, 2), (7, 2)] {
        for e in DirichletChar::all(p, n).unwrap() {
            if !e.is_primitive() {
                assert!(local_gauss_sum(&e).is_err());
                continue;
            }
            let g = local_gauss_sum(&e).unwrap();
            assert!(close(eval(&g), gauss_numeric(&e)), "p={p} n={n} j={}", e.generator_image());
        }
    }
}

#[test]
fn global_sum_is_plus_minus_p_n_on_grid() {
    let mut count = 0;
    for d in [-4i64, -11] {
        for p in [5u64, 13] {
            for n in [1u32, 2] {
                let chars = gauss_grid_chars(d, p, n).unwrap();
                assert!(!chars.is_empty());
                for e in chars {
                    let num = gauss_numeric(&e) * gauss_numeric(&e.inverse());
                    let pn = (p as f64).powi(n as i32);
                    // Martinet: 𝔤(ε)𝔤(ε̄) = ε(−1)·pⁿ
                    let want = eps_numeric(&e, -1) * pn;
                    assert!(close(num, want));
                    let g = anticyc::gauss_theta::global_gauss_sum_of(&e).unwrap();
                    assert_eq!(g.value, BigInt::from(g.sign) * BigInt::from(p).pow(n));
                    assert!((want.re - g.value.to_f64().unwrap()).abs() < 1e-6);
                    count += 1;
                }
            }
        }
    }
    assert!(count > 100);
}

#[test]
fn quadratic_and_quartic_mod_five() {
    let q = DirichletChar::quadratic(5).unwrap();
    let g = local_gauss_sum(&q).unwrap();
    assert_eq!(g.mul(&g).unwrap(), CycElem::from_int(g.level(), 5));
    let s = validate_setup(-4, 5, 3, None).unwrap();
    let chi = AnticycloChar::build(&s, q, 0).unwrap();
    let gg = global_gauss_sum(&chi).unwrap();
    assert_eq!((gg.value.clone(), gg.sign), (BigInt::from(5), 1));
    assert_eq!(global_gauss_sum_exact(&chi).unwrap().as_integer(), Some(BigInt::from(5)));
    for j in [1u64, 3] {
        let e = DirichletChar::new(5, 1, j).unwrap();
        let g = local_gauss_sum(&e).unwrap();
        let em1 = e.value_in(g.level(), -1).unwrap();
        let gi = local_gauss_sum(&e.inverse()).unwrap();
        // 𝔤(ε)·𝔤(ε̄)·ε(−1)^{-1} = 5 and |𝔤|² = 5
        let lhs = g.mul(&gi).unwrap().mul(&em1.conj()).unwrap();
        assert_eq!(lhs, CycElem::from_int(g.level(), 5));
        assert_eq!(g.mul(&g.conj()).unwrap(), CycElem::from_int(g.level(), 5));
        let r = anticyc::gauss_theta::global_gauss_sum_of(&e).unwrap();
        assert_eq!(r.value, BigInt::from(-5));
    }
}

#[test]
fn conjugate_gauss_sum_swaps_character() {
    for (p, n) in [(5u64, 1u32), (5, 2), (13, 1), (13, 2)] {
        for e in DirichletChar::all(p, n).unwrap().into_iter().filter(|e| e.is_primitive()) {
            let g = local_gauss_sum(&e).unwrap();
            let gi = local_gauss_sum(&e.inverse()).unwrap();
            let lv = g.level().join(&gi.level()).unwrap();
            let (g, gi) = (g.embed(lv).unwrap(), gi.embed(lv).unwrap());
            // conj Σ ε(a)ζ^{−a} = Σ ε̄(a)ζ^{a} = ε(−1)·𝔤(ε̄)
            let sign = e.value_in(lv, -1).unwrap();
            assert_eq!(g.conj(), sign.mul(&gi).unwrap());
        }
    }
}

#[test]
fn theta_coefficients_match_brute_force() {
    for (d, p) in [(-4i64, 5u64), (-3, 7), (-3, 13), (-11, 5)] {
        let s = bare(d, p);
        let mut chars = vec![AnticycloChar::trivial(&s)];
        chars.extend(AnticycloChar::admissible(&s, 1, 0).unwrap());
        chars.extend(AnticycloChar::admissible(&s, 2, 0).unwrap().into_iter().take(4));
        for chi in chars {
            let th = theta_coeffs(&chi, 120).unwrap();
            for n in 1..=120u64 {
                let got = eval(&th.coeff_cyc(n));
                let want = theta_brute(&chi, n as i64);
                assert!(close(got, want), "D={d} p={p} {:?} n={n}: {got} vs {want}", chi.spec());
            }
        }
    }
}

#[test]
fn theta_examples_gaussian() {
    let s = bare(-4, 5);
    let th = theta_coeffs(&AnticycloChar::trivial(&s), 200).unwrap();
    let b: Vec<BigInt> = (0..=10).map(|n| th.coeff_cyc(n).as_integer().unwrap()).collect();
    let want: Vec<BigInt> = [0, 1, 1, 0, 1, 2, 0, 0, 1, 1, 2].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(b, want);
    let int = |n| th.coeff_cyc(n).as_integer().unwrap();
    assert_eq!(int(9), BigInt::from(1));
    assert_eq!(int(13), BigInt::from(2));
    assert_eq!(int(169), BigInt::from(3));
    assert_eq!(int(7), BigInt::from(0));
    assert_eq!(int(49), BigInt::from(1));
    let chi = AnticycloChar::build(&s, DirichletChar::quadratic(5).unwrap(), 0).unwrap();
    let tq = theta_coeffs(&chi, 20).unwrap();
    assert_eq!(tq.coeff_cyc(13).as_integer(), Some(BigInt::from(-2)));
    assert_eq!(tq.coeff_cyc(3).as_integer(), Some(BigInt::from(0)));
}

#[test]
fn theta_multiplicative_on_coprime_indices() {
    let s = bare(-3, 13);
    let chars: Vec<AnticycloChar> = AnticycloChar::admissible(&s, 1, 0).unwrap();
    let b = 300u64;
    for chi in chars {
        let th = theta_coeffs(&chi, b).unwrap();
        for m in 1..=b {
            for n in 1..=b / m {
                if num_integer::gcd(m, n) == 1 {
                    let lhs = th.coeff_cyc(m * n);
                    let rhs = th.coeff_cyc(m).mul(&th.coeff_cyc(n)).unwrap();
                    assert_eq!(lhs, rhs, "{:?} m={m} n={n}", chi.spec());
                }
            }
        }
    }
}
