//! Independent floating-point and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use anticyc::cyclotomic::CycElem;
use anticyc::hecke::{AnticycloChar, DirichletChar};
use anticyc::quad::{Place, QuadElem, QuadField, QuadSetup};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

pub fn eval(x: &CycElem) -> Complex64 {
    let m = x.level().order() as f64;
    x.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| Complex64::from_polar(c.to_f64().unwrap(), 2.0 * PI * i as f64 / m))
        .sum()
}

pub fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < 1e-7 * (1.0 + b.norm())
}

pub fn eps_numeric(e: &DirichletChar, a: i64) -> Complex64 {
    match e.exponent(a) {
        Some(x) => Complex64::from_polar(1.0, 2.0 * PI * x as f64 / e.phi() as f64),
        None => Complex64::new(0.0, 0.0),
    }
}

/// Σ ε(a)·exp(−2πi a/p^n).
pub fn gauss_numeric(e: &DirichletChar) -> Complex64 {
    let q = e.modulus() as i64;
    (1..q)
        .map(|a| eps_numeric(e, a) * Complex64::from_polar(1.0, -2.0 * PI * a as f64 / q as f64))
        .sum()
}

/// χ((x)) from ε(ι_𝔭(x))·ε(ι_𝔭̄(x))^{-1}.
pub fn chi_numeric(chi: &AnticycloChar, x: &QuadElem) -> Complex64 {
    let e = chi.eps();
    if e.n() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let emb = chi.setup().embedding(e.n()).unwrap();
    let md = BigInt::from(e.modulus());
    let r = |pl| (emb.embed(x, pl).residue() % &md).to_i64().unwrap();
    eps_numeric(e, r(Place::P)) * eps_numeric(&e.inverse(), r(Place::PBar))
}

/// b_n = (1/#units)·Σ_{N(x)=n} χ((x)), by enumerating elements.
pub fn theta_brute(chi: &AnticycloChar, n: i64) -> Complex64 {
    let k: QuadField = chi.setup().field();
    let w = k.unit_count() as f64;
    let r = 2 * ((n as f64).sqrt() as i64) + 3;
    let mut acc = Complex64::new(0.0, 0.0);
    for x in -r..=r {
        for y in -r..=r {
            let e = k.elem(x, y);
            if e.norm() == n as i128 {
                acc += chi_numeric(chi, &e);
            }
        }
    }
    acc / w
}

pub fn bare(d: i64, p: u64) -> QuadSetup {
    QuadSetup {
        d,
        p,
        level: 1,
        n_plus: 1,
        n_minus: 1,
    }
}

/// Coefficients a_1..a_B of q·Π_n Π_{(c,e)} (1 − q^{cn})^e.
pub fn eta_product(factors: &[(usize, u32)], bound: usize) -> Vec<i128> {
    // series in q starting at q^0, multiplied out then shifted by one
    let mut s = vec![0i128; bound];
    s[0] = 1;
    for &(c, e) in factors {
        for _ in 0..e {
            let mut n = 1;
            while c * n < bound {
                let step = c * n;
                for i in (step..bound).rev() {
                    s[i] -= s[i - step];
                }
                n += 1;
            }
        }
    }
    let mut a = vec![0i128; bound + 1];
    a[1..=bound].copy_from_slice(&s[..bound]);
    a
}

/// The eta-product q-expansion of a builtin label.
pub fn builtin_expansion(label: &str, bound: usize) -> Vec<i128> {
    match label {
        "11a" => eta_product(&[(1, 2), (11, 2)], bound),
        "14a" => eta_product(&[(1, 1), (2, 1), (7, 1), (14, 1)], bound),
        "5.4.a.a" => eta_product(&[(1, 4), (5, 4)], bound),
        other => panic!("no expansion for {other}"),
    }
}

/// Roots of X² − aX + d.
pub fn roots(a: f64, d: f64) -> (Complex64, Complex64) {
    let disc = Complex64::new(a * a - 4.0 * d, 0.0).sqrt();
    ((Complex64::new(a, 0.0) + disc) / 2.0, (Complex64::new(a, 0.0) - disc) / 2.0)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}
