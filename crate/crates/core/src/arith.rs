//! Small-integer number theory shared by the other modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division, as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (q, e) in factorize(n) {
        let cur = ds.clone();
        let mut pw = 1;
        for _ in 0..e {
            pw *= q;
            ds.extend(cur.iter().map(|d| d * pw));
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Kronecker symbol (a | n) for n ≥ 1.
pub fn kronecker(a: i64, n: u64) -> i32 {
    if n == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
        n >>= twos;
    }
    // Jacobi symbol (a | n) for odd n
    let mut a_u = a.rem_euclid(n as i64) as u64;
    let mut m = n;
    while a_u != 0 {
        while a_u % 2 == 0 {
            a_u /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a_u, &mut m);
        if a_u % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a_u %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// Smallest primitive root modulo p^n (p odd prime, n ≥ 1).
pub fn primitive_root_prime_power(p: u64, n: u32) -> u64 {
    let m = p.pow(n);
    let phi = (p - 1) * p.pow(n - 1);
    let fac: Vec<u64> = factorize(phi).into_iter().map(|(q, _)| q).collect();
    (2..m)
        .find(|&g| g % p != 0 && fac.iter().all(|&q| pow_mod(g, phi / q, m) != 1))
        .expect("cyclic group has a generator")
}

/// Table of discrete logarithms to base `g` modulo `m`; entry is None for non-units.
pub fn discrete_log_table(g: u64, m: u64) -> Vec<Option<u64>> {
    let mut table = vec![None; m as usize];
    let mut x = 1 % m;
    let mut k = 0u64;
    loop {
        if table[x as usize].is_some() {
            break;
        }
        table[x as usize] = Some(k);
        x = mul_mod(x, g, m);
        k += 1;
    }
    table
}

/// p-adic valuation of a nonzero integer.
pub fn val_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero big integer.
pub fn val_big(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// ⌊log_p n⌋ for n ≥ 1.
pub fn floor_log(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut x = n;
    while x >= p {
        x /= p;
        v += 1;
    }
    v
}

pub fn big_pow(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Integer square root of a non-negative i128, if it is a perfect square.
pub fn exact_isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

pub fn isqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_small() {
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-7, 2), 1);
        assert_eq!(kronecker(-11, 7), -1);
    }

    #[test]
    fn primes_and_roots() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(561));
        assert_eq!(primitive_root_prime_power(5, 2), 2);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(2028), 624);
    }
}
