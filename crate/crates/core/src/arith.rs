//! Small integer helpers shared across modules.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest power of `p` dividing `n` (`n > 0`).
pub fn p_part(n: u64, p: u64) -> u64 {
    let mut n = n;
    let mut part = 1;
    while n % p == 0 {
        n /= p;
        part *= p;
    }
    part
}

/// `Some(k)` when `n == p^k`.
pub fn log_p(n: u64, p: u64) -> Option<u32> {
    let mut n = n;
    let mut k = 0;
    while n > 1 {
        if n % p != 0 {
            return None;
        }
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

pub fn pow(p: u64, k: u32) -> u64 {
    p.pow(k)
}

/// Multiplicative inverse of `a` modulo `m` when it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i64, (a % m) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i64) as u64)
}

/// Exact binomial coefficient `C(n, k)` reduced modulo `m`.
pub fn binomial_mod(n: u64, k: u64, m: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    if acc.is_zero() {
        return 0;
    }
    (acc % m).to_u64().expect("reduced below modulus")
}
