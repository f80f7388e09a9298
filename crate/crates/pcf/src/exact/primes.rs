//! Primality and integer-root helpers on machine words and big integers.
//!
//! Everything here is exact: square roots are integer Newton iterations
//! (`num_integer::Roots`) and primality below 2^64 is the deterministic
//! Miller-Rabin base set; above 2^64 a fixed wide base set is used.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the 12-prime base set covers all of u64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
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

pub fn is_odd_prime_u64(n: u64) -> bool {
    n != 2 && is_prime_u64(n)
}

/// Miller-Rabin on big integers. Deterministic below 2^64; above, a fixed
/// set of 30 prime bases (strong probable-prime test, verified candidates
/// in this crate all sit far below known counterexample-free bounds).
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    const BASES: [u64; 30] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97, 101, 103, 107, 109, 113,
    ];
    'witness: for a in BASES {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Decompose `n` as `p^s` with `p` prime and `s >= 1`, if possible.
pub fn prime_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if n < &BigUint::from(2u32) {
        return None;
    }
    let max_exp = n.bits() as u32;
    for s in (1..=max_exp).rev() {
        let root = n.nth_root(s);
        if root.pow(s) == *n && is_prime_big(&root) {
            return Some((root, s));
        }
    }
    None
}

/// True iff some prime q ≡ 3 (mod 4) divides n (n > 0), by trial division.
pub fn has_prime_factor_3_mod_4(mut n: u64) -> bool {
    while n.is_multiple_of(2) {
        n /= 2;
    }
    let mut q = 3u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            if q % 4 == 3 {
                return true;
            }
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 2;
    }
    n > 1 && n % 4 == 3
}

pub fn is_square_free_u64(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return false;
            }
        }
        q += 1;
    }
    true
}

pub fn is_perfect_square_u64(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Multiplicative order of p modulo m (m > 0, gcd(p, m) = 1).
pub fn multiplicative_order(p: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::one());
    }
    if p.gcd(m) != BigUint::one() {
        return None;
    }
    // order divides the Carmichael/Euler bound; plain search is fine at the
    // modulus sizes this crate meets (m is a coefficient of the input).
    let mut k = BigUint::one();
    let mut acc = p % m;
    let bound = m.clone();
    while !acc.is_one() {
        acc = acc * p % m;
        k += BigUint::one();
        if k > bound {
            return None;
        }
    }
    Some(k)
}
