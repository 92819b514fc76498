//! Small-integer number theory used throughout the crate.
//!
//! Everything here works on `u64` values that fit comfortably in the desk-scale
//! groups the solvers handle; products are widened to `u128` where they could
//! overflow.

use num_integer::{Integer, Roots};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
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

/// Total number of prime factors counted with multiplicity.
pub fn big_omega(n: u64) -> u32 {
    factorize(n).iter().map(|&(_, e)| e).sum()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Reduces a signed integer into `[0, m)`.
pub fn reduce(c: i64, m: u64) -> u64 {
    (c as i128).rem_euclid(m as i128) as u64
}

/// Units of `Z_n`, ascending.
pub fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

/// Smallest primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> Option<u64> {
    if !is_prime(p) {
        return None;
    }
    if p == 2 {
        return Some(1);
    }
    let factors = factorize(p - 1);
    (2..p).find(|&g| factors.iter().all(|&(r, _)| pow_mod(g, (p - 1) / r, p) != 1))
}

/// `floor(n^(1/k))`, exact.
pub fn floor_root(n: u64, k: u32) -> u64 {
    n.nth_root(k)
}

/// `ceil(sqrt(n))`, exact.
pub fn ceil_sqrt(n: u64) -> u64 {
    let r = n.sqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Solves `p = q^2 + q + 1` for a positive integer `q`.
pub fn projective_plane_order(p: u64) -> Option<u64> {
    // 4p - 3 = (2q + 1)^2
    let disc = 4 * p - 3;
    let s = disc.sqrt();
    if s * s != disc || s % 2 == 0 {
        return None;
    }
    let q = (s - 1) / 2;
    (q >= 1 && q * q + q + 1 == p).then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert_eq!(factorize(4912), vec![(2, 4), (307, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(big_omega(36), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(pow_mod(3, 6, 7), 1);
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(reduce(-1, 5), 4);
        assert_eq!(units(12), vec![1, 5, 7, 11]);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(7), Some(3));
        assert_eq!(primitive_root(13), Some(2));
        assert_eq!(primitive_root(31), Some(3));
        assert_eq!(primitive_root(307), Some(5));
        assert_eq!(primitive_root(12), None);
    }

    #[test]
    fn roots() {
        assert_eq!(floor_root(31, 3), 3);
        assert_eq!(floor_root(27, 3), 3);
        assert_eq!(floor_root(26, 3), 2);
        assert_eq!(ceil_sqrt(6), 3);
        assert_eq!(ceil_sqrt(16), 4);
        assert_eq!(projective_plane_order(7), Some(2));
        assert_eq!(projective_plane_order(307), Some(17));
        assert_eq!(projective_plane_order(11), None);
    }
}
