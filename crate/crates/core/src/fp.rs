//! Scalar arithmetic in the prime field GF(p), with p passed explicitly.

#[inline]
pub fn add(p: u32, a: u32, b: u32) -> u32 {
    let s = a as u64 + b as u64;
    (s % p as u64) as u32
}

#[inline]
pub fn sub(p: u32, a: u32, b: u32) -> u32 {
    add(p, a, p - b % p)
}

#[inline]
pub fn neg(p: u32, a: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(p: u32, a: u32, b: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(p: u32, a: u32, mut e: u64) -> u32 {
    let mut base = a % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(p, acc, base);
        }
        base = mul(p, base, base);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero element; p must be prime.
pub fn inv(p: u32, a: u32) -> Option<u32> {
    if a % p == 0 {
        None
    } else {
        Some(pow(p, a, p as u64 - 2))
    }
}

/// Reduce a signed integer into [0, p).
pub fn from_i64(p: u32, v: i64) -> u32 {
    v.rem_euclid(p as i64) as u32
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic() {
        assert_eq!(add(5, 3, 4), 2);
        assert_eq!(mul(5, 2, 3), 1);
        assert_eq!(inv(5, 2), Some(3));
        assert_eq!(inv(7, 0), None);
        assert_eq!(sub(7, 2, 5), 4);
        assert_eq!(from_i64(7, -3), 4);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(124), vec![2, 31]);
        assert_eq!(prime_factors(342), vec![2, 3, 19]);
        assert!(is_prime(343 / 49));
        assert!(!is_prime(1));
    }
}
