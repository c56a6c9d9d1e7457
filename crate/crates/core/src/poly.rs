//! Dense univariate polynomials over GF(p), coefficients in ascending order.
//!
//! Factorization is the classical three-stage pipeline: square-free
//! decomposition, distinct-degree splitting, then Cantor–Zassenhaus
//! equal-degree splitting (trace splitting in characteristic 2).

use rand::Rng;

use crate::fp;

pub type Poly = Vec<u32>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree, with the zero polynomial reported as `None`.
pub fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn is_zero(a: &[u32]) -> bool {
    a.iter().all(|&c| c == 0)
}

pub fn one() -> Poly {
    vec![1]
}

/// The monomial X.
pub fn x() -> Poly {
    vec![0, 1]
}

pub fn add(p: u32, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| fp::add(p, *a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn sub(p: u32, a: &[u32], b: &[u32]) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| fp::sub(p, *a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    trim(out)
}

pub fn scale(p: u32, a: &[u32], k: u32) -> Poly {
    trim(a.iter().map(|&c| fp::mul(p, c, k)).collect())
}

pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Poly {
    if is_zero(a) || is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    let pp = p as u64;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % pp;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(p: u32, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("polynomial division by zero");
    let lead_inv = fp::inv(p, b[db]).expect("leading coefficient is nonzero");
    let mut rem: Poly = trim(a.to_vec());
    let Some(da) = degree(&rem) else {
        return (Vec::new(), Vec::new());
    };
    if da < db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0u32; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = fp::mul(p, *rem.get(k + db).unwrap_or(&0), lead_inv);
        if c == 0 {
            continue;
        }
        quot[k] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            rem[k + j] = fp::sub(p, rem[k + j], fp::mul(p, c, bj));
        }
    }
    (trim(quot), trim(rem))
}

pub fn rem(p: u32, a: &[u32], b: &[u32]) -> Poly {
    divrem(p, a, b).1
}

pub fn monic(p: u32, a: &[u32]) -> Poly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = fp::inv(p, a[d]).expect("nonzero leading coefficient");
            scale(p, a, inv)
        }
    }
}

pub fn gcd(p: u32, a: &[u32], b: &[u32]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !is_zero(&b) {
        let r = rem(p, &a, &b);
        a = b;
        b = r;
    }
    monic(p, &a)
}

pub fn mulmod(p: u32, a: &[u32], b: &[u32], f: &[u32]) -> Poly {
    rem(p, &mul(p, a, b), f)
}

pub fn powmod(p: u32, base: &[u32], mut e: u128, f: &[u32]) -> Poly {
    let mut acc = rem(p, &one(), f);
    let mut b = rem(p, base, f);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(p, &acc, &b, f);
        }
        b = mulmod(p, &b, &b, f);
        e >>= 1;
    }
    acc
}

/// a^(p^k) mod f by k successive p-th powers.
pub fn frobenius_pow(p: u32, a: &[u32], k: usize, f: &[u32]) -> Poly {
    let mut acc = rem(p, a, f);
    for _ in 0..k {
        acc = powmod(p, &acc, p as u128, f);
    }
    acc
}

pub fn derivative(p: u32, a: &[u32]) -> Poly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| fp::mul(p, c, (i as u64 % p as u64) as u32))
            .collect(),
    )
}

pub fn eval(p: u32, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| fp::add(p, fp::mul(p, acc, x), c))
}

/// Rabin's irreducibility test for a polynomial of degree >= 1.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let Some(n) = degree(f) else { return false };
    if n == 0 {
        return false;
    }
    let f = monic(p, f);
    let xp = x();
    // x^(p^n) == x mod f
    if sub(p, &frobenius_pow(p, &xp, n, &f), &rem(p, &xp, &f)).iter().any(|&c| c != 0) {
        return false;
    }
    for q in fp::prime_factors(n as u64) {
        let k = n / q as usize;
        let h = sub(p, &frobenius_pow(p, &xp, k, &f), &xp);
        if degree(&gcd(p, &h, &f)) != Some(0) {
            return false;
        }
    }
    true
}

/// Square-free decomposition of a monic polynomial: pairs (g, e) with f = prod g^e.
pub fn squarefree(p: u32, f: &[u32]) -> Vec<(Poly, usize)> {
    let f = monic(p, f);
    let mut out = Vec::new();
    if degree(&f).unwrap_or(0) == 0 {
        return out;
    }
    let df = derivative(p, &f);
    if is_zero(&df) {
        // f = g(x^p) = g(x)^p over GF(p)
        let g: Poly = f.iter().step_by(p as usize).copied().collect();
        for (h, e) in squarefree(p, &g) {
            out.push((h, e * p as usize));
        }
        return out;
    }
    let mut c = gcd(p, &f, &df);
    let mut w = divrem(p, &f, &c).0;
    let mut i = 1;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(p, &w, &c);
        let z = divrem(p, &w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(p, &z), i));
        }
        i += 1;
        w = y;
        c = divrem(p, &c, &w).0;
    }
    if degree(&c).unwrap_or(0) > 0 {
        let g: Poly = c.iter().step_by(p as usize).copied().collect();
        for (h, e) in squarefree(p, &g) {
            out.push((h, e * p as usize));
        }
    }
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree(p: u32, f: &[u32]) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut rest = monic(p, f);
    let mut h = x();
    let mut d = 0;
    while let Some(n) = degree(&rest) {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((rest.clone(), n));
            }
            break;
        }
        d += 1;
        h = powmod(p, &h, p as u128, &rest);
        let g = gcd(p, &sub(p, &h, &x()), &rest);
        if degree(&g).unwrap_or(0) > 0 {
            rest = divrem(p, &rest, &g).0;
            h = rem(p, &h, &rest);
            out.push((g, d));
        }
    }
    out
}

/// Split a monic square-free product of irreducibles of common degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(p: u32, f: &[u32], d: usize, rng: &mut R) -> Vec<Poly> {
    let n = degree(f).unwrap_or(0);
    if n <= d {
        return vec![monic(p, f)];
    }
    loop {
        let r: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&r).unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if p == 2 {
            // trace map r + r^2 + ... + r^(2^(d-1))
            let mut acc = rem(p, &r, f);
            let mut t = acc.clone();
            for _ in 1..d {
                t = mulmod(p, &t, &t, f);
                acc = add(p, &acc, &t);
            }
            acc
        } else {
            // r^((p^d - 1)/2) = (prod_k r^(p^k))^((p-1)/2)
            let mut prod = rem(p, &r, f);
            let mut t = prod.clone();
            for _ in 1..d {
                t = powmod(p, &t, p as u128, f);
                prod = mulmod(p, &prod, &t, f);
            }
            let s = powmod(p, &prod, ((p - 1) / 2) as u128, f);
            sub(p, &s, &one())
        };
        let g = gcd(p, &candidate, f);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(p, f, &g).0;
            let mut out = equal_degree(p, &g, d, rng);
            out.extend(equal_degree(p, &monic(p, &h), d, rng));
            return out;
        }
    }
}

/// Full factorization into monic irreducibles with multiplicities, sorted by
/// (degree, coefficients) so the output does not depend on the RNG.
pub fn factor<R: Rng + ?Sized>(p: u32, f: &[u32], rng: &mut R) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    for (g, e) in squarefree(p, f) {
        for (h, d) in distinct_degree(p, &g) {
            for irr in equal_degree(p, &h, d, rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.len()
            .cmp(&b.0.len())
            .then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
    });
    out
}
