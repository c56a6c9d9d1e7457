//! GF(p^m) in a fixed polynomial basis 1, x, ..., x^{m-1}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp;
use crate::poly;

/// A finite field GF(p^m) given by a monic irreducible polynomial.
///
/// Deserialization validates the polynomial, so every `FieldSpec` in
/// circulation describes an actual field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFieldSpec")]
pub struct FieldSpec {
    pub p: u32,
    pub m: usize,
    /// Ascending coefficients, length m + 1, leading 1.
    pub poly: Vec<u32>,
}

#[derive(Deserialize)]
struct RawFieldSpec {
    p: u32,
    m: usize,
    poly: Vec<u32>,
}

impl TryFrom<RawFieldSpec> for FieldSpec {
    type Error = Error;
    fn try_from(r: RawFieldSpec) -> Result<Self> {
        FieldSpec::new(r.p, r.m, r.poly)
    }
}

/// Coordinates in the polynomial basis. Carries no reference to its field;
/// the checked `gf_*` entry points validate lengths against a spec.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem {
    pub coeffs: Vec<u32>,
}

/// Documented default polynomials; other fields fall back to the first
/// irreducible monic polynomial in index order.
pub fn default_poly(p: u32, m: usize) -> Result<Vec<u32>> {
    if !fp::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::BadPolynomial("extension degree must be at least 1".into()));
    }
    match (p, m) {
        (5, 2) => return Ok(vec![2, 4, 1]),
        (5, 3) => return Ok(vec![3, 3, 0, 1]),
        (7, 3) => return Ok(vec![4, 0, 6, 1]),
        _ => {}
    }
    let total = (p as u128).pow(m as u32);
    for idx in 0..total {
        let mut f = index_digits(p, m, idx);
        f.push(1);
        if poly::is_irreducible(p, &f) {
            return Ok(f);
        }
    }
    Err(Error::BadPolynomial(format!("no irreducible polynomial of degree {m} over GF({p})")))
}

fn index_digits(p: u32, m: usize, mut idx: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(m + 1);
    for _ in 0..m {
        out.push((idx % p as u128) as u32);
        idx /= p as u128;
    }
    out
}

impl FieldSpec {
    pub fn new(p: u32, m: usize, poly: Vec<u32>) -> Result<Self> {
        if !fp::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadPolynomial("extension degree must be at least 1".into()));
        }
        if poly.len() != m + 1 {
            return Err(Error::BadPolynomial(format!(
                "expected {} coefficients for degree {m}, got {}",
                m + 1,
                poly.len()
            )));
        }
        if poly[m] != 1 {
            return Err(Error::BadPolynomial("polynomial is not monic".into()));
        }
        if poly.iter().any(|&c| c >= p) {
            return Err(Error::BadPolynomial(format!("coefficient out of range [0, {p})")));
        }
        if !poly::is_irreducible(p, &poly) {
            return Err(Error::BadPolynomial(format!("{poly:?} is reducible over GF({p})")));
        }
        Ok(FieldSpec { p, m, poly })
    }

    /// The field with the documented default polynomial.
    pub fn default_for(p: u32, m: usize) -> Result<Self> {
        FieldSpec::new(p, m, default_poly(p, m)?)
    }

    pub fn prime(p: u32) -> Result<Self> {
        FieldSpec::default_for(p, 1)
    }

    /// Field order p^m.
    pub fn size(&self) -> u64 {
        (self.p as u64).pow(self.m as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElem {
        let mut c = vec![0; self.m];
        c[0] = fp::from_i64(self.p, v);
        FieldElem { coeffs: c }
    }

    /// Basis element x^j.
    pub fn basis(&self, j: usize) -> FieldElem {
        let mut c = vec![0; self.m];
        c[j] = 1;
        FieldElem { coeffs: c }
    }

    pub fn elem(&self, coeffs: Vec<u32>) -> Result<FieldElem> {
        self.check(&FieldElem { coeffs: coeffs.clone() })?;
        Ok(FieldElem { coeffs })
    }

    fn check(&self, a: &FieldElem) -> Result<()> {
        if a.coeffs.len() != self.m || a.coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    /// Index sum c_i p^i, a bijection onto [0, p^m).
    pub fn index(&self, a: &FieldElem) -> u64 {
        a.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn from_index(&self, idx: u64) -> FieldElem {
        FieldElem { coeffs: index_digits(self.p, self.m, idx as u128) }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size()).map(move |i| self.from_index(i))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.size()).map(move |i| self.from_index(i))
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| fp::add(self.p, x, y)).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| fp::sub(self.p, x, y)).collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().map(|&x| fp::neg(self.p, x)).collect() }
    }

    pub fn scale(&self, a: &FieldElem, k: u32) -> FieldElem {
        FieldElem { coeffs: a.coeffs.iter().map(|&x| fp::mul(self.p, x, k)).collect() }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let prod = poly::mul(self.p, &a.coeffs, &b.coeffs);
        self.reduce(&prod)
    }

    fn reduce(&self, f: &[u32]) -> FieldElem {
        let mut r = poly::rem(self.p, f, &self.poly);
        r.resize(self.m, 0);
        FieldElem { coeffs: r }
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if self.is_zero(a) {
            return Err(Error::ZeroInversion);
        }
        let p = self.p;
        // invariant: s_i * a == r_i (mod poly)
        let (mut r0, mut r1) = (self.poly.clone(), poly::trim(a.coeffs.clone()));
        let (mut s0, mut s1): (Vec<u32>, Vec<u32>) = (Vec::new(), vec![1]);
        while poly::degree(&r1).unwrap_or(0) > 0 {
            let (q, r) = poly::divrem(p, &r0, &r1);
            let s = poly::sub(p, &s0, &poly::mul(p, &q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = fp::inv(p, r1[0]).ok_or(Error::ZeroInversion)?;
        Ok(self.reduce(&poly::scale(p, &s1, c)))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// a^(p^i), i taken mod m.
    pub fn frobenius(&self, a: &FieldElem, i: usize) -> FieldElem {
        let mut out = a.clone();
        for _ in 0..(i % self.m) {
            out = self.pow(&out, self.p as u128);
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: &FieldElem) -> u64 {
        let n = self.size() - 1;
        let mut ord = n;
        for q in fp::prime_factors(n) {
            while ord % q == 0 && self.pow(a, (ord / q) as u128) == self.one() {
                ord /= q;
            }
        }
        ord
    }

    /// The smallest-index element of full multiplicative order.
    pub fn generator(&self) -> FieldElem {
        let n = self.size() - 1;
        let factors = fp::prime_factors(n);
        self.nonzero_elements()
            .find(|g| factors.iter().all(|q| self.pow(g, (n / q) as u128) != self.one()))
            .expect("finite fields have cyclic unit groups")
    }

    /// The m x m matrix of multiplication by c; column j holds c * x^j.
    pub fn mult_matrix(&self, c: &FieldElem) -> Vec<Vec<u32>> {
        let mut out = vec![vec![0u32; self.m]; self.m];
        for j in 0..self.m {
            let col = self.mul(c, &self.basis(j));
            for (i, &v) in col.coeffs.iter().enumerate() {
                out[i][j] = v;
            }
        }
        out
    }
}

pub fn gf_add(spec: &FieldSpec, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(spec.add(a, b))
}

pub fn gf_mul(spec: &FieldSpec, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(spec.mul(a, b))
}

pub fn gf_inv(spec: &FieldSpec, a: &FieldElem) -> Result<FieldElem> {
    spec.check(a)?;
    spec.inv(a)
}

pub fn gf_frobenius(spec: &FieldSpec, a: &FieldElem, i: usize) -> Result<FieldElem> {
    spec.check(a)?;
    Ok(spec.frobenius(a, i))
}

pub fn gf_generator(spec: &FieldSpec) -> FieldElem {
    spec.generator()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf25() -> FieldSpec {
        FieldSpec::new(5, 2, vec![2, 4, 1]).unwrap()
    }

    fn random(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> FieldElem {
        spec.from_index(rng.gen_range(0..spec.size()))
    }

    // Schoolbook oracle: reduce by repeatedly subtracting multiples of the
    // modulus from the top coefficient, working over the integers.
    fn oracle_reduce(p: i64, mut f: Vec<i64>, modulus: &[i64]) -> Vec<i64> {
        let m = modulus.len() - 1;
        while f.len() > m {
            let top = f.pop().unwrap();
            let shift = f.len() - m;
            for (k, &c) in modulus[..m].iter().enumerate() {
                f[shift + k] -= top * c;
            }
        }
        f.into_iter().map(|c| c.rem_euclid(p)).collect()
    }

    #[test]
    fn gf25_x_squared() {
        let k = gf25();
        let x = k.basis(1);
        assert_eq!(k.mul(&x, &x).coeffs, vec![3, 1]);
        assert_eq!(oracle_reduce(5, vec![0, 0, 1], &[2, 4, 1]), vec![3, 1]);
    }

    #[test]
    fn gf25_frobenius_of_x() {
        let k = gf25();
        let x = k.basis(1);
        assert_eq!(k.frobenius(&x, 1).coeffs, vec![1, 4]);
        let mut x5 = vec![0i64; 6];
        x5[5] = 1;
        assert_eq!(oracle_reduce(5, x5, &[2, 4, 1]), vec![1, 4]);
    }

    #[test]
    fn spec_examples() {
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(k_add(&f5, 3, 4), 2);
        assert_eq!(f5.mul(&f5.from_int(2), &f5.from_int(3)), f5.one());
        assert_eq!(f5.inv(&f5.from_int(2)).unwrap(), f5.from_int(3));
        let k = gf25();
        let a = k.elem(vec![0, 1]).unwrap();
        let b = k.elem(vec![3, 4]).unwrap();
        assert_eq!(gf_add(&k, &a, &b).unwrap().coeffs, vec![3, 0]);
        assert_eq!(gf_inv(&k, &k.zero()), Err(Error::ZeroInversion));
        assert_eq!(gf_add(&k, &a, &f5.one()), Err(Error::FieldMismatch));
    }

    fn k_add(k: &FieldSpec, a: i64, b: i64) -> u32 {
        k.add(&k.from_int(a), &k.from_int(b)).coeffs[0]
    }

    #[test]
    fn generators() {
        assert_eq!(FieldSpec::prime(5).unwrap().generator().coeffs, vec![2]);
        assert_eq!(FieldSpec::prime(7).unwrap().generator().coeffs, vec![3]);
        for (p, m) in [(5, 2), (7, 2), (5, 3), (7, 3), (11, 1)] {
            let k = FieldSpec::default_for(p, m).unwrap();
            let g = k.generator();
            assert_eq!(k.order(&g), k.size() - 1);
            // brute-force order oracle
            let mut acc = g.clone();
            let mut n = 1;
            while acc != k.one() {
                acc = k.mul(&acc, &g);
                n += 1;
            }
            assert_eq!(n, k.size() - 1);
        }
    }

    #[test]
    fn defaults_and_validation() {
        assert_eq!(default_poly(7, 2).unwrap(), vec![1, 0, 1]);
        assert_eq!(default_poly(5, 3).unwrap(), vec![3, 3, 0, 1]);
        assert!(FieldSpec::new(5, 2, vec![4, 0, 1]).is_err());
        assert!(FieldSpec::new(6, 1, vec![0, 1]).is_err());
        assert!(FieldSpec::new(5, 2, vec![2, 4, 2]).is_err());
        let json = serde_json::to_string(&gf25()).unwrap();
        assert_eq!(json, r#"{"p":5,"m":2,"poly":[2,4,1]}"#);
        assert_eq!(serde_json::from_str::<FieldSpec>(&json).unwrap(), gf25());
        assert!(serde_json::from_str::<FieldSpec>(r#"{"p":5,"m":2,"poly":[4,0,1]}"#).is_err());
    }

    #[test]
    fn axioms_exhaustive_small_primes() {
        for p in [5u32, 7] {
            let k = FieldSpec::prime(p).unwrap();
            let all: Vec<_> = k.elements().collect();
            for a in &all {
                for b in &all {
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    assert_eq!(k.add(a, b), k.add(b, a));
                    for c in &all {
                        assert_eq!(k.mul(&k.mul(a, b), c), k.mul(a, &k.mul(b, c)));
                        assert_eq!(k.mul(a, &k.add(b, c)), k.add(&k.mul(a, b), &k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn axioms_random_extension_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, m) in [(5, 2), (7, 2), (5, 3), (7, 3)] {
            let k = FieldSpec::default_for(p, m).unwrap();
            for _ in 0..1000 {
                let (a, b, c) = (random(&k, &mut rng), random(&k, &mut rng), random(&k, &mut rng));
                assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
                assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
                assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
            }
        }
    }

    #[test]
    fn identities_inverse_and_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = FieldSpec::default_for(5, 3).unwrap();
        for _ in 0..50 {
            let a = random(&k, &mut rng);
            let b = random(&k, &mut rng);
            assert_eq!(k.add(&a, &k.zero()), a);
            assert_eq!(k.mul(&a, &k.one()), a);
            assert_eq!(k.frobenius(&a, 0), a);
            assert_eq!(k.frobenius(&a, 3), a);
            assert_eq!(k.frobenius(&k.frobenius(&k.frobenius(&a, 1), 1), 1), a);
            for i in 0..3 {
                assert_eq!(
                    k.frobenius(&k.mul(&a, &b), i),
                    k.mul(&k.frobenius(&a, i), &k.frobenius(&b, i))
                );
            }
            if !k.is_zero(&a) {
                let ai = k.inv(&a).unwrap();
                assert_eq!(k.mul(&a, &ai), k.one());
                assert_eq!(k.inv(&ai).unwrap(), a);
            }
        }
    }

    #[test]
    fn roots_of_unity_counts_gf25() {
        let k = gf25();
        for d in [1u64, 2, 3, 4, 6, 8, 12, 24] {
            let count = |e: u64| k.nonzero_elements().filter(|a| k.pow(a, e as u128) == k.one()).count() as u64;
            assert_eq!(count(d), d);
            assert_eq!(count(24 / d), 24 / d);
        }
    }

    #[test]
    fn mult_matrix_columns() {
        let k = gf25();
        let x = k.basis(1);
        // x * 1 = x, x * x = x + 3
        assert_eq!(k.mult_matrix(&x), vec![vec![0, 3], vec![1, 1]]);
    }
}
