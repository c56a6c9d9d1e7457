//! Dense linear algebra over GF(p): matrices, echelon forms, subspaces.
//!
//! Matrices act on column vectors. Subspaces are stored as the rows of a
//! reduced row echelon matrix, so equal subspaces compare equal.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fp;
use crate::poly::{self, Poly};

pub type Vector = Vec<u32>;

pub fn vadd(p: u32, a: &[u32], b: &[u32]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| fp::add(p, x, y)).collect()
}

pub fn vsub(p: u32, a: &[u32], b: &[u32]) -> Vector {
    a.iter().zip(b).map(|(&x, &y)| fp::sub(p, x, y)).collect()
}

pub fn vscale(p: u32, a: &[u32], k: u32) -> Vector {
    a.iter().map(|&x| fp::mul(p, x, k)).collect()
}

pub fn vis_zero(a: &[u32]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// a += k * b
fn axpy(p: u32, a: &mut [u32], k: u32, b: &[u32]) {
    if k == 0 {
        return;
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x = fp::add(p, *x, fp::mul(p, k, y));
    }
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn random_vector<R: Rng + ?Sized>(p: u32, n: usize, rng: &mut R) -> Vector {
    (0..n).map(|_| rng.gen_range(0..p)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries in [0, p).
    pub data: Vec<u32>,
}

impl Mat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Mat {
        Mat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Mat {
        Mat::scalar(p, n, 1)
    }

    pub fn scalar(p: u32, n: usize, c: u32) -> Mat {
        let mut m = Mat::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, c % p);
        }
        m
    }

    pub fn from_flat(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|&x| x >= p) {
            return Err(Error::Parse(format!("matrix entry out of range [0, {p})")));
        }
        Ok(Mat { p, rows, cols, data })
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| x % p)).collect();
        Mat { p, rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors (each of length n).
    pub fn from_cols(p: u32, n: usize, cols: &[Vector]) -> Mat {
        let mut m = Mat::zeros(p, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn cols_vecs(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let p = self.p as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(other.row(k)) {
                    *o = (*o + a * b as u64) % p;
                }
            }
        }
        Mat { p: self.p, rows: self.rows, cols: other.cols, data: out.into_iter().map(|x| x as u32).collect() }
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                (self.row(i).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum::<u64>() % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { data: vadd(self.p, &self.data, &other.data), ..self.clone() }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat { data: vsub(self.p, &self.data, &other.data), ..self.clone() }
    }

    pub fn scale(&self, k: u32) -> Mat {
        Mat { data: vscale(self.p, &self.data, k % self.p), ..self.clone() }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.p - 1)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut acc = Mat::identity(self.p, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        vis_zero(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(self.p, self.rows)
    }

    /// The scalar c if the matrix equals c times the identity.
    pub fn as_scalar(&self) -> Option<u32> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 { 1 } else { self.get(0, 0) };
        (*self == Mat::scalar(self.p, self.rows, c)).then_some(c)
    }

    pub fn commutes_with(&self, other: &Mat) -> bool {
        self.mul(other) == other.mul(self)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if piv != r {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, r * m.cols + j);
                }
            }
            let inv = fp::inv(p, m.get(r, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = fp::mul(p, m.get(r, j), inv);
                m.set(r, j, v);
            }
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let f = m.get(i, c);
                    if f != 0 {
                        let start = i * m.cols;
                        axpy(p, &mut m.data[start..start + m.cols], p - f, &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space {v : A v = 0}.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = fp::neg(self.p, r.get(k, free));
            }
            out.push(v);
        }
        out
    }

    pub fn kernel_space(&self) -> Subspace {
        Subspace::span(self.p, self.cols, &self.kernel())
    }

    pub fn image_space(&self) -> Subspace {
        Subspace::span(self.p, self.rows, &self.cols_vecs())
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Mat::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Some x with A x = b, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vector> {
        let mut aug = Mat::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (k, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(k, self.cols);
        }
        Some(x)
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.p, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, fp::mul(self.p, a, other.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(p: u32, blocks: &[&Mat]) -> Mat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(p, n, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// f(A) by Horner's rule.
    pub fn eval_poly(&self, f: &[u32]) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zeros(self.p, n, n);
        for &c in f.iter().rev() {
            acc = acc.mul(self).add(&Mat::scalar(self.p, n, c));
        }
        acc
    }

    /// Characteristic polynomial det(X - A), via reduction to Hessenberg form.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let p = self.p;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h.get(i, m - 1) != 0) else { continue };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let t = h.get(m, m - 1);
            let tinv = fp::inv(p, t).expect("nonzero");
            for i in m + 1..n {
                let u = fp::mul(p, h.get(i, m - 1), tinv);
                if u == 0 {
                    continue;
                }
                // row_i -= u row_m ; col_m += u col_i
                for j in 0..n {
                    let v = fp::sub(p, h.get(i, j), fp::mul(p, u, h.get(m, j)));
                    h.set(i, j, v);
                }
                for r in 0..n {
                    let v = fp::add(p, h.get(r, m), fp::mul(p, u, h.get(r, i)));
                    h.set(r, m, v);
                }
            }
        }
        // recurrence on leading principal minors of X - H
        let mut polys: Vec<Poly> = vec![poly::one()];
        for k in 0..n {
            let mut next = poly::mul(p, &[fp::neg(p, h.get(k, k)), 1], &polys[k]);
            let mut prod = 1u32;
            for i in (0..k).rev() {
                prod = fp::mul(p, prod, h.get(i + 1, i));
                let coef = fp::mul(p, prod, h.get(i, k));
                if coef != 0 {
                    next = poly::sub(p, &next, &poly::scale(p, &polys[i], coef));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// Minimal polynomial: first linear dependence among I, A, A^2, ...
    pub fn minpoly(&self) -> Poly {
        let n = self.rows;
        let mut powers: Vec<Vector> = Vec::new();
        let mut cur = Mat::identity(self.p, n);
        loop {
            powers.push(cur.data.clone());
            let k = powers.len();
            let system = Mat::from_cols(self.p, n * n, &powers[..k - 1]);
            if let Some(c) = system.solve(&powers[k - 1]) {
                let mut f: Poly = c.iter().map(|&x| fp::neg(self.p, x)).collect();
                f.push(1);
                return f;
            }
            cur = cur.mul(self);
        }
    }

    pub fn random_invertible<R: Rng + ?Sized>(p: u32, n: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat { p, rows: n, cols: n, data: random_vector(p, n * n, rng) };
            if m.is_invertible() {
                return m;
            }
        }
    }

    /// Matrix of A restricted to an A-invariant subspace, in S's basis
    /// (columns are coordinates of A b_j).
    pub fn restrict_to(&self, s: &Subspace) -> Result<Mat> {
        let k = s.dim();
        let mut out = Mat::zeros(self.p, k, k);
        for (j, b) in s.basis.iter().enumerate() {
            let img = self.mul_vec(b);
            let c = s.coords(&img).ok_or_else(|| Error::NotInvariant("restriction".into()))?;
            for i in 0..k {
                out.set(i, j, c[i]);
            }
        }
        Ok(out)
    }

    /// Matrix of the induced map on V/S, in the coordinates of the
    /// non-pivot positions of S.
    pub fn induced_on_quotient(&self, s: &Subspace) -> Result<Mat> {
        if !s.is_invariant(self) {
            return Err(Error::NotInvariant("quotient".into()));
        }
        let free = s.free_positions();
        let mut out = Mat::zeros(self.p, free.len(), free.len());
        for (j, &fj) in free.iter().enumerate() {
            let img = s.reduce(&self.col(fj));
            for (i, &fi) in free.iter().enumerate() {
                out.set(i, j, img[fi]);
            }
        }
        Ok(out)
    }
}

/// A subspace of GF(p)^n in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub p: u32,
    pub n: usize,
    pub basis: Vec<Vector>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(p: u32, n: usize) -> Subspace {
        Subspace { p, n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(p: u32, n: usize) -> Subspace {
        Subspace { p, n, basis: (0..n).map(|i| unit(n, i)).collect(), pivots: (0..n).collect() }
    }

    pub fn span(p: u32, n: usize, vecs: &[Vector]) -> Subspace {
        if vecs.is_empty() {
            return Subspace::zero(p, n);
        }
        let (r, pivots) = Mat::from_rows(p, vecs).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { p, n, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    /// Canonical representative of v + S: pivot coordinates cleared.
    pub fn reduce(&self, v: &[u32]) -> Vector {
        let mut out = v.to_vec();
        for (b, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                axpy(self.p, &mut out, self.p - c, b);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        vis_zero(&self.reduce(v))
    }

    /// Coordinates of v in the echelon basis, if v lies in S.
    pub fn coords(&self, v: &[u32]) -> Option<Vector> {
        self.contains(v).then(|| self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn from_coords(&self, c: &[u32]) -> Vector {
        let mut out = vec![0; self.n];
        for (b, &k) in self.basis.iter().zip(c) {
            axpy(self.p, &mut out, k, b);
        }
        out
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(self.p, self.n, &v)
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.p, self.n);
        }
        // combinations of self's basis whose reduction mod other vanishes
        let reduced: Vec<Vector> = self.basis.iter().map(|b| other.reduce(b)).collect();
        let rel = Mat::from_cols(self.p, self.n, &reduced).kernel();
        let vecs: Vec<Vector> = rel.iter().map(|c| self.from_coords(c)).collect();
        Subspace::span(self.p, self.n, &vecs)
    }

    pub fn image(&self, a: &Mat) -> Subspace {
        let vecs: Vec<Vector> = self.basis.iter().map(|b| a.mul_vec(b)).collect();
        Subspace::span(self.p, a.rows, &vecs)
    }

    /// {v : A v in S}.
    pub fn preimage(a: &Mat, s: &Subspace) -> Subspace {
        s.reduction_matrix().mul(a).kernel_space()
    }

    /// The linear map v -> reduce(v) as a matrix.
    pub fn reduction_matrix(&self) -> Mat {
        let cols: Vec<Vector> = (0..self.n).map(|i| self.reduce(&unit(self.n, i))).collect();
        Mat::from_cols(self.p, self.n, &cols)
    }

    pub fn is_invariant(&self, a: &Mat) -> bool {
        self.basis.iter().all(|b| self.contains(&a.mul_vec(b)))
    }

    pub fn free_positions(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.pivots.contains(i)).collect()
    }

    /// The coordinate complement spanned by the non-pivot unit vectors.
    pub fn complement(&self) -> Subspace {
        let vecs: Vec<Vector> = self.free_positions().into_iter().map(|i| unit(self.n, i)).collect();
        Subspace::span(self.p, self.n, &vecs)
    }

    /// n x k matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Mat {
        Mat::from_cols(self.p, self.n, &self.basis)
    }

    pub fn is_direct_sum(parts: &[&Subspace], n: usize) -> bool {
        let total: usize = parts.iter().map(|s| s.dim()).sum();
        if total != n {
            return false;
        }
        let mut vecs = Vec::new();
        for s in parts {
            vecs.extend(s.basis.iter().cloned());
        }
        n == 0 || Mat::from_rows(parts[0].p, &vecs).rank() == n
    }
}

/// Projections onto the summands of an internal direct sum V = S_1 + ... + S_k.
pub struct DirectSum {
    pub parts: Vec<Subspace>,
    /// coords of v in the concatenated basis = inv * v
    inv: Mat,
    offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(parts: Vec<Subspace>) -> Result<DirectSum> {
        let n = parts.first().map_or(0, |s| s.n);
        let p = parts.first().map_or(2, |s| s.p);
        let mut cols = Vec::new();
        let mut offsets = Vec::new();
        for s in &parts {
            offsets.push(cols.len());
            cols.extend(s.basis.iter().cloned());
        }
        offsets.push(cols.len());
        if cols.len() != n {
            return Err(Error::DecompositionFailure(format!(
                "summand dimensions add to {}, expected {n}",
                cols.len()
            )));
        }
        let inv = Mat::from_cols(p, n, &cols)
            .inverse()
            .ok_or_else(|| Error::DecompositionFailure("summands are not independent".into()))?;
        Ok(DirectSum { parts, inv, offsets })
    }

    /// The k-th component of v as an ambient vector.
    pub fn component(&self, v: &[u32], k: usize) -> Vector {
        let c = self.inv.mul_vec(v);
        self.parts[k].from_coords(&c[self.offsets[k]..self.offsets[k + 1]])
    }

    pub fn components(&self, v: &[u32]) -> Vec<Vector> {
        (0..self.parts.len()).map(|k| self.component(v, k)).collect()
    }

    /// Projection onto the k-th summand as a matrix.
    pub fn projector(&self, k: usize) -> Mat {
        let n = self.inv.rows;
        let cols: Vec<Vector> = (0..n).map(|i| self.component(&unit(n, i), k)).collect();
        Mat::from_cols(self.inv.p, n, &cols)
    }
}

/// Incremental semi-echelon basis, used for spinning.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    p: u32,
    n: usize,
    rows: Vec<(usize, Vector)>,
}

impl EchelonBuilder {
    pub fn new(p: u32, n: usize) -> Self {
        EchelonBuilder { p, n, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u32]) -> Vector {
        let mut out = v.to_vec();
        for (pc, b) in &self.rows {
            let c = out[*pc];
            if c != 0 {
                axpy(self.p, &mut out, self.p - c, b);
            }
        }
        out
    }

    /// Adds v if it is new; returns whether the span grew.
    pub fn add(&mut self, v: &[u32]) -> bool {
        let r = self.reduce(v);
        let Some(pc) = r.iter().position(|&x| x != 0) else { return false };
        let inv = fp::inv(self.p, r[pc]).expect("nonzero");
        self.rows.push((pc, vscale(self.p, &r, inv)));
        true
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn to_subspace(&self) -> Subspace {
        let vecs: Vec<Vector> = self.rows.iter().map(|(_, v)| v.clone()).collect();
        Subspace::span(self.p, self.n, &vecs)
    }
}

/// Smallest subspace containing `start` and invariant under `gens`.
pub fn spin(p: u32, n: usize, gens: &[Mat], start: &[Vector]) -> Subspace {
    let mut eb = EchelonBuilder::new(p, n);
    let mut queue: Vec<Vector> = Vec::new();
    for v in start {
        if eb.add(v) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if eb.dim() == n {
            break;
        }
        for g in gens {
            let w = g.mul_vec(&v);
            if eb.add(&w) {
                queue.push(w);
            }
        }
    }
    eb.to_subspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Cofactor expansion oracle for small determinants.
    fn det(p: u32, m: &Mat) -> u32 {
        let n = m.rows;
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for j in 0..n {
            let minor_rows: Vec<Vec<u32>> = (1..n)
                .map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c)).collect())
                .collect();
            let minor = if n == 1 { Mat::zeros(p, 0, 0) } else { Mat::from_rows(p, &minor_rows) };
            let term = fp::mul(p, m.get(0, j), det(p, &minor));
            acc = if j % 2 == 0 { fp::add(p, acc, term) } else { fp::sub(p, acc, term) };
        }
        acc
    }

    #[test]
    fn inverse_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2, 5, 7] {
            for n in 1..6 {
                let a = Mat::random_invertible(p, n, &mut rng);
                let ai = a.inverse().unwrap();
                assert!(a.mul(&ai).is_identity());
                assert_ne!(det(p, &a), 0);
                let s = Mat::from_rows(p, &[vec![1, 2, 3], vec![2, 4, 6]]);
                for v in s.kernel() {
                    assert!(vis_zero(&s.mul_vec(&v)));
                }
                assert_eq!(s.kernel().len(), if p == 2 { 2 } else { 2 });
            }
        }
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = 7;
        for n in 1..6 {
            for _ in 0..10 {
                let a = Mat { p, rows: n, cols: n, data: random_vector(p, n * n, &mut rng) };
                let cp = a.charpoly();
                assert_eq!(cp.len(), n + 1);
                // det(cI - A) == cp(c) for every c in GF(7)
                for c in 0..p {
                    let m = Mat::scalar(p, n, c).sub(&a);
                    assert_eq!(det(p, &m), poly::eval(p, &cp, c));
                }
                // Cayley-Hamilton and minpoly divides charpoly
                assert!(a.eval_poly(&cp).is_zero());
                let mp = a.minpoly();
                assert!(a.eval_poly(&mp).is_zero());
                assert!(poly::rem(p, &cp, &mp).is_empty());
            }
        }
    }

    #[test]
    fn subspace_operations() {
        let p = 5;
        let s = Subspace::span(p, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        let t = Subspace::span(p, 4, &[vec![1, 1, 1, 1], vec![1, 0, 0, 0]]);
        let i = s.intersect(&t);
        assert_eq!(i, Subspace::span(p, 4, &[vec![1, 1, 1, 1]]));
        assert_eq!(s.sum(&t).dim(), 3);
        assert!(s.contains(&[2, 2, 3, 3]));
        assert!(!s.contains(&[1, 0, 0, 0]));
        assert_eq!(s.coords(&[2, 2, 3, 3]), Some(vec![2, 3]));
        let c = s.complement();
        assert!(Subspace::is_direct_sum(&[&s, &c], 4));
        let ds = DirectSum::new(vec![s.clone(), c.clone()]).unwrap();
        let v = vec![1, 2, 3, 4];
        let comps = ds.components(&v);
        assert_eq!(vadd(p, &comps[0], &comps[1]), v);
        assert!(s.contains(&comps[0]) && c.contains(&comps[1]));
    }

    #[test]
    fn preimage_and_quotient() {
        let p = 7;
        // shift operator e_{i+1} -> e_i
        let mut n = Mat::zeros(p, 3, 3);
        n.set(0, 1, 1);
        n.set(1, 2, 1);
        let z1 = n.kernel_space();
        assert_eq!(z1, Subspace::span(p, 3, &[vec![1, 0, 0]]));
        let z2 = Subspace::preimage(&n, &z1);
        assert_eq!(z2.dim(), 2);
        let q = n.induced_on_quotient(&z1).unwrap();
        assert_eq!(q.rows, 2);
        assert_eq!(q.rank(), 1);
        assert!(n.restrict_to(&z2).is_ok());
        let bad = Subspace::span(p, 3, &[vec![0, 0, 1]]);
        assert!(n.induced_on_quotient(&bad).is_err());
    }

    #[test]
    fn spin_closure() {
        let p = 5;
        let mut n = Mat::zeros(p, 3, 3);
        n.set(0, 1, 1);
        n.set(1, 2, 1);
        assert_eq!(spin(p, 3, &[n.clone()], &[unit(3, 2)]).dim(), 3);
        assert_eq!(spin(p, 3, &[n], &[unit(3, 1)]).dim(), 2);
    }

    #[test]
    fn solve_and_kron() {
        let p = 11;
        let a = Mat::from_rows(p, &[vec![1, 2], vec![3, 4]]);
        let x = a.solve(&[5, 6]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![5, 6]);
        let k = a.kron(&Mat::identity(p, 2));
        assert_eq!(k.get(2, 0), 3);
        assert_eq!(k.get(3, 1), 3);
        assert_eq!(k.get(0, 1), 0);
        let sing = Mat::from_rows(p, &[vec![1, 2], vec![2, 4]]);
        assert!(sing.solve(&[0, 1]).is_none());
        assert!(sing.inverse().is_none());
    }
}
