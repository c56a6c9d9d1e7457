//! The torus T = <t_g> acting on a module: fixed points, commutator,
//! invariant complements and the splitting into T-minimal summands.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{spin, Mat, Subspace, Vector};
use crate::modcore::GModule;
use crate::poly;

/// The matrix of t_g for the field generator g.
pub fn torus_generator(m: &GModule) -> Mat {
    m.t_of(&m.field.generator()).expect("the generator is nonzero")
}

/// (C_V(T), [T, V]).
pub fn torus_split(m: &GModule) -> Result<(Subspace, Subspace)> {
    let t = torus_generator(m);
    split_by(&t)
}

fn split_by(t: &Mat) -> Result<(Subspace, Subspace)> {
    let d = t.sub(&Mat::identity(t.p, t.rows));
    let center = d.kernel_space();
    let comm = d.image_space();
    if center.dim() + comm.dim() != t.rows || !center.intersect(&comm).is_zero() {
        return Err(Error::SplitFailure(format!(
            "center dim {} and commutator dim {} do not split dim {}",
            center.dim(),
            comm.dim(),
            t.rows
        )));
    }
    Ok((center, comm))
}

/// A basis extension of `sub` inside `within`, spanning a complement.
pub fn extend_to_complement(sub: &Subspace, within: &Subspace) -> Subspace {
    let mut acc = sub.clone();
    let mut extra = Vec::new();
    for b in &within.basis {
        if !acc.contains(b) {
            extra.push(b.clone());
            acc = acc.sum(&Subspace::span(sub.p, sub.n, std::slice::from_ref(b)));
        }
    }
    Subspace::span(sub.p, sub.n, &extra)
}

/// A T-invariant complement of S inside [T, V], by averaging a projector
/// over T.
pub fn maschke_complement(m: &GModule, s: &Subspace) -> Result<Subspace> {
    let t = torus_generator(m);
    maschke_with(&t, s)
}

pub fn maschke_with(t: &Mat, s: &Subspace) -> Result<Subspace> {
    if !s.is_invariant(t) {
        return Err(Error::NotInvariant("torus".into()));
    }
    let p = t.p;
    let n = t.rows;
    let (center, comm) = split_by(t)?;
    let s0 = s.intersect(&comm);
    if s0.is_zero() {
        return Ok(comm);
    }
    let x = extend_to_complement(&s0, &comm);
    let ds = crate::linalg::DirectSum::new(vec![s0.clone(), x, center])?;
    let pi0 = ds.projector(0);
    let ti = t.inverse().ok_or(Error::Singular)?;
    let order = order_of(t);
    let mut acc = Mat::zeros(p, n, n);
    let mut tk = Mat::identity(p, n);
    let mut tik = Mat::identity(p, n);
    for _ in 0..order {
        acc = acc.add(&tk.mul(&pi0).mul(&tik));
        tk = tk.mul(t);
        tik = tik.mul(&ti);
    }
    let inv_order = crate::fp::inv(p, (order % p as u64) as u32).ok_or_else(|| {
        Error::SplitFailure("torus order divisible by p".into())
    })?;
    let pi = acc.scale(inv_order);
    Ok(pi.kernel_space().intersect(&comm))
}

/// Multiplicative order of an invertible matrix.
fn order_of(t: &Mat) -> u64 {
    let mut k = 1;
    let mut acc = t.clone();
    while !acc.is_identity() {
        acc = acc.mul(t);
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TLine {
    /// Echelon basis rows.
    pub basis: Vec<Vector>,
    pub end_field_degree: usize,
    /// Minimal polynomial of t_g on the line, ascending.
    pub min_poly: Vec<u32>,
    pub nontrivial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TDecomposition {
    pub center_dim: usize,
    pub commutator_dim: usize,
    pub lines: Vec<TLine>,
    /// Number of non-trivial T-lines.
    pub parity: usize,
    #[serde(skip)]
    pub center: Subspace,
    #[serde(skip)]
    pub commutator: Subspace,
}

/// Split [T, V] into isotypic blocks (kernels of the irreducible factors of
/// the minimal polynomial of t_g) and each block into lines spun by t_g.
pub fn t_minimal_summands<R: Rng + ?Sized>(m: &GModule, rng: &mut R) -> Result<TDecomposition> {
    let t = torus_generator(m);
    let p = m.p();
    let n = m.dim;
    let (center, comm) = split_by(&t)?;
    let mut lines = Vec::new();
    if !comm.is_zero() {
        let restricted = t.restrict_to(&comm)?;
        let mp = restricted.minpoly();
        for (f, e) in poly::factor(p, &mp, rng) {
            if e != 1 {
                return Err(Error::SplitFailure("torus does not act semisimply".into()));
            }
            let block = t.eval_poly(&f).kernel_space().intersect(&comm);
            let mut covered = Subspace::zero(p, n);
            for b in &block.basis {
                if covered.contains(b) {
                    continue;
                }
                let line = spin(p, n, std::slice::from_ref(&t), std::slice::from_ref(b));
                covered = covered.sum(&line);
                let deg = f.len() - 1;
                let fixed = t.sub(&Mat::identity(p, n)).kernel_space().intersect(&line);
                lines.push(TLine {
                    basis: line.basis,
                    end_field_degree: deg,
                    min_poly: f.clone(),
                    nontrivial: deg == m.m() && fixed.is_zero(),
                });
            }
        }
    }
    let parity = lines.iter().filter(|l| l.nontrivial).count();
    Ok(TDecomposition { center_dim: center.dim(), commutator_dim: comm.dim(), lines, parity, center, commutator: comm })
}

/// Degree over GF(p) of the algebra generated by t_g on a T-minimal L.
pub fn end_field(m: &GModule, l: &Subspace) -> Result<usize> {
    let t = torus_generator(m);
    let r = t.restrict_to(l).map_err(|_| Error::NotMinimal("subspace is not T-invariant".into()))?;
    let mp = r.minpoly();
    let deg = mp.len() - 1;
    if !poly::is_irreducible(m.p(), &mp) || (deg != l.dim() && !(deg == 1 && l.dim() == 1)) {
        // a trivial-action line of dimension > 1 is not minimal either
        return Err(Error::NotMinimal(format!("minimal polynomial {mp:?} on a space of dimension {}", l.dim())));
    }
    Ok(deg)
}
