//! The ascending U-fixed filtration and the irreducibility test.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfield::FieldElem;
use crate::linalg::{self, spin, Mat, Subspace, Vector};
use crate::modcore::GModule;
use crate::poly;

/// 0 = Z_0 < Z_1 < ... < Z_n = V with [U, Z_{j+1}] <= Z_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    pub chain: Vec<Subspace>,
}

impl Filtration {
    pub fn length(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(|s| s.dim()).collect()
    }

    pub fn quotient_dims(&self) -> Vec<usize> {
        self.chain.windows(2).map(|w| w[1].dim() - w[0].dim()).collect()
    }

    pub fn z(&self, j: usize) -> &Subspace {
        &self.chain[j]
    }
}

pub fn partial(m: &GModule, lambda: &FieldElem) -> Mat {
    m.partial(lambda)
}

fn stack(p: u32, n: usize, mats: &[Mat]) -> Mat {
    let mut rows = Vec::new();
    for a in mats {
        rows.extend(a.row_vecs());
    }
    if rows.is_empty() {
        return Mat::zeros(p, 0, n);
    }
    Mat::from_rows(p, &rows)
}

/// Common fixed vectors of the given matrices.
pub fn fixed_space(m: &GModule, gens: &[Mat]) -> Subspace {
    let id = m.identity();
    let diffs: Vec<Mat> = gens.iter().map(|g| g.sub(&id)).collect();
    if diffs.is_empty() {
        return Subspace::full(m.p(), m.dim);
    }
    stack(m.p(), m.dim, &diffs).kernel_space()
}

/// Z_{j+1} = {v : d_b v in Z_j for every basis scalar b}.
pub fn compute_filtration(m: &GModule) -> Result<Filtration> {
    filtration_of(m.p(), m.dim, &m.u_actions)
}

/// The same chain for any commuting family of unipotent matrices, e.g. the
/// induced u-actions on a U-invariant quotient.
pub fn filtration_of(p: u32, n: usize, u_actions: &[Mat]) -> Result<Filtration> {
    let id = Mat::identity(p, n);
    let partials: Vec<Mat> = u_actions.iter().map(|u| u.sub(&id)).collect();
    let mut chain = vec![Subspace::zero(p, n)];
    while !chain.last().unwrap().is_full() {
        let cur = chain.last().unwrap();
        let red = cur.reduction_matrix();
        let conds: Vec<Mat> = partials.iter().map(|d| red.mul(d)).collect();
        let next = stack(p, n, &conds).kernel_space();
        if next.dim() == cur.dim() {
            let mut dims: Vec<usize> = chain.iter().map(|s| s.dim()).collect();
            dims.push(n);
            return Err(Error::NotUnipotent(dims));
        }
        chain.push(next);
    }
    Ok(Filtration { chain })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Irreducibility {
    Irreducible,
    /// A proper nonzero invariant subspace, as echelon rows.
    Reducible(Vec<Vector>),
    Undecided,
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible)
    }
}

/// Invariant subspaces found so far; the smallest one is the witness.
struct Witnesses {
    best: Option<Subspace>,
}

impl Witnesses {
    fn offer(&mut self, s: Subspace) {
        if s.is_zero() || s.is_full() {
            return;
        }
        if self.best.as_ref().map_or(true, |b| s.dim() < b.dim()) {
            self.best = Some(s);
        }
    }
}

/// Annihilator in V of a subspace of the dual space.
fn annihilator(s: &Subspace) -> Subspace {
    if s.is_zero() {
        return Subspace::full(s.p, s.n);
    }
    Mat::from_rows(s.p, &s.basis).kernel_space()
}

/// Spin every unit vector and the extra vectors, in V and in the dual.
fn spin_search(m: &GModule, w: &mut Witnesses, extra: &[Vector]) {
    let p = m.p();
    let n = m.dim;
    let gens = m.generators();
    let gens_t: Vec<Mat> = gens.iter().map(|g| g.transpose()).collect();
    let starts: Vec<Vector> = (0..n).map(|i| linalg::unit(n, i)).chain(extra.iter().cloned()).collect();
    for v in &starts {
        w.offer(spin(p, n, &gens, std::slice::from_ref(v)));
        w.offer(annihilator(&spin(p, n, &gens_t, std::slice::from_ref(v))));
    }
}

/// A random element of the group algebra: identity plus a random
/// combination of short random words in the generators.
fn random_algebra_element<R: Rng + ?Sized>(m: &GModule, rng: &mut R) -> Mat {
    let p = m.p();
    let gens = m.generators();
    let mut acc = Mat::zeros(p, m.dim, m.dim);
    let mut word = m.identity();
    for _ in 0..6 {
        word = word.mul(&gens[rng.gen_range(0..gens.len())]);
        let c = rng.gen_range(0..p);
        acc = acc.add(&word.scale(c));
    }
    acc.add(&m.identity().scale(rng.gen_range(0..p)))
}

const ENUMERATION_LIMIT: u64 = 20_000;
const NORTON_TRIALS: usize = 40;

/// Spin test plus Norton's criterion on random group-algebra elements.
pub fn is_irreducible<R: Rng + ?Sized>(m: &GModule, rng: &mut R) -> Irreducibility {
    let p = m.p();
    let n = m.dim;
    if n <= 1 {
        return if n == 1 { Irreducibility::Irreducible } else { Irreducibility::Reducible(Vec::new()) };
    }
    let randoms: Vec<Vector> = (0..16).map(|_| linalg::random_vector(p, n, rng)).collect();
    let mut w = Witnesses { best: None };
    spin_search(m, &mut w, &randoms);
    if let Some(s) = w.best {
        return Irreducibility::Reducible(s.basis);
    }
    // Norton's criterion on a factor f of the characteristic polynomial of
    // theta: when every line of ker f(theta) spins to V and one vector of
    // ker f(theta)^T spins to the dual, V is irreducible. A kernel of
    // dimension deg f needs one vector; larger kernels are enumerated, and
    // only as a last resort.
    let mut fallback: Option<(u64, Mat)> = None;
    for _ in 0..NORTON_TRIALS {
        let theta = random_algebra_element(m, rng);
        let cp = theta.charpoly();
        for (f, _) in poly::factor(p, &cp, rng) {
            let deg = f.len() - 1;
            let nf = theta.eval_poly(&f);
            let k = nf.kernel_space().dim();
            if k == deg {
                return norton_decide(m, &nf, false);
            }
            let points = ((p as u64).pow(k as u32) - 1) / (p as u64 - 1);
            if points <= ENUMERATION_LIMIT && fallback.as_ref().map_or(true, |(best, _)| points < *best) {
                fallback = Some((points, nf));
            }
        }
    }
    match fallback {
        Some((_, nf)) => norton_decide(m, &nf, true),
        None => Irreducibility::Undecided,
    }
}

fn norton_decide(m: &GModule, nf: &Mat, enumerate: bool) -> Irreducibility {
    let p = m.p();
    let n = m.dim;
    let gens = m.generators();
    let kernel = nf.kernel_space();
    let k = kernel.dim();
    let vectors: Vec<Vector> = if enumerate {
        // one representative per line: last nonzero coordinate equal to 1
        (1..(p as u64).pow(k as u32))
            .map(|idx| index_coords(p, k, idx))
            .filter(|c| c.iter().rev().find(|&&x| x != 0) == Some(&1))
            .map(|c| kernel.from_coords(&c))
            .collect()
    } else {
        vec![kernel.basis[0].clone()]
    };
    for v in &vectors {
        let s = spin(p, n, &gens, std::slice::from_ref(v));
        if !s.is_full() {
            return Irreducibility::Reducible(s.basis);
        }
    }
    let gens_t: Vec<Mat> = gens.iter().map(|g| g.transpose()).collect();
    let kt = nf.transpose().kernel_space();
    let s = spin(p, n, &gens_t, std::slice::from_ref(&kt.basis[0]));
    if !s.is_full() {
        return Irreducibility::Reducible(annihilator(&s).basis);
    }
    Irreducibility::Irreducible
}

fn index_coords(p: u32, k: usize, mut idx: u64) -> Vector {
    (0..k)
        .map(|_| {
            let c = (idx % p as u64) as u32;
            idx /= p as u64;
            c
        })
        .collect()
}
