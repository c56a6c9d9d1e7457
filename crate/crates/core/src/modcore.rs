//! Matrix modules for SL2(K) over the prime field.
//!
//! A module is given by the actions of u_{x^j} (j < m) and w as d x d
//! matrices over GF(p). K-coordinates are flattened module-coordinate-major,
//! field-basis-minor: (v1:1, v1:x, ..., v1:x^{m-1}, v2:1, ...).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfield::{FieldElem, FieldSpec};
use crate::linalg::{Mat, Subspace};
use crate::sl2gen::{self, BruhatForm, GroupElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GModule {
    pub field: FieldSpec,
    pub dim: usize,
    pub u_actions: Vec<Mat>,
    pub w_action: Mat,
}

/// The on-disk JSON form of a module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleFile {
    pub field: FieldSpec,
    pub dim: usize,
    pub u_actions: Vec<Vec<u32>>,
    pub w_action: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

/// The canonical modules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Nat,
    Sym2,
    Sym3,
    TwistTensor,
}

impl Tag {
    pub fn name(&self) -> &'static str {
        match self {
            Tag::Nat => "Nat",
            Tag::Sym2 => "Sym2",
            Tag::Sym3 => "Sym3",
            Tag::TwistTensor => "TwistTensor",
        }
    }

    /// K-dimension of the canonical module.
    pub fn k_dim(&self) -> usize {
        match self {
            Tag::Nat => 2,
            Tag::Sym2 => 3,
            Tag::Sym3 | Tag::TwistTensor => 4,
        }
    }
}

type KMat = Vec<Vec<FieldElem>>;

/// Replace each K-entry by its m x m multiplication block.
pub fn flatten(spec: &FieldSpec, k: &KMat) -> Mat {
    let m = spec.m;
    let n = k.len();
    let mut out = Mat::zeros(spec.p, n * m, n * m);
    for (i, row) in k.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if spec.is_zero(c) {
                continue;
            }
            let block = spec.mult_matrix(c);
            for a in 0..m {
                for b in 0..m {
                    out.set(i * m + a, j * m + b, block[a][b]);
                }
            }
        }
    }
    out
}

/// Flattened action of a K-scalar on a K-space of dimension n.
pub fn scalar_block(spec: &FieldSpec, c: &FieldElem, n: usize) -> Mat {
    let k: KMat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { c.clone() } else { spec.zero() }).collect())
        .collect();
    flatten(spec, &k)
}

fn nat_rep(_spec: &FieldSpec, g: &GroupElem) -> KMat {
    g.entries.iter().map(|r| r.to_vec()).collect()
}

/// Sym^n: the monomial e1^{n-k} e2^k goes to (a + c y)^{n-k} (b + d y)^k,
/// whose y^r coefficient is the row-r entry.
fn sym_rep(spec: &FieldSpec, g: &GroupElem, n: usize) -> KMat {
    let lin = |x: &FieldElem, y: &FieldElem| vec![x.clone(), y.clone()];
    let pmul = |a: &[FieldElem], b: &[FieldElem]| {
        let mut out = vec![spec.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = spec.add(&out[i + j], &spec.mul(x, y));
            }
        }
        out
    };
    let first = lin(g.a(), g.c());
    let second = lin(g.b(), g.d());
    let mut out = vec![vec![spec.zero(); n + 1]; n + 1];
    for k in 0..=n {
        let mut acc = vec![spec.one()];
        for _ in 0..n - k {
            acc = pmul(&acc, &first);
        }
        for _ in 0..k {
            acc = pmul(&acc, &second);
        }
        for (r, c) in acc.into_iter().enumerate() {
            out[r][k] = c;
        }
    }
    out
}

fn kron_k(spec: &FieldSpec, a: &KMat, b: &KMat) -> KMat {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![spec.zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = spec.mul(&a[i][j], &b[k][l]);
                }
            }
        }
    }
    out
}

fn twist_rep(spec: &FieldSpec, g: &GroupElem, i: usize) -> KMat {
    kron_k(spec, &nat_rep(spec, &g.frobenius(spec, i)), &nat_rep(spec, g))
}

/// Build a module from a K-representation of SL2(K).
pub fn from_k_rep<F>(spec: &FieldSpec, rep: F) -> GModule
where
    F: Fn(&GroupElem) -> KMat,
{
    let u_actions: Vec<Mat> =
        (0..spec.m).map(|j| flatten(spec, &rep(&sl2gen::make_u(spec, &spec.basis(j))))).collect();
    let w_action = flatten(spec, &rep(&sl2gen::make_w(spec)));
    GModule { field: spec.clone(), dim: w_action.rows, u_actions, w_action }
}

pub fn nat_module(spec: &FieldSpec) -> GModule {
    from_k_rep(spec, |g| nat_rep(spec, g))
}

/// Sym^n Nat for any n, used directly by tests for n >= 4.
pub fn sym_power(spec: &FieldSpec, n: usize) -> Result<GModule> {
    if spec.p as usize <= n + 1 {
        return Err(Error::BadCharacteristic {
            p: spec.p,
            reason: format!("Sym^{n} needs p > {}", n + 1),
        });
    }
    Ok(from_k_rep(spec, |g| sym_rep(spec, g, n)))
}

pub fn sym_power_nat(spec: &FieldSpec, n: usize) -> Result<GModule> {
    if !(n == 2 || n == 3) {
        return Err(Error::OutOfScope(format!("symmetric power {n}; only 2 and 3 are canonical")));
    }
    sym_power(spec, n)
}

/// Nat tensor Nat twisted by Frob^i on the first factor.
pub fn twist_tensor(spec: &FieldSpec, i: usize) -> Result<GModule> {
    if spec.m < 2 || i == 0 || i >= spec.m {
        return Err(Error::NoNontrivialTwist { m: spec.m, i });
    }
    Ok(from_k_rep(spec, |g| twist_rep(spec, g, i)))
}

/// The untwisted tensor square, which is reducible.
pub fn nat_tensor_nat(spec: &FieldSpec) -> GModule {
    from_k_rep(spec, |g| kron_k(spec, &nat_rep(spec, g), &nat_rep(spec, g)))
}

/// The canonical module for a tag; `chi_power` is required for the twist.
pub fn canonical(spec: &FieldSpec, tag: Tag, chi_power: Option<usize>) -> Result<GModule> {
    match tag {
        Tag::Nat => Ok(nat_module(spec)),
        Tag::Sym2 => sym_power_nat(spec, 2),
        Tag::Sym3 => sym_power_nat(spec, 3),
        Tag::TwistTensor => twist_tensor(spec, chi_power.unwrap_or(0)),
    }
}

/// The K-matrix of g on a canonical module, flattened.
pub fn canonical_action(spec: &FieldSpec, tag: Tag, chi_power: usize, g: &GroupElem) -> Mat {
    let k = match tag {
        Tag::Nat => nat_rep(spec, g),
        Tag::Sym2 => sym_rep(spec, g, 2),
        Tag::Sym3 => sym_rep(spec, g, 3),
        Tag::TwistTensor => twist_rep(spec, g, chi_power),
    };
    flatten(spec, &k)
}

impl GModule {
    pub fn new(field: FieldSpec, u_actions: Vec<Mat>, w_action: Mat) -> Result<GModule> {
        let d = w_action.rows;
        if u_actions.len() != field.m {
            return Err(Error::DimensionMismatch(format!(
                "expected {} u-actions, got {}",
                field.m,
                u_actions.len()
            )));
        }
        for a in u_actions.iter().chain(std::iter::once(&w_action)) {
            if a.rows != d || a.cols != d || a.p != field.p {
                return Err(Error::DimensionMismatch("generator matrices must be d x d over GF(p)".into()));
            }
        }
        Ok(GModule { field, dim: d, u_actions, w_action })
    }

    pub fn p(&self) -> u32 {
        self.field.p
    }

    pub fn m(&self) -> usize {
        self.field.m
    }

    /// u-actions followed by w.
    pub fn generators(&self) -> Vec<Mat> {
        let mut g = self.u_actions.clone();
        g.push(self.w_action.clone());
        g
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.p(), self.dim)
    }

    /// Action of u_lambda as a product of u-basis powers.
    pub fn u_of(&self, lambda: &FieldElem) -> Mat {
        let mut acc = self.identity();
        for (j, &c) in lambda.coeffs.iter().enumerate() {
            if c != 0 {
                acc = acc.mul(&self.u_actions[j].pow(c as u64));
            }
        }
        acc
    }

    /// Action of t_lambda through the word u_l w u_{1/l} w u_l w.
    pub fn t_of(&self, lambda: &FieldElem) -> Result<Mat> {
        let li = self.field.inv(lambda).map_err(|_| Error::ZeroScalar)?;
        let u = self.u_of(lambda);
        let w = &self.w_action;
        Ok(u.mul(w).mul(&self.u_of(&li)).mul(w).mul(&u).mul(w))
    }

    /// d_lambda = u_lambda - 1.
    pub fn partial(&self, lambda: &FieldElem) -> Mat {
        self.u_of(lambda).sub(&self.identity())
    }

    pub fn to_file(&self, meta: Option<serde_json::Value>) -> ModuleFile {
        ModuleFile {
            field: self.field.clone(),
            dim: self.dim,
            u_actions: self.u_actions.iter().map(|a| a.data.clone()).collect(),
            w_action: self.w_action.data.clone(),
            meta,
        }
    }

    /// Parse a module file. `meta` is dropped here, so nothing downstream can read it.
    pub fn from_file(f: &ModuleFile) -> Result<GModule> {
        let p = f.field.p;
        let d = f.dim;
        let u = f
            .u_actions
            .iter()
            .map(|a| Mat::from_flat(p, d, d, a.clone()))
            .collect::<Result<Vec<_>>>()?;
        let w = Mat::from_flat(p, d, d, f.w_action.clone())?;
        GModule::new(f.field.clone(), u, w)
    }

    pub fn to_json(&self, meta: Option<serde_json::Value>) -> String {
        serde_json::to_string(&self.to_file(meta)).expect("module serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<GModule> {
        let f: ModuleFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        GModule::from_file(&f)
    }

    /// Conjugate every generator by P: new action P A P^{-1}.
    pub fn conjugate(&self, pmat: &Mat) -> Result<GModule> {
        let pi = pmat.inverse().ok_or(Error::Singular)?;
        let c = |a: &Mat| pmat.mul(a).mul(&pi);
        Ok(GModule {
            field: self.field.clone(),
            dim: self.dim,
            u_actions: self.u_actions.iter().map(c).collect(),
            w_action: c(&self.w_action),
        })
    }
}

/// Matrix of an arbitrary group element, realized through its Bruhat form
/// and the t-word.
pub fn action_of(m: &GModule, g: &GroupElem) -> Result<Mat> {
    let spec = &m.field;
    for e in g.entries.iter().flatten() {
        spec.elem(e.coeffs.clone())?;
    }
    let borel = |b: &GroupElem| -> Result<Mat> {
        let (x, s) = sl2gen::borel_parts(spec, b);
        Ok(m.t_of(&x)?.mul(&m.u_of(&s)))
    };
    match sl2gen::bruhat(spec, g) {
        BruhatForm::Borel(b) => borel(&b),
        BruhatForm::Cell { b, mu } => Ok(borel(&b)?.mul(&m.w_action).mul(&m.u_of(&mu))),
    }
}

pub fn direct_sum(a: &GModule, b: &GModule) -> Result<GModule> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    let p = a.p();
    let u = a.u_actions.iter().zip(&b.u_actions).map(|(x, y)| Mat::block_diag(p, &[x, y])).collect();
    let w = Mat::block_diag(p, &[&a.w_action, &b.w_action]);
    GModule::new(a.field.clone(), u, w)
}

/// Action on V/S in the coordinates of the non-pivot positions of S.
pub fn quotient(m: &GModule, s: &Subspace) -> Result<GModule> {
    let u = m.u_actions.iter().map(|a| a.induced_on_quotient(s)).collect::<Result<Vec<_>>>()?;
    let w = m.w_action.induced_on_quotient(s)?;
    GModule::new(m.field.clone(), u, w)
}

/// Action on an invariant subspace S in its echelon basis.
pub fn restrict(m: &GModule, s: &Subspace) -> Result<GModule> {
    let u = m.u_actions.iter().map(|a| a.restrict_to(s)).collect::<Result<Vec<_>>>()?;
    let w = m.w_action.restrict_to(s)?;
    GModule::new(m.field.clone(), u, w)
}

/// Basis of Hom_G(M1, M2): all d2 x d1 matrices F with F g1 = g2 F.
pub fn hom_space(m1: &GModule, m2: &GModule) -> Result<Vec<Mat>> {
    if m1.field != m2.field {
        return Err(Error::FieldMismatch);
    }
    let p = m1.p();
    let (d1, d2) = (m1.dim, m2.dim);
    let n = d1 * d2;
    // Current solution space, as coordinate vectors of F (row-major).
    let mut sol: Vec<Vec<u32>> = (0..n).map(|i| crate::linalg::unit(n, i)).collect();
    let g1 = m1.generators();
    let g2 = m2.generators();
    // w first: it is the most constraining single generator.
    let order: Vec<usize> = std::iter::once(g1.len() - 1).chain(0..g1.len() - 1).collect();
    for k in order {
        if sol.is_empty() {
            break;
        }
        let (a, b) = (&g1[k], &g2[k]);
        let images: Vec<Vec<u32>> = sol
            .iter()
            .map(|v| {
                let f = Mat { p, rows: d2, cols: d1, data: v.clone() };
                f.mul(a).sub(&b.mul(&f)).data
            })
            .collect();
        let rel = Mat::from_cols(p, n, &images).kernel();
        sol = rel
            .iter()
            .map(|c| {
                let mut acc = vec![0u32; n];
                for (v, &ci) in sol.iter().zip(c) {
                    if ci != 0 {
                        acc = crate::linalg::vadd(p, &acc, &crate::linalg::vscale(p, v, ci));
                    }
                }
                acc
            })
            .collect();
    }
    let basis = Subspace::span(p, n, &sol);
    Ok(basis.basis.into_iter().map(|v| Mat { p, rows: d2, cols: d1, data: v }).collect())
}

/// An invertible element of Hom_G(M1, M2), if one exists.
///
/// Tries 32 seeded random combinations, then every combination when the
/// span has at most 4096 elements.
pub fn find_isomorphism(m1: &GModule, m2: &GModule, seed: u64) -> Result<Option<Mat>> {
    if m1.dim != m2.dim {
        return Ok(None);
    }
    let basis = hom_space(m1, m2)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let p = m1.p();
    let combine = |c: &[u32]| {
        basis
            .iter()
            .zip(c)
            .fold(Mat::zeros(p, m2.dim, m1.dim), |acc, (b, &ci)| acc.add(&b.scale(ci)))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..32 {
        let c: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..p)).collect();
        let f = combine(&c);
        if f.is_invertible() {
            return Ok(Some(f));
        }
    }
    let total = (p as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
    if total <= 4096 {
        for idx in 1..total {
            let mut c = Vec::with_capacity(basis.len());
            let mut r = idx;
            for _ in 0..basis.len() {
                c.push((r % p as u64) as u32);
                r /= p as u64;
            }
            let f = combine(&c);
            if f.is_invertible() {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

pub fn is_isomorphic(m1: &GModule, m2: &GModule, seed: u64) -> Result<bool> {
    Ok(find_isomorphism(m1, m2, seed)?.is_some())
}

/// Conjugate by one seeded random invertible matrix; also returns it.
pub fn scramble_with_matrix(m: &GModule, seed: u64) -> (GModule, Mat) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pm = Mat::random_invertible(m.p(), m.dim, &mut rng);
    let out = m.conjugate(&pm).expect("random matrix is invertible");
    (out, pm)
}

pub fn scramble(m: &GModule, seed: u64) -> GModule {
    scramble_with_matrix(m, seed).0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }
}

/// Check the defining relations on the generators.
pub fn check_relations(m: &GModule) -> RelationReport {
    let spec = &m.field;
    let p = m.p();
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool| checks.push(RelationCheck { name: name.into(), passed });

    let commute = m
        .u_actions
        .iter()
        .enumerate()
        .all(|(i, a)| m.u_actions[i + 1..].iter().all(|b| a.commutes_with(b)));
    push("u-actions commute", commute);
    push("u-actions have order p", m.u_actions.iter().all(|a| a.pow(p as u64).is_identity()));
    let w_inv = m.w_action.is_invertible();
    push("w is invertible", w_inv);
    let w2 = m.w_action.mul(&m.w_action);
    let central = m.generators().iter().all(|g| g.commutes_with(&w2));
    push("w^2 is central", central);
    push("w^4 = 1", w2.mul(&w2).is_identity());
    let uw = m.u_actions[0].mul(&m.w_action);
    push("(uw)^3 = 1", uw.mul(&uw).mul(&uw).is_identity());
    if !(commute && w_inv) {
        return RelationReport { checks };
    }
    let basis: Vec<FieldElem> = (0..spec.m).map(|j| spec.basis(j)).collect();
    let t: Vec<Mat> = basis.iter().map(|b| m.t_of(b).expect("basis scalars are nonzero")).collect();
    push("t_{-1} = w^2", m.t_of(&spec.from_int(-1)).map(|t| t == w2).unwrap_or(false));
    let mut conj = true;
    for (b, tb) in basis.iter().zip(&t) {
        let tbi = match tb.inverse() {
            Some(x) => x,
            None => {
                conj = false;
                continue;
            }
        };
        for l in &basis {
            let lhs = tb.mul(&m.u_of(l)).mul(&tbi);
            let rhs = m.u_of(&spec.mul(l, &spec.mul(b, b)));
            conj &= lhs == rhs;
        }
    }
    push("t_mu u_l t_mu^-1 = u_{l mu^2}", conj);
    let mut multiplicative = true;
    for (i, b) in basis.iter().enumerate() {
        for (j, c) in basis.iter().enumerate() {
            let bc = m.t_of(&spec.mul(b, c)).expect("nonzero");
            multiplicative &= t[i].mul(&t[j]) == bc;
        }
    }
    push("t_b t_c = t_{bc}", multiplicative);
    RelationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2gen::{make_t, make_u, make_w};

    fn gf(p: u32, m: usize) -> FieldSpec {
        FieldSpec::default_for(p, m).unwrap()
    }

    fn random_group(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> GroupElem {
        loop {
            let r = |rng: &mut ChaCha8Rng| spec.from_index(rng.gen_range(0..spec.size()));
            let (a, b, c) = (r(rng), r(rng), r(rng));
            if spec.is_zero(&a) {
                continue;
            }
            let d = spec.div(&spec.add(&spec.one(), &spec.mul(&b, &c)), &a).unwrap();
            return GroupElem::new(spec, [[a, b], [c, d]]).unwrap();
        }
    }

    #[test]
    fn nat_examples() {
        let k = gf(5, 1);
        let nat = nat_module(&k);
        assert_eq!(nat.dim, 2);
        let u2 = action_of(&nat, &make_u(&k, &k.from_int(2))).unwrap();
        assert_eq!(u2, Mat::from_rows(5, &[vec![1, 2], vec![0, 1]]));
        assert!(action_of(&nat, &GroupElem::identity(&k)).unwrap().is_identity());
        let w2 = nat.w_action.mul(&nat.w_action);
        assert_eq!(w2.as_scalar(), Some(4));
        assert_eq!(nat_module(&gf(5, 2)).dim, 4);
    }

    #[test]
    fn sym2_u_columns() {
        let k = gf(5, 1);
        let s2 = sym_power_nat(&k, 2).unwrap();
        // columns: g0 -> g0, g1 -> g0 + g1, g2 -> g0 + 2 g1 + g2
        assert_eq!(s2.u_actions[0], Mat::from_rows(5, &[vec![1, 1, 1], vec![0, 1, 2], vec![0, 0, 1]]));
        assert!(matches!(sym_power_nat(&gf(3, 1), 2), Err(Error::BadCharacteristic { .. })));
        assert!(matches!(sym_power_nat(&gf(7, 1), 4), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn involution_parity() {
        let k = gf(7, 1);
        let sign = |m: &GModule| m.w_action.mul(&m.w_action).as_scalar();
        assert_eq!(sign(&sym_power_nat(&k, 2).unwrap()), Some(1));
        assert_eq!(sign(&sym_power_nat(&k, 3).unwrap()), Some(6));
        assert_eq!(sign(&twist_tensor(&gf(5, 3), 1).unwrap()), Some(1));
    }

    #[test]
    fn twist_tables() {
        let k = gf(5, 3);
        let i = 1;
        let m = twist_tensor(&k, i).unwrap();
        assert_eq!(m.dim, 12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let coord = |v: &[u32], block: usize| -> FieldElem { FieldElem { coeffs: v[block * 3..block * 3 + 3].to_vec() } };
        let embed = |block: usize, c: &FieldElem| -> Vec<u32> {
            let mut v = vec![0; 12];
            v[block * 3..block * 3 + 3].copy_from_slice(&c.coeffs);
            v
        };
        for _ in 0..10 {
            let l = k.from_index(rng.gen_range(1..125));
            let phi = k.frobenius(&l, i);
            // u_l (e2 x e2) = phi(l) l e11 + phi(l) e12 + l e21 + e22
            let img = action_of(&m, &make_u(&k, &l)).unwrap().mul_vec(&embed(3, &k.one()));
            assert_eq!(coord(&img, 0), k.mul(&phi, &l));
            assert_eq!(coord(&img, 1), phi);
            assert_eq!(coord(&img, 2), l);
            assert_eq!(coord(&img, 3), k.one());
            // t_l (e2 x e1) = phi(l)^-1 l e21
            let img = action_of(&m, &make_t(&k, &l).unwrap()).unwrap().mul_vec(&embed(2, &k.one()));
            assert_eq!(img, embed(2, &k.mul(&k.inv(&phi).unwrap(), &l)));
        }
        // w (e1 x e2) = -e21
        let img = m.w_action.mul_vec(&embed(1, &k.one()));
        assert_eq!(img, embed(2, &k.from_int(-1)));
        assert!(matches!(twist_tensor(&gf(5, 1), 1), Err(Error::NoNontrivialTwist { .. })));
        assert!(matches!(twist_tensor(&k, 0), Err(Error::NoNontrivialTwist { .. })));
        assert!(matches!(twist_tensor(&k, 3), Err(Error::NoNontrivialTwist { .. })));
    }

    #[test]
    fn action_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (k, m) in [
            (gf(7, 1), sym_power_nat(&gf(7, 1), 3).unwrap()),
            (gf(5, 2), nat_module(&gf(5, 2))),
            (gf(5, 3), twist_tensor(&gf(5, 3), 2).unwrap()),
        ] {
            for _ in 0..100 {
                let g = random_group(&k, &mut rng);
                let h = random_group(&k, &mut rng);
                let lhs = action_of(&m, &g.mul(&k, &h)).unwrap();
                let rhs = action_of(&m, &g).unwrap().mul(&action_of(&m, &h).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn action_matches_direct_k_matrices() {
        // flattening contract: word-derived actions agree with flattened K-matrices
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let k = gf(7, 2);
        for (tag, chi) in [(Tag::Nat, 0), (Tag::Sym2, 0), (Tag::Sym3, 0)] {
            let m = canonical(&k, tag, None).unwrap();
            for _ in 0..50 {
                let l = k.from_index(rng.gen_range(1..49));
                let t = make_t(&k, &l).unwrap();
                assert_eq!(action_of(&m, &t).unwrap(), canonical_action(&k, tag, chi, &t));
                let g = random_group(&k, &mut rng);
                assert_eq!(action_of(&m, &g).unwrap(), canonical_action(&k, tag, chi, &g));
            }
        }
        assert_eq!(canonical_action(&k, Tag::Nat, 0, &make_w(&k)), nat_module(&k).w_action);
    }

    #[test]
    fn json_round_trip() {
        let m = twist_tensor(&gf(5, 3), 1).unwrap();
        let s = m.to_json(Some(serde_json::json!({"type": "twist"})));
        let back = GModule::from_json(&s).unwrap();
        assert_eq!(back, m);
        let f: ModuleFile = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), s);
        assert!(GModule::from_json(r#"{"field":{"p":5,"m":1,"poly":[0,1]},"dim":2,"u_actions":[[1,1,0]],"w_action":[0,1,4,0]}"#).is_err());
        assert!(GModule::from_json(r#"{"field":{"p":5,"m":1,"poly":[0,1]},"dim":2,"u_actions":[[1,1,0,9]],"w_action":[0,1,4,0]}"#).is_err());
    }

    #[test]
    fn hom_space_examples() {
        let k = gf(5, 2);
        let nat = nat_module(&k);
        assert_eq!(hom_space(&nat, &nat).unwrap().len(), 2);
        let s2 = sym_power_nat(&k, 2).unwrap();
        assert!(hom_space(&nat, &s2).unwrap().is_empty());
        let sc = scramble(&nat, 3);
        assert!(is_isomorphic(&nat, &sc, 0).unwrap());
        let f = find_isomorphism(&nat, &sc, 0).unwrap().unwrap();
        for (a, b) in nat.generators().iter().zip(sc.generators()) {
            assert_eq!(f.mul(a), b.mul(&f));
        }
        assert_eq!(hom_space(&sc, &sc).unwrap().len(), 2);
    }

    #[test]
    fn endomorphisms_form_division_algebra() {
        let k = gf(5, 1);
        for m in [nat_module(&k), sym_power_nat(&k, 3).unwrap()] {
            let basis = hom_space(&m, &m).unwrap();
            assert_eq!(basis.len(), 1);
            for c in 1..5 {
                assert!(basis[0].scale(c).is_invertible());
            }
        }
        let k = gf(5, 2);
        let m = nat_module(&k);
        let basis = hom_space(&m, &m).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                if a + b > 0 {
                    assert!(basis[0].scale(a).add(&basis[1].scale(b)).is_invertible());
                }
            }
        }
    }

    #[test]
    fn sums_and_quotients() {
        let k = gf(7, 1);
        let a = nat_module(&k);
        let b = sym_power_nat(&k, 3).unwrap();
        let s = direct_sum(&a, &b).unwrap();
        assert_eq!(s.dim, 6);
        assert!(check_relations(&s).passed());
        let q = quotient(&b, &Subspace::zero(7, 4)).unwrap();
        assert!(is_isomorphic(&q, &b, 1).unwrap());
        let sub = Subspace::span(7, 6, &[crate::linalg::unit(6, 0), crate::linalg::unit(6, 1)]);
        assert!(is_isomorphic(&restrict(&s, &sub).unwrap(), &a, 1).unwrap());
        let bad = Subspace::span(7, 6, &[crate::linalg::unit(6, 1)]);
        assert!(matches!(quotient(&s, &bad), Err(Error::NotInvariant(_))));
        assert!(matches!(direct_sum(&a, &nat_module(&gf(5, 1))), Err(Error::FieldMismatch)));
    }

    #[test]
    fn relations_hold_and_mutations_fail() {
        for (p, m) in [(5, 1), (7, 1), (5, 2), (7, 2)] {
            let k = gf(p, m);
            for md in [nat_module(&k), sym_power_nat(&k, 2).unwrap(), sym_power_nat(&k, 3).unwrap(), nat_tensor_nat(&k)] {
                let r = check_relations(&md);
                assert!(r.passed(), "{:?}", r.failures());
                assert!(check_relations(&scramble(&md, 9)).passed());
            }
        }
        for i in [1, 2] {
            assert!(check_relations(&twist_tensor(&gf(5, 3), i).unwrap()).passed());
        }
        let k = gf(5, 2);
        let mut bad = nat_module(&k);
        bad.w_action = bad.identity();
        let r = check_relations(&bad);
        assert!(r.failures().contains(&"(uw)^3 = 1".to_string()));
        let mut bad = sym_power_nat(&gf(7, 1), 3).unwrap();
        let v = bad.u_actions[0].get(0, 3);
        bad.u_actions[0].set(0, 3, (v + 1) % 7);
        assert!(!check_relations(&bad).passed());
    }

    #[test]
    fn twist_powers_i_and_m_minus_i_are_isomorphic_over_gf_p() {
        // Galois conjugation by Frob^(m-i) followed by swapping the factors
        // identifies Nat^(Frob^i) x Nat with Nat^(Frob^(m-i)) x Nat over GF(p).
        for (p, m) in [(5, 3), (7, 3)] {
            let k = gf(p, m);
            let a = twist_tensor(&k, 1).unwrap();
            let b = twist_tensor(&k, 2).unwrap();
            assert_eq!(hom_space(&a, &b).unwrap().len(), 3);
            assert!(is_isomorphic(&a, &b, 0).unwrap());
        }
    }
}
