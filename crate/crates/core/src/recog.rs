//! Recognition of Nat, Sym2, Sym3 and the twisted tensor, with certificates.
//!
//! Each branch rebuilds the hidden K-structure from the group action alone,
//! then fixes an anchor vector and transports the canonical basis along
//! maps defined from the action, which yields the isomorphism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp;
use crate::gfield::{FieldElem, FieldSpec};
use crate::linalg::{vis_zero, vscale, DirectSum, Mat, Subspace, Vector};
use crate::modcore::{self, check_relations, GModule, Tag};
use crate::poly;
use crate::tordec::{self, TDecomposition};
use crate::unifilt::{self, Filtration, Irreducibility};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution_sign: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_failures: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub irreducibility: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Tag>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tag: Tag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_power: Option<usize>,
    /// Actions of the K-basis scalars x^0, ..., x^{m-1}, row-major.
    pub scalar_action: Vec<Vec<u32>>,
    /// Row-major d x d matrix from the input module to the canonical one.
    pub iso: Vec<u32>,
    pub diagnostics: Diagnostics,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn iso_matrix(&self, p: u32, d: usize) -> Result<Mat> {
        Mat::from_flat(p, d, d, self.iso.clone())
    }

    pub fn scalar_matrices(&self, p: u32, d: usize) -> Result<Vec<Mat>> {
        self.scalar_action.iter().map(|s| Mat::from_flat(p, d, d, s.clone())).collect()
    }
}

/// A refused input: the error plus whatever was learned before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub error: Error,
    pub diagnostics: Diagnostics,
}

impl Rejection {
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "error": self.error.kind(),
            "message": self.error.to_string(),
            "diagnostics": self.diagnostics,
        });
        if let Error::Reducible { witness } = &self.error {
            v["witness"] = serde_json::json!(witness);
        }
        v
    }
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

fn identity_failure(name: &str, v: &[u32]) -> Error {
    Error::IdentityFailure { identity: name.into(), vector: v.to_vec() }
}

/// The scalar by which w^2 acts, as +1 or -1.
pub fn involution_sign(m: &GModule) -> Result<i32> {
    let w2 = m.w_action.mul(&m.w_action);
    match w2.as_scalar() {
        Some(1) => Ok(1),
        Some(c) if c == m.p() - 1 => Ok(-1),
        _ => Err(Error::NotPlusMinusOne),
    }
}

/// Everything the branches share.
pub struct Analysis {
    pub filtration: Filtration,
    pub t_g: Mat,
    pub center: Subspace,
    pub commutator: Subspace,
    pub decomposition: TDecomposition,
    pub sign: i32,
}

impl Analysis {
    pub fn new<R: Rng + ?Sized>(m: &GModule, rng: &mut R) -> Result<Analysis> {
        let filtration = unifilt::compute_filtration(m)?;
        let decomposition = tordec::t_minimal_summands(m, rng)?;
        Ok(Analysis {
            filtration,
            t_g: tordec::torus_generator(m),
            center: decomposition.center.clone(),
            commutator: decomposition.commutator.clone(),
            decomposition,
            sign: involution_sign(m)?,
        })
    }
}

fn expected(tag: Tag) -> (usize, i32, usize) {
    // (length, involution sign, non-trivial T-lines)
    match tag {
        Tag::Nat => (2, -1, 2),
        Tag::Sym2 => (3, 1, 2),
        Tag::Sym3 => (4, -1, 4),
        Tag::TwistTensor => (3, 1, 4),
    }
}

/// Branch selection from (U-length, d/m) plus the structural cross-checks.
pub fn classify_analysis(m: &GModule, a: &Analysis) -> Result<Tag> {
    let (d, k) = (m.dim, m.m());
    let len = a.filtration.length();
    if d > 4 * k || d % k != 0 {
        return Err(Error::OutOfScope(format!("dimension {d} over GF({}) with m = {k}", m.p())));
    }
    let tag = match (len, d / k) {
        (2, 2) => Tag::Nat,
        (3, 3) => Tag::Sym2,
        (4, 4) => Tag::Sym3,
        (3, 4) => Tag::TwistTensor,
        (l, r) => return Err(Error::OutOfScope(format!("U-length {l} with K-rank {r}"))),
    };
    let (_, sign, lines) = expected(tag);
    if a.sign != sign {
        return Err(Error::Inconsistent(format!("central involution acts as {} on a {} candidate", a.sign, tag.name())));
    }
    if a.decomposition.parity != lines || a.decomposition.parity % 2 != 0 {
        return Err(Error::Inconsistent(format!(
            "{} non-trivial T-lines on a {} candidate",
            a.decomposition.parity,
            tag.name()
        )));
    }
    let f = &a.filtration;
    let wz = f.z(len - 1).image(&m.w_action);
    if !f.z(1).intersect(&wz).is_zero() {
        return Err(Error::Inconsistent("Z_1 meets w Z_{n-1}".into()));
    }
    let top = a.t_g.induced_on_quotient(f.z(len - 1))?;
    if top.is_identity() {
        return Err(Error::Inconsistent("T centralises the top factor".into()));
    }
    for u in &m.u_actions {
        let img = a.center.image(&u.sub(&m.identity()));
        if !a.commutator.contains_space(&img) {
            return Err(Error::Inconsistent("[U, C_V(T)] is not inside [T, V]".into()));
        }
    }
    Ok(tag)
}

fn diagnostics_of(a: &Analysis) -> Diagnostics {
    Diagnostics {
        filtration_dims: Some(a.filtration.dims()),
        length: Some(a.filtration.length()),
        involution_sign: Some(a.sign),
        line_count: Some(a.decomposition.parity),
        center_dim: Some(a.center.dim()),
        ..Diagnostics::default()
    }
}

/// Full pipeline up to the branch decision.
pub fn classify(m: &GModule, seed: u64) -> std::result::Result<Tag, Rejection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, a, diag) = prepare(m, &mut rng)?;
    classify_analysis(m, &a).map_err(|error| Rejection { error, diagnostics: diag })
}

fn prepare(m: &GModule, rng: &mut ChaCha8Rng) -> std::result::Result<((), Analysis, Diagnostics), Rejection> {
    let mut diag = Diagnostics::default();
    let reject = |error: Error, diag: &Diagnostics| Rejection { error, diagnostics: diag.clone() };
    if m.p() == 2 || m.p() == 3 {
        return Err(reject(
            Error::BadCharacteristic { p: m.p(), reason: "recognition needs p >= 5".into() },
            &diag,
        ));
    }
    let rel = check_relations(m);
    if !rel.passed() {
        diag.relation_failures = Some(rel.failures());
        return Err(reject(Error::RelationsFailed(rel.failures().join("; ")), &diag));
    }
    match unifilt::is_irreducible(m, rng) {
        Irreducibility::Irreducible => diag.irreducibility = Some("irreducible".into()),
        Irreducibility::Reducible(witness) => {
            diag.irreducibility = Some("reducible".into());
            return Err(reject(Error::Reducible { witness }, &diag));
        }
        Irreducibility::Undecided => {
            diag.irreducibility = Some("undecided".into());
            return Err(reject(Error::Undecided, &diag));
        }
    }
    let filtration = unifilt::compute_filtration(m).map_err(|e| reject(e, &diag))?;
    diag.filtration_dims = Some(filtration.dims());
    diag.length = Some(filtration.length());
    let a = Analysis::new(m, rng).map_err(|e| reject(e, &diag))?;
    let mut full = diagnostics_of(&a);
    full.irreducibility = diag.irreducibility.clone();
    Ok(((), a, full))
}

/// Classify and run the matching branch.
pub fn recognize(m: &GModule, seed: u64) -> std::result::Result<Certificate, Rejection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, a, mut diag) = prepare(m, &mut rng)?;
    let tag = classify_analysis(m, &a).map_err(|error| Rejection { error, diagnostics: diag.clone() })?;
    diag.branch = Some(tag);
    let result = match tag {
        Tag::Nat => nat_branch(m, &a),
        Tag::Sym2 => sym2_branch(m, &a),
        Tag::Sym3 => sym3_branch(m, &a, &mut rng),
        Tag::TwistTensor => twist_branch(m, &a, &mut rng),
    };
    let mut cert = result.map_err(|error| Rejection { error, diagnostics: diag.clone() })?;
    cert.diagnostics = diag.clone();
    let report = verify_certificate(m, &cert);
    if !report.passed() {
        return Err(Rejection {
            error: Error::Inconsistent(format!("certificate self-check failed: {:?}", report.failures())),
            diagnostics: diag,
        });
    }
    Ok(cert)
}

fn branch_entry<F>(m: &GModule, seed: u64, f: F) -> Result<Certificate>
where
    F: FnOnce(&GModule, &Analysis, &mut ChaCha8Rng) -> Result<Certificate>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Analysis::new(m, &mut rng)?;
    let mut cert = f(m, &a, &mut rng)?;
    cert.diagnostics = diagnostics_of(&a);
    Ok(cert)
}

/// Run the Nat branch directly, without classification.
pub fn recognize_nat(m: &GModule, seed: u64) -> Result<Certificate> {
    branch_entry(m, seed, |m, a, _| nat_branch(m, a))
}

pub fn recognize_sym2(m: &GModule, seed: u64) -> Result<Certificate> {
    branch_entry(m, seed, |m, a, _| sym2_branch(m, a))
}

pub fn recognize_sym3(m: &GModule, seed: u64) -> Result<Certificate> {
    branch_entry(m, seed, sym3_branch)
}

pub fn recognize_twist(m: &GModule, seed: u64) -> Result<Certificate> {
    branch_entry(m, seed, twist_branch)
}

fn basis_partials(m: &GModule) -> Vec<Mat> {
    (0..m.m()).map(|j| m.partial(&m.field.basis(j))).collect()
}

/// Columns S_{x^j} v_k at position k*m + j, inverted: the map sending the
/// frame to the canonical coordinate basis.
fn frame_iso(m: &GModule, scalars: &[Mat], anchors: &[Vector]) -> Result<Mat> {
    let k = m.m();
    let mut cols = vec![Vec::new(); anchors.len() * k];
    for (i, v) in anchors.iter().enumerate() {
        for (j, s) in scalars.iter().enumerate() {
            cols[i * k + j] = s.mul_vec(v);
        }
    }
    Mat::from_cols(m.p(), m.dim, &cols)
        .inverse()
        .ok_or_else(|| Error::Inconsistent("transported frame is not a basis".into()))
}

fn certificate(m: &GModule, tag: Tag, chi: Option<usize>, scalars: Vec<Mat>, anchors: &[Vector]) -> Result<Certificate> {
    for s in &scalars {
        for g in m.generators() {
            if !s.commutes_with(&g) {
                return Err(Error::Inconsistent("reconstructed scalars do not commute with the action".into()));
            }
        }
    }
    let failures = field_action_failures(&m.field, &scalars);
    if !failures.is_empty() {
        return Err(Error::Inconsistent(format!("reconstructed scalars: {}", failures.join("; "))));
    }
    let iso = frame_iso(m, &scalars, anchors)?;
    Ok(Certificate {
        tag,
        chi_power: chi,
        scalar_action: scalars.into_iter().map(|s| s.data).collect(),
        iso: iso.data,
        diagnostics: Diagnostics::default(),
    })
}

fn nat_branch(m: &GModule, a: &Analysis) -> Result<Certificate> {
    let z1 = a.filtration.z(1).clone();
    let w = &m.w_action;
    let i = w.mul(w);
    let d = m.partial(&m.field.one());
    // b = ia: d(wa) = ia on Z_1
    for v in &z1.basis {
        if d.mul(w).mul_vec(v) != i.mul_vec(v) {
            return Err(identity_failure("d(wa) = ia", v));
        }
    }
    let wz1 = z1.image(w);
    let ds = DirectSum::new(vec![z1.clone(), wz1])?;
    let (p1, p2) = (ds.projector(0), ds.projector(1));
    let wi = w.inverse().ok_or(Error::Singular)?;
    let scalars = (0..m.m())
        .map(|j| {
            let t = m.t_of(&m.field.basis(j))?;
            Ok(t.mul(&p1).add(&w.mul(&t).mul(&wi).mul(&p2)))
        })
        .collect::<Result<Vec<_>>>()?;
    let a0 = z1.basis[0].clone();
    let e2 = w.neg().mul_vec(&a0);
    certificate(m, Tag::Nat, None, scalars, &[a0, e2])
}

fn sym2_branch(m: &GModule, a: &Analysis) -> Result<Certificate> {
    let p = m.p();
    let w = &m.w_action;
    let partials = basis_partials(m);
    let center = a.center.clone();
    let l_vecs: Vec<Vector> =
        partials.iter().flat_map(|d| center.basis.iter().map(move |c| d.mul_vec(c))).collect();
    let l = Subspace::span(p, m.dim, &l_vecs);
    if l != *a.filtration.z(1) {
        return Err(Error::Inconsistent("[U, C_V(T)] differs from Z_1".into()));
    }
    let wl = l.image(w);
    let ds = DirectSum::new(vec![l.clone(), center.clone(), wl])?;
    let (pl, pc, pw) = (ds.projector(0), ds.projector(1), ds.projector(2));
    let uw = m.u_actions[0].mul(w);
    let d = &partials[0];
    for v in &l.basis {
        let comps = ds.components(&uw.mul_vec(v));
        if comps[2] != w.mul_vec(v) {
            return Err(identity_failure("wL-part of uwa = wa", v));
        }
        if comps[0] != *v {
            return Err(identity_failure("l(a) = a", v));
        }
        let c = &comps[1];
        if w.mul_vec(c) != vscale(p, c, p - 1) {
            return Err(identity_failure("w c(a) = -c(a)", v));
        }
        if d.mul_vec(c) != vscale(p, v, 2) {
            return Err(identity_failure("d c(a) = 2a", v));
        }
    }
    let c = pc.mul(&uw).mul(&pl);
    let half = fp::inv(p, 2).expect("p is odd");
    let wi = w.inverse().ok_or(Error::Singular)?;
    let scalars: Vec<Mat> = partials
        .iter()
        .map(|dj| {
            let on_l = dj.mul(&c).mul(&pl);
            let on_c = c.mul(dj).mul(&pc);
            let on_wl = w.mul(dj).mul(&c).mul(&wi).mul(&pw);
            on_l.add(&on_c).add(&on_wl).scale(half)
        })
        .collect();
    let a0 = l.basis[0].clone();
    let g1 = vscale(p, &c.mul_vec(&a0), half);
    let g2 = w.mul_vec(&a0);
    certificate(m, Tag::Sym2, None, scalars, &[a0, g1, g2])
}

/// beta together with the decomposition it is read from.
pub struct BetaMap {
    pub domain: Subspace,
    pub codomain: Subspace,
    pub decomposition: DirectSum,
    /// Index of the codomain among the summands.
    pub slot: usize,
    /// Ambient matrix of beta_1 (meaningful on the domain).
    pub matrix: Mat,
}

impl BetaMap {
    /// beta_lambda as an ambient matrix: the codomain part of u_lambda w.
    pub fn beta_lambda(&self, m: &GModule, lambda: &FieldElem) -> Mat {
        self.decomposition.projector(self.slot).mul(&m.u_of(lambda)).mul(&m.w_action)
    }
}

/// Which decomposition beta is read from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaBranch {
    Sym3,
    /// The twist branch, with the chosen line L.
    Twist,
}

/// Z_j meet w Z_{5-j}, j = 1..4.
pub fn sym3_pieces(m: &GModule, f: &Filtration) -> Vec<Subspace> {
    (1..=4).map(|j| f.z(j).intersect(&f.z(5 - j).image(&m.w_action))).collect()
}

/// Build beta for the Sym3 branch, or for the twist branch with line `l`.
pub fn compute_beta<R: Rng + ?Sized>(
    m: &GModule,
    f: &Filtration,
    branch: BetaBranch,
    l: Option<&Subspace>,
    rng: &mut R,
) -> Result<BetaMap> {
    let w = &m.w_action;
    let z1 = f.z(1).clone();
    let (parts, slot) = match branch {
        BetaBranch::Sym3 => (sym3_pieces(m, f), 1),
        BetaBranch::Twist => {
            let l = l.ok_or_else(|| Error::DecompositionFailure("twist branch needs a line".into()))?;
            (vec![z1.clone(), l.clone(), l.image(w), z1.image(w)], 1)
        }
    };
    let ds = DirectSum::new(parts)?;
    let codomain = ds.parts[slot].clone();
    let matrix = ds.projector(slot).mul(&m.u_actions[0]).mul(w);
    let image = z1.image(&matrix);
    if image != codomain || z1.dim() != codomain.dim() {
        return Err(Error::NotBijective("beta: Z_1 -> codomain".into()));
    }
    let beta = BetaMap { domain: z1, codomain, decomposition: ds, slot, matrix };
    check_beta_conjugation(m, &beta, rng)?;
    Ok(beta)
}

/// beta_{l^2}(a) = t_l beta(t_l a) on random (l, a).
fn check_beta_conjugation<R: Rng + ?Sized>(m: &GModule, beta: &BetaMap, rng: &mut R) -> Result<()> {
    let spec = &m.field;
    for _ in 0..50 {
        let l = spec.from_index(rng.gen_range(1..spec.size()));
        let coords: Vec<u32> = (0..beta.domain.dim()).map(|_| rng.gen_range(0..m.p())).collect();
        let a = beta.domain.from_coords(&coords);
        let t = m.t_of(&l)?;
        let lhs = beta.beta_lambda(m, &spec.mul(&l, &l)).mul_vec(&a);
        let rhs = t.mul(&beta.matrix).mul(&t).mul_vec(&a);
        if lhs != rhs {
            return Err(identity_failure("beta_{l^2}(a) = t_l beta(t_l a)", &a));
        }
    }
    Ok(())
}

fn sym3_branch<R: Rng + ?Sized>(m: &GModule, a: &Analysis, rng: &mut R) -> Result<Certificate> {
    let p = m.p();
    let w = &m.w_action;
    let beta = compute_beta(m, &a.filtration, BetaBranch::Sym3, None, rng)?;
    let ds = &beta.decomposition;
    let uw = m.u_actions[0].mul(w);
    let b = &beta.matrix;
    let d = m.partial(&m.field.one());
    for v in &beta.domain.basis {
        let comps = ds.components(&uw.mul_vec(v));
        if comps[3] != w.mul_vec(v) {
            return Err(identity_failure("top part of uwa = wa", v));
        }
        if comps[2] != w.mul_vec(&comps[1]) {
            return Err(identity_failure("third part of uwa = w beta(a)", v));
        }
        if comps[0] != vscale(p, v, p - 1) {
            return Err(identity_failure("bottom part of uwa = -a", v));
        }
        if d.mul(b).mul_vec(v) != vscale(p, v, p - 3) {
            return Err(identity_failure("d beta(a) = -3a", v));
        }
    }
    let k = fp::neg(p, fp::inv(p, 3).expect("p > 3"));
    let pr: Vec<Mat> = (0..4).map(|i| ds.projector(i)).collect();
    let wi = w.inverse().ok_or(Error::Singular)?;
    let scalars: Vec<Mat> = basis_partials(m)
        .iter()
        .map(|dj| {
            let s1 = dj.mul(b).mul(&pr[0]);
            let s2 = b.mul(dj).mul(&pr[1]);
            let s3 = w.mul(b).mul(dj).mul(&wi).mul(&pr[2]);
            let s4 = w.mul(dj).mul(b).mul(&wi).mul(&pr[3]);
            s1.add(&s2).add(&s3).add(&s4).scale(k)
        })
        .collect();
    let t = &a.t_g;
    for (j, s) in scalars.iter().enumerate() {
        if !s.commutes_with(t) || w.mul(s) != s.mul(w) {
            return Err(Error::Inconsistent(format!("scalar x^{j} is not compatible with t_g and w")));
        }
    }
    let a0 = beta.domain.basis[0].clone();
    let h1 = vscale(p, &b.mul_vec(&a0), k);
    let h2 = w.mul_vec(&h1);
    let h3 = w.neg().mul_vec(&a0);
    certificate(m, Tag::Sym3, None, scalars, &[a0, h1, h2, h3])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub additive: bool,
    pub multiplicative: bool,
    pub conjugation: bool,
    pub d_beta: bool,
    pub d_w: bool,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.additive && self.multiplicative && self.conjugation && self.d_beta && self.d_w
    }
}

/// psi_l = beta d_l on L: a ring map from K, plus the supporting identities.
pub fn psi_ring_check<R: Rng + ?Sized>(m: &GModule, beta: &BetaMap, rng: &mut R) -> Result<PsiReport> {
    let spec = &m.field;
    let l = &beta.codomain;
    let w = &m.w_action;
    let psi = |lam: &FieldElem| -> Result<Mat> { beta.matrix.mul(&m.partial(lam)).restrict_to(l) };
    let basis: Vec<FieldElem> = (0..spec.m).map(|j| spec.basis(j)).collect();
    let mut additive = true;
    let mut multiplicative = true;
    for x in &basis {
        for y in &basis {
            additive &= psi(x)?.add(&psi(y)?) == psi(&spec.add(x, y))?;
            multiplicative &= psi(x)?.mul(&psi(y)?) == psi(&spec.mul(x, y))?;
        }
    }
    additive &= psi(&spec.zero())?.is_zero();
    let mut conjugation = true;
    let mut d_beta = true;
    let mut d_w = true;
    for _ in 0..50 {
        let lam = spec.from_index(rng.gen_range(1..spec.size()));
        let mu = spec.from_index(rng.gen_range(0..spec.size()));
        let lhs = psi(&spec.mul(&mu, &spec.mul(&lam, &lam)))?;
        let pl = psi(&lam)?;
        conjugation &= lhs == pl.mul(&psi(&mu)?).mul(&pl);
        let t = m.t_of(&lam)?;
        let dl = m.partial(&lam);
        for a in &beta.domain.basis {
            d_beta &= dl.mul(&beta.beta_lambda(m, &lam)).mul_vec(a) == t.mul_vec(a);
        }
        for b in &l.basis {
            d_w &= dl.mul(w).mul_vec(b) == dl.mul(&t).neg().mul_vec(b);
        }
    }
    let report = PsiReport { additive, multiplicative, conjugation, d_beta, d_w };
    if !report.passed() {
        return Err(Error::RingCheckFailure(format!("{report:?}")));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chi {
    pub power: usize,
    /// m x m matrix over GF(p): column j holds chi(x^j).
    pub matrix: Mat,
}

/// chi(l) is the mu with d_mu b0 + d_l w b0 = 0.
pub fn extract_chi(m: &GModule, b0: &[u32]) -> Result<Chi> {
    let spec = &m.field;
    let k = spec.m;
    let partials = basis_partials(m);
    let dmat = Mat::from_cols(m.p(), m.dim, &partials.iter().map(|d| d.mul_vec(b0)).collect::<Vec<_>>());
    if dmat.rank() != k {
        return Err(Error::NotBijective("mu -> d_mu b0".into()));
    }
    let wb0 = m.w_action.mul_vec(b0);
    let mut cols = Vec::with_capacity(k);
    for d in &partials {
        let rhs = d.neg().mul_vec(&wb0);
        cols.push(dmat.solve(&rhs).ok_or_else(|| Error::NotBijective("d_l w b0 outside the image".into()))?);
    }
    let matrix = Mat::from_cols(m.p(), k, &cols);
    let chi = |c: &FieldElem| FieldElem { coeffs: matrix.mul_vec(&c.coeffs) };
    if chi(&spec.one()) != spec.one() {
        return Err(Error::NotAutomorphism("chi(1) != 1".into()));
    }
    for i in 0..k {
        for j in 0..k {
            let (x, y) = (spec.basis(i), spec.basis(j));
            if chi(&spec.mul(&x, &y)) != spec.mul(&chi(&x), &chi(&y)) {
                return Err(Error::NotAutomorphism(format!("chi(x^{i} x^{j})")));
            }
        }
    }
    let power = (0..k)
        .find(|&i| (0..k).all(|j| spec.frobenius(&spec.basis(j), i) == chi(&spec.basis(j))))
        .ok_or_else(|| Error::NotAutomorphism("not a Frobenius power".into()))?;
    Ok(Chi { power, matrix })
}

/// The two T-isotypic lines of Z_2 meet w Z_2.
fn twist_candidates(m: &GModule, a: &Analysis) -> Result<Vec<Subspace>> {
    let f = &a.filtration;
    let mid = f.z(2).intersect(&f.z(2).image(&m.w_action));
    let t = &a.t_g;
    let restricted = t.restrict_to(&mid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut blocks: Vec<Subspace> = poly::factor(m.p(), &restricted.minpoly(), &mut rng)
        .into_iter()
        .map(|(g, _)| t.eval_poly(&g).kernel_space().intersect(&mid))
        .collect();
    blocks.sort_by(|x, y| x.basis.cmp(&y.basis).reverse());
    if blocks.len() != 2 || blocks.iter().any(|b| b.dim() != m.m()) {
        return Err(Error::Inconsistent(format!(
            "Z_2 meet w Z_2 has dimension {} and {} isotypic blocks",
            mid.dim(),
            blocks.len()
        )));
    }
    if blocks[0].image(&m.w_action) != blocks[1] {
        return Err(Error::Inconsistent("w does not swap the middle lines".into()));
    }
    Ok(blocks)
}

/// The two candidate lines L for the twist branch, in a fixed order.
pub fn twist_lines(m: &GModule, seed: u64) -> Result<Vec<Subspace>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Analysis::new(m, &mut rng)?;
    twist_candidates(m, &a)
}

fn twist_branch<R: Rng + ?Sized>(m: &GModule, a: &Analysis, rng: &mut R) -> Result<Certificate> {
    let p = m.p();
    let w = &m.w_action;
    // L is the middle line whose chi is the smaller power; the other line
    // carries the complementary power m - i.
    let mut best: Option<(usize, Subspace)> = None;
    for l in twist_candidates(m, a)? {
        let chi = extract_chi(m, &l.basis[0])?;
        if best.as_ref().map_or(true, |(pw, _)| chi.power < *pw) {
            best = Some((chi.power, l));
        }
    }
    let (power, l) = best.expect("two candidates");
    if power == 0 {
        return Err(Error::Inconsistent("chi is the identity".into()));
    }
    for _ in 0..10 {
        let coords: Vec<u32> = (0..l.dim()).map(|_| rng.gen_range(0..p)).collect();
        let b = l.from_coords(&coords);
        if vis_zero(&b) {
            continue;
        }
        if extract_chi(m, &b)?.power != power {
            return Err(Error::Inconsistent("chi depends on the choice of b0".into()));
        }
    }
    let beta = compute_beta(m, &a.filtration, BetaBranch::Twist, Some(&l), rng)?;
    let ds = &beta.decomposition;
    let uw = m.u_actions[0].mul(w);
    for v in &beta.domain.basis {
        let comps = ds.components(&uw.mul_vec(v));
        if comps[3] != w.mul_vec(v) {
            return Err(identity_failure("top part of uwa = wa", v));
        }
        if comps[0] != *v {
            return Err(identity_failure("bottom part of uwa = a", v));
        }
        if comps[2] != w.neg().mul_vec(&comps[1]) {
            return Err(identity_failure("wL part of uwa = -w beta(a)", v));
        }
    }
    psi_ring_check(m, &beta, rng)?;
    let b = &beta.matrix;
    let pr: Vec<Mat> = (0..4).map(|i| ds.projector(i)).collect();
    let wi = w.inverse().ok_or(Error::Singular)?;
    let scalars: Vec<Mat> = basis_partials(m)
        .iter()
        .map(|dj| {
            let s1 = dj.mul(b).mul(&pr[0]);
            let s2 = b.mul(dj).mul(&pr[1]);
            let s3 = w.mul(b).mul(dj).mul(&wi).mul(&pr[2]);
            let s4 = w.mul(dj).mul(b).mul(&wi).mul(&pr[3]);
            s1.add(&s2).add(&s3).add(&s4)
        })
        .collect();
    let b0 = l.basis[0].clone();
    let a0 = m.partial(&m.field.one()).mul_vec(&b0);
    let e21 = w.neg().mul_vec(&b0);
    let e22 = w.mul_vec(&a0);
    certificate(m, Tag::TwistTensor, Some(power), scalars, &[a0, b0, e21, e22])
}

/// Checks that the scalar matrices realize the field: commuting, S_1 = I,
/// S_{x^j} = S_x^j, and the defining polynomial kills S_x.
pub fn field_action_failures(spec: &FieldSpec, s: &[Mat]) -> Vec<String> {
    let mut out = Vec::new();
    if s.len() != spec.m {
        out.push(format!("expected {} scalar matrices, got {}", spec.m, s.len()));
        return out;
    }
    let n = s[0].rows;
    if s.iter().any(|x| x.rows != n || x.cols != n) {
        out.push("scalar matrices have different shapes".into());
        return out;
    }
    if !s[0].is_identity() {
        out.push("the scalar 1 does not act as the identity".into());
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            if !s[i].commutes_with(&s[j]) {
                out.push(format!("scalars x^{i} and x^{j} do not commute"));
            }
        }
    }
    if spec.m >= 2 {
        let x = &s[1];
        for (j, sj) in s.iter().enumerate() {
            if x.pow(j as u64) != *sj {
                out.push(format!("scalar x^{j} is not the power of x"));
            }
        }
        if !x.eval_poly(&spec.poly).is_zero() {
            out.push("the defining polynomial does not vanish on x".into());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<(String, bool)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| n.clone()).collect()
    }
}

/// Independent check of a certificate against a module.
pub fn verify_certificate(m: &GModule, c: &Certificate) -> VerifyReport {
    let mut checks = Vec::new();
    let p = m.p();
    let d = m.dim;
    let scalars = c.scalar_matrices(p, d);
    let field_ok = match &scalars {
        Ok(s) => field_action_failures(&m.field, s).is_empty(),
        Err(_) => false,
    };
    checks.push(("scalar action is a field action".to_string(), field_ok));
    let iso = c.iso_matrix(p, d).ok().filter(|i| i.is_invertible());
    checks.push(("iso is invertible".to_string(), iso.is_some()));
    let chi = match c.tag {
        Tag::TwistTensor => c.chi_power,
        _ => Some(0),
    };
    let target = chi.and_then(|i| modcore::canonical(&m.field, c.tag, Some(i)).ok());
    let target_ok = match (&target, c.tag, c.chi_power) {
        (Some(_), Tag::TwistTensor, Some(_)) => true,
        (Some(_), Tag::TwistTensor, None) => false,
        (Some(_), _, None) => true,
        _ => false,
    };
    checks.push(("canonical target exists for tag and chi_power".to_string(), target_ok));
    let intertwines = match (&iso, &target) {
        (Some(f), Some(t)) if t.dim == d => {
            m.generators().iter().zip(t.generators()).all(|(g, h)| f.mul(g) == h.mul(f))
        }
        _ => false,
    };
    checks.push(("iso intertwines every generator".to_string(), intertwines));
    let k_linear = match (&iso, &scalars, &target) {
        (Some(f), Ok(s), Some(t)) if s.len() == m.m() && t.dim == d => (0..m.m()).all(|j| {
            let sc = modcore::scalar_block(&m.field, &m.field.basis(j), d / m.m());
            f.mul(&s[j]) == sc.mul(f)
        }),
        _ => false,
    };
    checks.push(("iso is K-linear".to_string(), k_linear));
    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcore::*;

    fn gf(p: u32, m: usize) -> FieldSpec {
        FieldSpec::default_for(p, m).unwrap()
    }

    #[test]
    fn signs() {
        let k = gf(7, 1);
        assert_eq!(involution_sign(&nat_module(&k)).unwrap(), -1);
        assert_eq!(involution_sign(&sym_power_nat(&k, 2).unwrap()).unwrap(), 1);
        assert_eq!(involution_sign(&sym_power_nat(&k, 3).unwrap()).unwrap(), -1);
        assert_eq!(involution_sign(&twist_tensor(&gf(5, 3), 1).unwrap()).unwrap(), 1);
        let mut bad = nat_module(&k);
        bad.w_action = Mat::from_rows(7, &[vec![1, 1], vec![0, 1]]);
        assert_eq!(involution_sign(&bad), Err(Error::NotPlusMinusOne));
    }

    #[test]
    fn canonical_modules_give_standard_structure() {
        for (p, m) in [(5, 1), (7, 1), (5, 2), (7, 2)] {
            let k = gf(p, m);
            for tag in [Tag::Nat, Tag::Sym2, Tag::Sym3] {
                let md = canonical(&k, tag, None).unwrap();
                let cert = recognize(&md, 1).unwrap();
                assert_eq!(cert.tag, tag);
                let s = cert.scalar_matrices(p, md.dim).unwrap();
                for j in 0..m {
                    assert_eq!(s[j], scalar_block(&k, &k.basis(j), tag.k_dim()), "{tag:?} GF({p}^{m})");
                }
                assert!(cert.iso_matrix(p, md.dim).unwrap().is_identity());
            }
        }
        let k = gf(5, 3);
        let md = twist_tensor(&k, 1).unwrap();
        let cert = recognize(&md, 1).unwrap();
        assert_eq!(cert.chi_power, Some(1));
        assert!(cert.iso_matrix(5, 12).unwrap().is_identity());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&sym_power_nat(&gf(7, 1), 3).unwrap(), 0).unwrap(), Tag::Sym3);
        assert_eq!(classify(&scramble(&twist_tensor(&gf(5, 3), 1).unwrap(), 3), 0).unwrap(), Tag::TwistTensor);
        let s4 = sym_power(&gf(11, 1), 4).unwrap();
        let r = classify(&s4, 0).unwrap_err();
        assert_eq!(r.error.kind(), "OutOfScope");
        assert_eq!(r.diagnostics.length, Some(5));
    }

    #[test]
    fn branch_identities_on_canonical_coordinates() {
        let k = gf(7, 1);
        let s3 = sym_power_nat(&k, 3).unwrap();
        let f = unifilt::compute_filtration(&s3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let beta = compute_beta(&s3, &f, BetaBranch::Sym3, None, &mut rng).unwrap();
        // beta(h0) = -3 h1
        assert_eq!(beta.matrix.mul_vec(&[1, 0, 0, 0]), vec![0, 4, 0, 0]);
        // d(-3 h1) = -3 h0
        assert_eq!(s3.partial(&k.one()).mul_vec(&[0, 4, 0, 0]), vec![4, 0, 0, 0]);
        let s2 = sym_power_nat(&k, 2).unwrap();
        // u w g0 = g0 + 2 g1 + g2, so c(g0) = 2 g1 and d c(g0) = 2 g0
        assert_eq!(s2.u_actions[0].mul(&s2.w_action).mul_vec(&[1, 0, 0]), vec![1, 2, 1]);
        assert_eq!(s2.partial(&k.one()).mul_vec(&[0, 2, 0]), vec![2, 0, 0]);
    }

    #[test]
    fn twist_beta_lands_in_middle_line() {
        let k = gf(5, 3);
        let md = twist_tensor(&k, 1).unwrap();
        let f = unifilt::compute_filtration(&md).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let e12: Vec<Vector> = (0..3).map(|j| crate::linalg::unit(12, 3 + j)).collect();
        let l = Subspace::span(5, 12, &e12);
        let beta = compute_beta(&md, &f, BetaBranch::Twist, Some(&l), &mut rng).unwrap();
        let img = beta.matrix.mul_vec(&crate::linalg::unit(12, 0));
        assert_eq!(img, crate::linalg::unit(12, 3));
        let rep = psi_ring_check(&md, &beta, &mut rng).unwrap();
        assert!(rep.passed());
        assert_eq!(extract_chi(&md, &crate::linalg::unit(12, 3)).unwrap().power, 1);
        assert_eq!(extract_chi(&md, &crate::linalg::unit(12, 6)).unwrap().power, 2);
    }

    #[test]
    fn chi_is_multiplicative() {
        let k = gf(7, 3);
        let md = scramble(&twist_tensor(&k, 2).unwrap(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = Analysis::new(&md, &mut rng).unwrap();
        for l in twist_candidates(&md, &a).unwrap() {
            let chi = extract_chi(&md, &l.basis[0]).unwrap();
            let f = |c: &FieldElem| FieldElem { coeffs: chi.matrix.mul_vec(&c.coeffs) };
            for _ in 0..50 {
                let x = k.from_index(rng.gen_range(0..343));
                let y = k.from_index(rng.gen_range(0..343));
                assert_eq!(f(&k.mul(&x, &y)), k.mul(&f(&x), &f(&y)));
            }
        }
    }

    #[test]
    fn misrouted_inputs_fail() {
        let k = gf(7, 1);
        let s2 = scramble(&sym_power_nat(&k, 2).unwrap(), 2);
        assert_eq!(recognize_nat(&s2, 0).unwrap_err().kind(), "IdentityFailure");
        assert!(recognize_sym2(&scramble(&nat_module(&k), 2), 0).is_err());
    }

    #[test]
    fn verify_rejects_tampering() {
        let k = gf(7, 1);
        let md = scramble(&sym_power_nat(&k, 3).unwrap(), 11);
        let cert = recognize(&md, 0).unwrap();
        assert!(verify_certificate(&md, &cert).passed());
        let mut bad = cert.clone();
        bad.iso = Mat::identity(7, 4).data;
        let r = verify_certificate(&md, &bad);
        assert!(r.failures().contains(&"iso intertwines every generator".to_string()));
        let mut bad = cert.clone();
        bad.tag = Tag::Sym2;
        assert!(!verify_certificate(&md, &bad).passed());
        let tw = scramble(&twist_tensor(&gf(5, 3), 1).unwrap(), 3);
        let cert = recognize(&tw, 0).unwrap();
        assert!(verify_certificate(&tw, &cert).passed());
        for off in [cert.chi_power.unwrap() + 1, cert.chi_power.unwrap() + 2, 0] {
            let mut bad = cert.clone();
            bad.chi_power = Some(off);
            assert!(!verify_certificate(&tw, &bad).passed(), "chi_power {off}");
        }
        let json = cert.to_json();
        assert_eq!(Certificate::from_json(&json).unwrap(), cert);
    }
}
