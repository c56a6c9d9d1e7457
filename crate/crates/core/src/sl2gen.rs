//! SL2(K) as 2x2 matrices over K, with the generators u, t, w.

use crate::error::{Error, Result};
use crate::gfield::{FieldElem, FieldSpec};

/// A matrix [[a, b], [c, d]] over K with determinant 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub entries: [[FieldElem; 2]; 2],
}

/// Bruhat form: either g in B, or g = b w u_mu.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruhatForm {
    Borel(GroupElem),
    Cell { b: GroupElem, mu: FieldElem },
}

impl GroupElem {
    pub fn new(spec: &FieldSpec, entries: [[FieldElem; 2]; 2]) -> Result<GroupElem> {
        for e in entries.iter().flatten() {
            spec.elem(e.coeffs.clone())?;
        }
        let g = GroupElem { entries };
        let det = g.det(spec);
        if det != spec.one() {
            return Err(Error::DeterminantNotOne(format!("{:?}", det.coeffs)));
        }
        Ok(g)
    }

    pub fn det(&self, spec: &FieldSpec) -> FieldElem {
        let [[a, b], [c, d]] = &self.entries;
        spec.sub(&spec.mul(a, d), &spec.mul(b, c))
    }

    pub fn a(&self) -> &FieldElem {
        &self.entries[0][0]
    }
    pub fn b(&self) -> &FieldElem {
        &self.entries[0][1]
    }
    pub fn c(&self) -> &FieldElem {
        &self.entries[1][0]
    }
    pub fn d(&self) -> &FieldElem {
        &self.entries[1][1]
    }

    pub fn mul(&self, spec: &FieldSpec, other: &GroupElem) -> GroupElem {
        let e = |i: usize, j: usize| {
            spec.add(
                &spec.mul(&self.entries[i][0], &other.entries[0][j]),
                &spec.mul(&self.entries[i][1], &other.entries[1][j]),
            )
        };
        GroupElem { entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] }
    }

    pub fn inverse(&self, spec: &FieldSpec) -> GroupElem {
        let [[a, b], [c, d]] = &self.entries;
        GroupElem { entries: [[d.clone(), spec.neg(b)], [spec.neg(c), a.clone()]] }
    }

    /// Entrywise Frobenius a -> a^(p^i).
    pub fn frobenius(&self, spec: &FieldSpec, i: usize) -> GroupElem {
        let f = |x: &FieldElem| spec.frobenius(x, i);
        let [[a, b], [c, d]] = &self.entries;
        GroupElem { entries: [[f(a), f(b)], [f(c), f(d)]] }
    }

    pub fn identity(spec: &FieldSpec) -> GroupElem {
        GroupElem { entries: [[spec.one(), spec.zero()], [spec.zero(), spec.one()]] }
    }
}

pub fn make_u(spec: &FieldSpec, lambda: &FieldElem) -> GroupElem {
    GroupElem { entries: [[spec.one(), lambda.clone()], [spec.zero(), spec.one()]] }
}

pub fn make_t(spec: &FieldSpec, lambda: &FieldElem) -> Result<GroupElem> {
    if spec.is_zero(lambda) {
        return Err(Error::ZeroScalar);
    }
    let li = spec.inv(lambda)?;
    Ok(GroupElem { entries: [[lambda.clone(), spec.zero()], [spec.zero(), li]] })
}

pub fn make_w(spec: &FieldSpec) -> GroupElem {
    GroupElem { entries: [[spec.zero(), spec.one()], [spec.from_int(-1), spec.zero()]] }
}

/// The word u_l w u_{1/l} w u_l w, which equals t_l.
pub fn t_word(spec: &FieldSpec, lambda: &FieldElem) -> Result<GroupElem> {
    let li = spec.inv(lambda).map_err(|_| Error::ZeroScalar)?;
    let u = make_u(spec, lambda);
    let ui = make_u(spec, &li);
    let w = make_w(spec);
    Ok([&w, &ui, &w, &u, &w].iter().fold(u.clone(), |acc, g| acc.mul(spec, g)))
}

pub fn bruhat(spec: &FieldSpec, g: &GroupElem) -> BruhatForm {
    if spec.is_zero(g.c()) {
        return BruhatForm::Borel(g.clone());
    }
    // g = [[x, y], [0, 1/x]] w u_mu with x = -1/c, y = -a, mu = d/c
    let ci = spec.inv(g.c()).expect("c is nonzero");
    let x = spec.neg(&ci);
    let y = spec.neg(g.a());
    let mu = spec.mul(g.d(), &ci);
    let xi = spec.neg(g.c());
    BruhatForm::Cell { b: GroupElem { entries: [[x, y], [spec.zero(), xi]] }, mu }
}

/// A Borel element [[x, y], [0, 1/x]] as (x, s) with b = t_x u_s.
pub fn borel_parts(spec: &FieldSpec, b: &GroupElem) -> (FieldElem, FieldElem) {
    let x = b.a().clone();
    let s = spec.div(b.b(), &x).expect("diagonal entry of an SL2 element is nonzero");
    (x, s)
}
