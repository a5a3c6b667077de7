use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::PerfectForm;
use crate::field::{Field, FieldElement};
use crate::hermitian::{HermitianForm, LatticeVector};
use crate::rational::floor_i64;

/// A 2x2 matrix over `F`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transformation {
    pub entries: [FieldElement; 4],
}

impl Transformation {
    pub fn new(g11: FieldElement, g12: FieldElement, g21: FieldElement, g22: FieldElement) -> Self {
        Transformation {
            entries: [g11, g12, g21, g22],
        }
    }

    pub fn identity() -> Self {
        Transformation::new(
            FieldElement::one(),
            FieldElement::zero(),
            FieldElement::zero(),
            FieldElement::one(),
        )
    }

    pub fn from_ints(e: [[i64; 2]; 4]) -> Self {
        Transformation {
            entries: e.map(|[a, b]| FieldElement::from_ints(a, b)),
        }
    }

    fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[2 * i + j]
    }

    pub fn determinant(&self, field: &Field) -> FieldElement {
        &field.mul(self.at(0, 0), self.at(1, 1)) - &field.mul(self.at(0, 1), self.at(1, 0))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(FieldElement::is_integral)
    }

    /// Integral with unit determinant, i.e. an element of `GL_2(O_F)`.
    pub fn is_unimodular(&self, field: &Field) -> bool {
        self.is_integral() && field.is_unit(&self.determinant(field))
    }

    pub fn mul(&self, field: &Field, other: &Transformation) -> Transformation {
        let e = |i: usize, j: usize| {
            &field.mul(self.at(i, 0), other.at(0, j)) + &field.mul(self.at(i, 1), other.at(1, j))
        };
        Transformation::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn conjugate_transpose(&self, field: &Field) -> Transformation {
        let c = |i, j| field.conjugate(self.at(j, i));
        Transformation::new(c(0, 0), c(0, 1), c(1, 0), c(1, 1))
    }

    pub fn inverse(&self, field: &Field) -> Option<Transformation> {
        let det = self.determinant(field);
        let inv = field.inverse(&det).ok()?;
        let s = |x: &FieldElement| field.mul(x, &inv);
        Some(Transformation::new(
            s(self.at(1, 1)),
            s(&-self.at(0, 1).clone()),
            s(&-self.at(1, 0).clone()),
            s(self.at(0, 0)),
        ))
    }

    pub fn apply(&self, field: &Field, v: &LatticeVector) -> Option<LatticeVector> {
        let (x, y) = (v.first(), v.second());
        let nx = &field.mul(self.at(0, 0), &x) + &field.mul(self.at(0, 1), &y);
        let ny = &field.mul(self.at(1, 0), &x) + &field.mul(self.at(1, 1), &y);
        LatticeVector::from_elements(&nx, &ny)
    }

    /// `g . A = g A conj(g)^T`.
    pub fn act(&self, field: &Field, form: &HermitianForm) -> HermitianForm {
        let a = FieldElement::from_rational(form.a.clone());
        let c = FieldElement::from_rational(form.c.clone());
        let m = Transformation::new(a, form.b.clone(), field.conjugate(&form.b), c);
        let r = self.mul(field, &m).mul(field, &self.conjugate_transpose(field));
        debug_assert!(r.at(0, 0).x1.is_zero() && r.at(1, 1).x1.is_zero());
        HermitianForm::new(r.at(0, 0).x0.clone(), r.at(0, 1).clone(), r.at(1, 1).x0.clone())
    }

    /// Integer coordinate pairs `(x0, x1)` per entry, when integral.
    pub fn to_ints(&self) -> Option<[[i64; 2]; 4]> {
        let mut out = [[0; 2]; 4];
        for (o, e) in out.iter_mut().zip(&self.entries) {
            let (a, b) = e.to_ints()?;
            *o = [a, b];
        }
        Some(out)
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.entries[0], self.entries[1], self.entries[2], self.entries[3]
        )
    }
}

impl Serialize for Transformation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_ints()
            .ok_or_else(|| serde::ser::Error::custom("non-integral transformation"))?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Transformation::from_ints(<[[i64; 2]; 4]>::deserialize(d)?))
    }
}

/// Size reduction: some `g` in `GL_2(O_F)` with `g . form` having small
/// diagonal and off-diagonal part, together with `g . form`.
///
/// Alternates translations `[[1, 0], [m, 1]]`, which shift `b` by `a conj(m)`,
/// with swaps of the basis while the second diagonal entry drops below the
/// first. Each swap strictly lowers `a`, a value of the form on the lattice,
/// so this terminates.
pub fn reduce(field: &Field, form: &HermitianForm) -> (Transformation, HermitianForm) {
    let swap = Transformation::from_ints([[0, 0], [1, 0], [1, 0], [0, 0]]);
    let mut g = Transformation::identity();
    let mut cur = form.clone();
    loop {
        // conj(m) close to -b / a
        let target = FieldElement::new(-&cur.b.x0 / &cur.a, -&cur.b.x1 / &cur.a);
        let (f0, f1) = (floor_i64(&target.x0), floor_i64(&target.x1));
        let (t, next) = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .into_iter()
            .map(|(e0, e1)| {
                let m = field.conjugate(&FieldElement::from_ints(f0 + e0, f1 + e1));
                let t = Transformation::new(FieldElement::one(), FieldElement::zero(), m, FieldElement::one());
                let next = t.act(field, &cur);
                (t, next)
            })
            .min_by(|x, y| x.1.c.cmp(&y.1.c))
            .expect("four candidates");
        g = t.mul(field, &g);
        cur = next;
        if cur.c >= cur.a {
            return (g, cur);
        }
        g = swap.mul(field, &g);
        cur = swap.act(field, &cur);
    }
}

fn independent_pair(field: &Field, vs: &[LatticeVector]) -> Option<(LatticeVector, LatticeVector)> {
    for i in 0..vs.len() {
        for j in (i + 1)..vs.len() {
            if !vs[i].cross(field, &vs[j]).is_zero() {
                return Some((vs[i], vs[j]));
            }
        }
    }
    None
}

/// Every `g` in `GL_2(O_F)` with `g . from = to`; stops after the first if
/// `first_only`.
fn search(field: &Field, from: &PerfectForm, to: &PerfectForm, first_only: bool) -> Vec<Transformation> {
    let mut found = Vec::new();
    if from.minimal.len() != to.minimal.len() || from.determinant(field) != to.determinant(field) {
        return found;
    }
    let Some((v1, v2)) = independent_pair(field, &from.minimal.vectors) else {
        return found;
    };
    // k maps minimal vectors of `from` to those of `to`, so
    // to[k x] = from[x] and g = (k^*)^{-1}.
    let basis = Transformation::new(v1.first(), v2.first(), v1.second(), v2.second());
    let basis_inv = basis.inverse(field).expect("independent pair");
    let target_norm = field.norm(&v1.cross(field, &v2));
    let images: Vec<LatticeVector> = to
        .minimal
        .vectors
        .iter()
        .flat_map(|w| [*w, w.neg()])
        .collect();
    for w1 in &images {
        for w2 in &images {
            if field.norm(&w1.cross(field, w2)) != target_norm {
                continue;
            }
            let w = Transformation::new(w1.first(), w2.first(), w1.second(), w2.second());
            let k = w.mul(field, &basis_inv);
            if !k.is_unimodular(field) {
                continue;
            }
            let kh = k.conjugate_transpose(field);
            if kh.act(field, &to.form) != from.form {
                continue;
            }
            let g = kh.inverse(field).expect("unimodular");
            debug_assert!(g.act(field, &from.form) == to.form);
            found.push(g);
            if first_only {
                return found;
            }
        }
    }
    found
}

/// Some `g` in `GL_2(O_F)` with `g . p.form = p2.form`, if one exists.
pub fn are_equivalent(field: &Field, p: &PerfectForm, p2: &PerfectForm) -> Option<Transformation> {
    search(field, p, p2, true).into_iter().next()
}

/// All elements of the stabilizer of `p` in `GL_2(O_F)`.
pub fn stabilizer(field: &Field, p: &PerfectForm) -> Vec<Transformation> {
    search(field, p, p, false)
}

/// Order of the stabilizer in `GL_2(O_F)` and of its image in
/// `PGL_2(O_F)`.
pub fn stabilizer_order(field: &Field, p: &PerfectForm) -> (u64, u64) {
    let full = stabilizer(field, p).len() as u64;
    (full, full / field.unit_count as u64)
}
