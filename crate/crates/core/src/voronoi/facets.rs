use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::{distinct_points, PerfectForm};
use crate::field::Field;
use crate::hermitian::{pairing, point_row, HermitianForm};
use crate::linalg;
use crate::rational::{primitive_integer_vector, Rational};

/// A facet of a perfect cone, given by a supporting functional that vanishes
/// on the member vectors and is positive on every other minimal vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFacet {
    /// Primitive integer coordinates `(a, b1, b2, c)`.
    pub support: HermitianForm,
    /// Indices into the minimal vectors of the perfect form.
    pub members: Vec<usize>,
}

/// Every facet of the cone spanned by the cone points of `p`.
pub fn cone_facets(field: &Field, p: &PerfectForm) -> Vec<ConeFacet> {
    let pts = distinct_points(&p.cone_points);
    let rows: Vec<Vec<Rational>> = pts.iter().map(|q| point_row(field, q)).collect();
    let n = pts.len();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let sub = [rows[i].clone(), rows[j].clone(), rows[k].clone()];
                let ker = linalg::kernel(&sub, 4);
                if ker.len() != 1 {
                    continue;
                }
                let coords: [Rational; 4] = ker[0].clone().try_into().expect("kernel of width 4");
                let vals: Vec<Rational> = pts.iter().map(|q| pairing(field, &coords, q)).collect();
                let pos = vals.iter().any(Signed::is_positive);
                let neg = vals.iter().any(Signed::is_negative);
                if pos && neg {
                    continue;
                }
                let sign = if neg { -1 } else { 1 };
                let prim = primitive_integer_vector(&coords);
                let prim: Vec<_> = prim.into_iter().map(|x| x * sign).collect();
                if !seen.insert(prim.clone()) {
                    continue;
                }
                let support = HermitianForm::from_coords(
                    prim.into_iter()
                        .map(Rational::from_integer)
                        .collect::<Vec<_>>()
                        .try_into()
                        .expect("four coordinates"),
                );
                let members = p
                    .cone_points
                    .iter()
                    .enumerate()
                    .filter(|(_, q)| support.pair(field, q).is_zero())
                    .map(|(idx, _)| idx)
                    .collect();
                out.push(ConeFacet { support, members });
            }
        }
    }
    out
}

impl ConeFacet {
    /// Checks the defining sign pattern against `p`.
    pub fn is_facet_of(&self, field: &Field, p: &PerfectForm) -> bool {
        let mut member_points = Vec::new();
        for (idx, q) in p.cone_points.iter().enumerate() {
            let v = self.support.pair(field, q);
            let is_member = self.members.contains(&idx);
            if is_member != v.is_zero() || v.is_negative() {
                return false;
            }
            if is_member {
                member_points.push(*q);
            }
        }
        super::span_rank(field, &member_points) == 3
    }
}
