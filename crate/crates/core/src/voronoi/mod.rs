//! Voronoi's algorithm for binary Hermitian forms over `F`.
//!
//! A perfect form is stored normalized to minimum 1. Its cone is spanned by
//! the points `q(v)` of its minimal vectors; facets of that cone are found by
//! brute force over rank-3 triples, and crossing a facet yields the
//! neighboring perfect form. The walk over facets closes up modulo
//! `GL_2(O_F)` into an [`OrbitGraph`].

mod equivalence;
mod facets;
mod flip;
mod walk;

pub use equivalence::{are_equivalent, reduce, stabilizer, stabilizer_order, Transformation};
pub use facets::{cone_facets, ConeFacet};
pub use flip::{initial_perfect_form, initial_perfect_form_from, line_search, neighbor};
pub use walk::{enumerate_perfect_forms, enumerate_perfect_forms_from, Edge, OrbitGraph};

use num_traits::One;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermitian::{point_row, ConePoint, HermitianForm, MinimalData};
use crate::linalg;
use crate::rational::Rational;

/// Iteration caps. Exhausting one is an error, never a silent truncation.
#[derive(Clone, Debug)]
pub struct Limits {
    pub max_flips: usize,
    pub max_rank_steps: usize,
    pub max_line_search_steps: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_flips: 200_000,
            max_rank_steps: 1_000,
            max_line_search_steps: 400,
        }
    }
}

/// A perfect form normalized to minimum 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectForm {
    pub form: HermitianForm,
    pub minimal: MinimalData,
    /// `q(v)` for each minimal vector, in the same order.
    pub cone_points: Vec<ConePoint>,
}

impl PerfectForm {
    /// Rescales `form` to minimum 1 and checks perfection.
    pub fn from_form(field: &Field, form: &HermitianForm) -> Result<Self> {
        let md = form.minimal_vectors(field)?;
        let form = if md.minimum.is_one() {
            form.clone()
        } else {
            form.scale(&md.minimum.recip())
        };
        let minimal = MinimalData::new(Rational::one(), md.vectors)?;
        let cone_points = minimal.cone_points(field);
        if span_rank(field, &cone_points) != 4 {
            return Err(Error::NotPerfect);
        }
        Ok(PerfectForm {
            form,
            minimal,
            cone_points,
        })
    }

    /// Distinct cone points, sorted. Two perfect forms with the same key are
    /// the same form.
    pub fn key(&self) -> Vec<ConePoint> {
        distinct_points(&self.cone_points)
    }

    pub fn determinant(&self, field: &Field) -> Rational {
        self.form.determinant(field)
    }
}

pub(crate) fn distinct_points(points: &[ConePoint]) -> Vec<ConePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

/// Rank of the span of the points inside the space of Hermitian forms.
pub fn span_rank(field: &Field, points: &[ConePoint]) -> usize {
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| point_row(field, p)).collect();
    linalg::rank(&rows)
}

/// Whether the `q`-images of the minimal vectors of `form` span all four
/// dimensions.
pub fn is_perfect(field: &Field, form: &HermitianForm) -> Result<bool> {
    let md = form.minimal_vectors(field)?;
    if md.len() < 4 {
        return Ok(false);
    }
    Ok(span_rank(field, &md.cone_points(field)) == 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn identity_is_not_perfect() {
        for d in [1, 2, 3, 5, 7] {
            let f = Field::new(d).unwrap();
            assert!(!is_perfect(&f, &HermitianForm::identity()).unwrap());
            assert!(matches!(
                PerfectForm::from_form(&f, &HermitianForm::identity()),
                Err(Error::NotPerfect)
            ));
        }
        let f1 = Field::new(1).unwrap();
        let md = HermitianForm::identity().minimal_vectors(&f1).unwrap();
        assert_eq!(span_rank(&f1, &md.cone_points(&f1)), 2);
    }

    #[test]
    fn perfection_rejects_indefinite() {
        let f = Field::new(2).unwrap();
        let bad = HermitianForm::new(int(1), crate::FieldElement::from_ints(3, 0), int(1));
        assert!(matches!(is_perfect(&f, &bad), Err(Error::NotPositiveDefinite)));
    }

    use crate::hermitian::LatticeVector;
    use crate::FieldElement;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// A product of random elementary matrices, swaps and unit scalings.
    fn random_unimodular(f: &Field, rng: &mut ChaCha8Rng) -> Transformation {
        let units = f.all_units();
        let mut g = Transformation::identity();
        for _ in 0..rng.gen_range(1..6) {
            let m = FieldElement::from_ints(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let (o, z) = (FieldElement::one(), FieldElement::zero());
            let step = match rng.gen_range(0..4) {
                0 => Transformation::new(o, m, z.clone(), FieldElement::one()),
                1 => Transformation::new(o, z, m, FieldElement::one()),
                2 => Transformation::new(z.clone(), o.clone(), o, z),
                _ => Transformation::new(units[rng.gen_range(0..units.len())].clone(), z.clone(), z, o),
            };
            g = step.mul(f, &g);
        }
        g
    }

    #[test]
    fn d3_initial_form() {
        let f = Field::new(3).unwrap();
        let p = initial_perfect_form(&f).unwrap();
        assert_eq!(p.key().len(), 4);
        assert_eq!(cone_facets(&f, &p).len(), 4);
        let g = enumerate_perfect_forms(&f).unwrap();
        assert_eq!(g.len(), 1);
        for facet in &g.facets[0] {
            let q = neighbor(&f, &g.representatives[0], facet, &Limits::default()).unwrap();
            assert!(are_equivalent(&f, &g.representatives[0], &q).is_some());
        }
    }

    #[test]
    fn conjugates_are_equivalent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1, 2, 3, 7, 11] {
            let f = Field::new(d).unwrap();
            let p = initial_perfect_form(&f).unwrap();
            for _ in 0..100 {
                let g = random_unimodular(&f, &mut rng);
                assert!(g.is_unimodular(&f));
                let q = PerfectForm::from_form(&f, &g.act(&f, &p.form)).unwrap();
                let w = are_equivalent(&f, &p, &q).expect("conjugate not detected");
                assert!(w.is_unimodular(&f));
                assert_eq!(w.act(&f, &p.form), q.form);
            }
        }
    }

    #[test]
    fn reduce_is_unimodular_change_of_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [1, 2, 3, 5, 7, 15, 91] {
            let f = Field::new(d).unwrap();
            let p = initial_perfect_form(&f).unwrap();
            for _ in 0..30 {
                let a = random_unimodular(&f, &mut rng).act(&f, &p.form);
                let (g, r) = reduce(&f, &a);
                assert!(g.is_unimodular(&f));
                assert_eq!(g.act(&f, &a), r);
                assert!(r.a <= r.c);
                assert_eq!(r.determinant(&f), a.determinant(&f));
            }
        }
    }

    #[test]
    fn orbit_graph_invariants() {
        for d in [1, 2, 3, 5, 6, 7, 10, 11, 13, 15, 19, 23] {
            let f = Field::new(d).unwrap();
            let g = enumerate_perfect_forms(&f).unwrap();
            assert!(g.is_closed(), "d={d}");
            for (i, p) in g.representatives.iter().enumerate() {
                assert!(p.minimal.len() <= crate::hermitian::MAX_MINIMAL_VECTORS);
                let (full, image) = g.stabilizer_orders[i];
                assert_eq!(full % f.unit_count as u64, 0);
                assert_eq!(image * f.unit_count as u64, full);
                for q in &g.representatives[i + 1..] {
                    assert!(are_equivalent(&f, p, q).is_none(), "d={d}");
                }
            }
            for e in &g.edges {
                assert!(e.witness.is_unimodular(&f));
                assert_eq!(e.witness.act(&f, &g.representatives[e.to].form), e.neighbor);
                let facet = &g.facets[e.from][e.facet];
                let q = neighbor(&f, &g.representatives[e.from], facet, &Limits::default()).unwrap();
                assert_eq!(q.form, e.neighbor);
            }
        }
    }

    #[test]
    fn known_class_counts() {
        for (d, n) in [(1, 1), (2, 1), (3, 1), (5, 2), (6, 2), (7, 1), (10, 4), (11, 1), (13, 6), (14, 9), (15, 2)] {
            assert_eq!(enumerate_perfect_forms(&Field::new(d).unwrap()).unwrap().len(), n, "d={d}");
        }
    }

    #[test]
    fn scaling_invariance() {
        for d in [1, 2, 3, 5, 7, 11, 15] {
            let f = Field::new(d).unwrap();
            let base = enumerate_perfect_forms(&f).unwrap();
            let seven = HermitianForm::identity().scale(&int(7));
            let scaled = enumerate_perfect_forms_from(&f, &seven, &Limits::default()).unwrap();
            assert_eq!(base.representatives, scaled.representatives);
            assert_eq!(base.edges, scaled.edges);
        }
    }

    /// `|x_i| <= sqrt(min * (G^-1)_ii)` for every minimal vector.
    fn coordinate_bounds(gram: &[Vec<Rational>], min: &Rational) -> Vec<i64> {
        let mut m: Vec<Vec<Rational>> = (0..4)
            .map(|i| {
                let mut row = gram[i].clone();
                row.extend((0..4).map(|j| int((i == j) as i64)));
                row
            })
            .collect();
        linalg::rref(&mut m);
        (0..4)
            .map(|i| (crate::rational::to_f64(&(min * &m[i][4 + i]))).sqrt().floor() as i64)
            .collect()
    }

    #[test]
    fn minimal_vectors_match_brute_force() {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [1, 2, 3, 5, 7] {
            let f = Field::new(d).unwrap();
            let p = initial_perfect_form(&f).unwrap();
            let mut checked = 0;
            while checked < 50 {
                let a = random_unimodular(&f, &mut rng).act(&f, &p.form);
                let a = a.add_scaled(&crate::rational::frac(rng.gen_range(0..4), 7), &HermitianForm::identity());
                let md = a.minimal_vectors(&f).unwrap();
                let gram = a.to_quaternary(&f).gram;
                let b = coordinate_bounds(&gram, &md.minimum);
                if b.iter().map(|x| 2 * x + 1).product::<i64>() > 10_000 {
                    continue;
                }
                checked += 1;
                let den = gram.iter().flatten().fold(num_bigint::BigInt::from(1), |l, x| l.lcm(x.denom()));
                let g: Vec<Vec<i128>> = gram
                    .iter()
                    .map(|r| r.iter().map(|x| (x * &den).to_integer().to_i128().unwrap()).collect())
                    .collect();
                let mut brute = Vec::new();
                let mut best = i128::MAX;
                for x0 in -b[0]..=b[0] {
                    for x1 in -b[1]..=b[1] {
                        for y0 in -b[2]..=b[2] {
                            for y1 in -b[3]..=b[3] {
                                let v = LatticeVector::new(x0, x1, y0, y1);
                                if v.is_zero() || !v.is_canonical() {
                                    continue;
                                }
                                let val: i128 = (0..4)
                                    .flat_map(|r| (0..4).map(move |c| (r, c)))
                                    .map(|(r, c)| g[r][c] * v.0[r] as i128 * v.0[c] as i128)
                                    .sum();
                                if val < best {
                                    best = val;
                                    brute.clear();
                                }
                                if val == best {
                                    brute.push(v);
                                }
                            }
                        }
                    }
                }
                brute.sort();
                let mut got = md.vectors.clone();
                got.sort();
                assert_eq!(md.minimum * Rational::from_integer(den), int(best as i64));
                assert_eq!(got, brute);
            }
        }
    }

    #[test]
    fn walk_cap_is_an_error() {
        let f = Field::new(14).unwrap();
        let limits = Limits {
            max_flips: 3,
            ..Limits::default()
        };
        let r = enumerate_perfect_forms_from(&f, &HermitianForm::identity(), &limits);
        assert!(matches!(r, Err(Error::IterationCap { .. })));
    }
}
