//! Binary Hermitian forms over `F`, their cone points, and the transfer to
//! quaternary rational forms.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::lattice;
use crate::rational::{from_pq, int, to_pq, Rational};

/// A vector `(x, y)` of `O_F^2`, stored through the basis `{1, w}` as
/// `(x0, x1, y0, y1)` with `x = x0 + x1 w` and `y = y0 + y1 w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(pub [i64; 4]);

impl LatticeVector {
    pub fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Self {
        LatticeVector([x0, x1, y0, y1])
    }

    pub fn from_elements(x: &FieldElement, y: &FieldElement) -> Option<Self> {
        let (x0, x1) = x.to_ints()?;
        let (y0, y1) = y.to_ints()?;
        Some(LatticeVector([x0, x1, y0, y1]))
    }

    pub fn first(&self) -> FieldElement {
        FieldElement::from_ints(self.0[0], self.0[1])
    }

    pub fn second(&self) -> FieldElement {
        FieldElement::from_ints(self.0[2], self.0[3])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.map(|c| -c))
    }

    /// First nonzero coordinate is positive.
    pub fn is_canonical(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }

    /// The representative of `{v, -v}` with positive leading coordinate.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            *self
        } else {
            self.neg()
        }
    }

    pub fn scale(&self, field: &Field, u: &FieldElement) -> Option<Self> {
        LatticeVector::from_elements(&field.mul(u, &self.first()), &field.mul(u, &self.second()))
    }

    /// `x1 y2 - x2 y1` for the pair of vectors.
    pub fn cross(&self, field: &Field, other: &LatticeVector) -> FieldElement {
        &field.mul(&self.first(), &other.second()) - &field.mul(&self.second(), &other.first())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first(), self.second())
    }
}

/// The point `q(v) = v v^*` in coordinates `(N(x), s1, s2, N(y))` where
/// `conj(x) y = s1 + s2 w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConePoint(pub [i64; 4]);

impl ConePoint {
    pub fn p_a(&self) -> i64 {
        self.0[0]
    }
    pub fn s1(&self) -> i64 {
        self.0[1]
    }
    pub fn s2(&self) -> i64 {
        self.0[2]
    }
    pub fn p_c(&self) -> i64 {
        self.0[3]
    }

    pub fn as_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| int(c)).collect()
    }

    /// `p_a p_c = N(s1 + s2 w)`: the point lies on the boundary of the cone.
    pub fn is_rank_one(&self, field: &Field) -> bool {
        let s = FieldElement::from_ints(self.s1(), self.s2());
        self.p_a() >= 0 && self.p_c() >= 0 && int(self.p_a() * self.p_c()) == field.norm(&s)
    }
}

pub fn q_image(field: &Field, v: &LatticeVector) -> Result<ConePoint> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let [x0, x1, y0, y1] = v.0;
    let (t, n) = (field.omega_trace, field.omega_norm);
    let nx = x0 * x0 + t * x0 * x1 + n * x1 * x1;
    let ny = y0 * y0 + t * y0 * y1 + n * y1 * y1;
    // conj(x) = (x0 + t x1) - x1 w
    let s1 = x0 * y0 + t * x1 * y0 + n * x1 * y1;
    let s2 = x0 * y1 - x1 * y0;
    Ok(ConePoint([nx, s1, s2, ny]))
}

/// The Hermitian matrix `[[a, b], [conj(b), c]]` with `b = b1 + b2 w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HermitianForm {
    pub a: Rational,
    pub b: FieldElement,
    pub c: Rational,
}

/// Serialized as `["a", "b1", "b2", "c"]` with `"p/q"` entries.
impl Serialize for HermitianForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().map(|r| to_pq(&r)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <[String; 4]>::deserialize(d)?;
        let mut coords = Vec::with_capacity(4);
        for s in &raw {
            coords.push(from_pq(s).map_err(serde::de::Error::custom)?);
        }
        Ok(HermitianForm::from_coords(coords.try_into().expect("four coordinates")))
    }
}

impl HermitianForm {
    pub fn new(a: Rational, b: FieldElement, c: Rational) -> Self {
        HermitianForm { a, b, c }
    }

    pub fn from_coords(coords: [Rational; 4]) -> Self {
        let [a, b1, b2, c] = coords;
        HermitianForm {
            a,
            b: FieldElement::new(b1, b2),
            c,
        }
    }

    pub fn identity() -> Self {
        HermitianForm::new(int(1), FieldElement::zero(), int(1))
    }

    pub fn zero() -> Self {
        HermitianForm::new(int(0), FieldElement::zero(), int(0))
    }

    /// `(a, b1, b2, c)`.
    pub fn coords(&self) -> [Rational; 4] {
        [self.a.clone(), self.b.x0.clone(), self.b.x1.clone(), self.c.clone()]
    }

    pub fn determinant(&self, field: &Field) -> Rational {
        &self.a * &self.c - field.norm(&self.b)
    }

    pub fn is_positive_definite(&self, field: &Field) -> bool {
        self.a.is_positive() && self.determinant(field).is_positive()
    }

    pub fn is_positive_semidefinite(&self, field: &Field) -> bool {
        !self.a.is_negative() && !self.c.is_negative() && !self.determinant(field).is_negative()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        HermitianForm::new(&self.a * r, self.b.scale(r), &self.c * r)
    }

    /// `self + r * dir`.
    pub fn add_scaled(&self, r: &Rational, dir: &HermitianForm) -> Self {
        HermitianForm::new(
            &self.a + r * &dir.a,
            &self.b + &dir.b.scale(r),
            &self.c + r * &dir.c,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// `A[v] = a N(x) + Tr(b conj(x) y) + c N(y)`, computed in the field.
    pub fn evaluate(&self, field: &Field, v: &LatticeVector) -> Rational {
        let x = v.first();
        let y = v.second();
        let s = field.mul(&field.conjugate(&x), &y);
        &self.a * field.norm(&x) + field.trace(&field.mul(&self.b, &s)) + &self.c * field.norm(&y)
    }

    /// The bilinear pairing `<A, p>` of form coordinates with point
    /// coordinates; `<A, q(v)> = A[v]`.
    pub fn pair(&self, field: &Field, p: &ConePoint) -> Rational {
        pairing(field, &self.coords(), p)
    }

    /// Gram matrix of the quaternary form `v -> A[v]` on `Z^4`.
    pub fn to_quaternary(&self, field: &Field) -> QuaternaryForm {
        let basis: Vec<LatticeVector> = (0..4)
            .map(|i| {
                let mut c = [0; 4];
                c[i] = 1;
                LatticeVector(c)
            })
            .collect();
        let mut gram = vec![vec![Rational::zero(); 4]; 4];
        for i in 0..4 {
            gram[i][i] = self.evaluate(field, &basis[i]);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut sum = basis[i].0;
                sum[j] += 1;
                let cross = (self.evaluate(field, &LatticeVector(sum)) - &gram[i][i] - &gram[j][j])
                    / int(2);
                gram[i][j] = cross.clone();
                gram[j][i] = cross;
            }
        }
        QuaternaryForm { gram }
    }

    pub fn enumerate_short(
        &self,
        field: &Field,
        bound: &Rational,
    ) -> Result<Vec<(LatticeVector, Rational)>> {
        if !self.is_positive_definite(field) {
            return Err(Error::NotPositiveDefinite);
        }
        if !bound.is_positive() {
            return Err(Error::InvalidBound(bound.to_string()));
        }
        let q = self.to_quaternary(field);
        let vs = lattice::short_vectors(&q.gram, bound).ok_or(Error::NotPositiveDefinite)?;
        Ok(vs.into_iter().map(|(v, val)| (LatticeVector(v), val)).collect())
    }

    pub fn minimal_vectors(&self, field: &Field) -> Result<MinimalData> {
        self.minimal_vectors_with_hint(field, &int(1))
    }

    /// Minimal vectors, enumerating first up to `hint`; a good hint (such as
    /// the expected minimum) keeps the search small.
    pub fn minimal_vectors_with_hint(&self, field: &Field, hint: &Rational) -> Result<MinimalData> {
        if !self.is_positive_definite(field) {
            return Err(Error::NotPositiveDefinite);
        }
        let q = self.to_quaternary(field);
        let (minimum, vs) =
            lattice::minimal_vectors_with_hint(&q.gram, hint).ok_or(Error::NotPositiveDefinite)?;
        MinimalData::new(minimum, vs.into_iter().map(LatticeVector).collect())
    }
}

impl fmt::Display for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [conj, {}]]", self.a, self.b, self.c)
    }
}

/// `<R, p>` for form coordinates `(a, b1, b2, c)` and point coordinates
/// `(p_a, s1, s2, p_c)`.
pub fn pairing(field: &Field, form: &[Rational; 4], p: &ConePoint) -> Rational {
    let t = field.omega_trace;
    let n = field.omega_norm;
    let [a, b1, b2, c] = form;
    let [pa, s1, s2, pc] = p.0;
    a * int(pa)
        + b1 * int(2 * s1 + t * s2)
        + b2 * int(t * s1 + (t * t - 2 * n) * s2)
        + c * int(pc)
}

/// The linear functional `p -> <R, p>` as a coefficient vector on point
/// coordinates.
pub fn pairing_row(field: &Field, form: &[Rational; 4]) -> [Rational; 4] {
    let t = int(field.omega_trace);
    let n = int(field.omega_norm);
    let [a, b1, b2, c] = form;
    [
        a.clone(),
        b1 * int(2) + b2 * &t,
        b1 * &t + b2 * (&t * &t - n * int(2)),
        c.clone(),
    ]
}

/// The coefficients, in form coordinates, of `A -> <A, p>`.
pub fn point_row(field: &Field, p: &ConePoint) -> Vec<Rational> {
    let t = field.omega_trace;
    let n = field.omega_norm;
    let [pa, s1, s2, pc] = p.0;
    vec![
        int(pa),
        int(2 * s1 + t * s2),
        int(t * s1 + (t * t - 2 * n) * s2),
        int(pc),
    ]
}

/// A quaternary rational form given by its symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuaternaryForm {
    pub gram: Vec<Vec<Rational>>,
}

impl QuaternaryForm {
    pub fn from_ints(rows: [[i64; 4]; 4]) -> Self {
        QuaternaryForm {
            gram: rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
        }
    }

    pub fn evaluate(&self, v: &[i64; 4]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..4 {
            for j in 0..4 {
                s += &self.gram[i][j] * int(v[i] * v[j]);
            }
        }
        s
    }

    pub fn is_symmetric(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.gram[i][j] == self.gram[j][i]))
    }

    pub fn is_positive_definite(&self) -> bool {
        crate::linalg::ldlt(&self.gram).is_some()
    }

    /// Minimum and the minimal vectors up to sign.
    pub fn minimal_vectors(&self) -> Result<(Rational, Vec<[i64; 4]>)> {
        lattice::minimal_vectors(&self.gram).ok_or(Error::NotPositiveDefinite)
    }
}

/// The minimum of a form and its minimal vectors, one per `+-` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalData {
    pub minimum: Rational,
    pub vectors: Vec<LatticeVector>,
}

pub const MAX_MINIMAL_VECTORS: usize = 12;

impl MinimalData {
    pub fn new(minimum: Rational, vectors: Vec<LatticeVector>) -> Result<Self> {
        if vectors.len() > MAX_MINIMAL_VECTORS {
            return Err(Error::TooManyMinimalVectors(vectors.len()));
        }
        debug_assert!(minimum.is_positive() && !vectors.is_empty());
        Ok(MinimalData { minimum, vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn cone_points(&self, field: &Field) -> Vec<ConePoint> {
        self.vectors
            .iter()
            .map(|v| q_image(field, v).expect("minimal vectors are nonzero"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lv(x0: i64, x1: i64, y0: i64, y1: i64) -> LatticeVector {
        LatticeVector::new(x0, x1, y0, y1)
    }

    fn random_form(rng: &mut ChaCha8Rng) -> HermitianForm {
        HermitianForm::from_coords([
            frac(rng.gen_range(-20..20), rng.gen_range(1..6)),
            frac(rng.gen_range(-20..20), rng.gen_range(1..6)),
            frac(rng.gen_range(-20..20), rng.gen_range(1..6)),
            frac(rng.gen_range(-20..20), rng.gen_range(1..6)),
        ])
    }

    fn random_vector(rng: &mut ChaCha8Rng) -> LatticeVector {
        loop {
            let v = lv(
                rng.gen_range(-9..10),
                rng.gen_range(-9..10),
                rng.gen_range(-9..10),
                rng.gen_range(-9..10),
            );
            if !v.is_zero() {
                return v;
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        for d in [1, 2, 3, 7, 91] {
            let f = Field::new(d).unwrap();
            let id = HermitianForm::identity();
            assert_eq!(id.evaluate(&f, &lv(1, 0, 0, 0)), int(1));
            assert_eq!(id.evaluate(&f, &lv(0, 1, 0, 0)), int(f.omega_norm));
        }
    }

    #[test]
    fn d91_vectors_share_cone_point() {
        let f = Field::new(91).unwrap();
        let v = lv(1, 1, 4, -1);
        let w = lv(5, 0, -3, -1);
        assert_eq!(q_image(&f, &v).unwrap(), q_image(&f, &w).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..100 {
            let a = random_form(&mut rng);
            assert_eq!(a.evaluate(&f, &v), a.evaluate(&f, &w));
        }
    }

    #[test]
    fn q_image_examples() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(q_image(&f3, &lv(1, 0, 0, 0)).unwrap(), ConePoint([1, 0, 0, 0]));
        assert_eq!(q_image(&f3, &lv(0, 0, 0, 1)).unwrap(), ConePoint([0, 0, 0, 1]));
        assert!(matches!(q_image(&f3, &lv(0, 0, 0, 0)), Err(Error::ZeroVector)));
    }

    #[test]
    fn pairing_and_transfer_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in [1, 2, 3, 5, 7, 11, 91] {
            let f = Field::new(d).unwrap();
            for _ in 0..1000 {
                let a = random_form(&mut rng);
                let v = random_vector(&mut rng);
                let p = q_image(&f, &v).unwrap();
                assert!(p.is_rank_one(&f));
                let direct = a.evaluate(&f, &v);
                assert_eq!(direct, a.pair(&f, &p));
                let row = pairing_row(&f, &a.coords());
                let via_row: Rational = row.iter().zip(p.0).map(|(r, x)| r * int(x)).sum();
                assert_eq!(direct, via_row);
            }
            for _ in 0..100 {
                let a = random_form(&mut rng);
                let g = a.to_quaternary(&f);
                assert!(g.is_symmetric());
                for _ in 0..10 {
                    let v = random_vector(&mut rng);
                    assert_eq!(g.evaluate(&v.0), a.evaluate(&f, &v));
                }
                assert_eq!(g.is_positive_definite(), a.is_positive_definite(&f));
            }
        }
    }

    #[test]
    fn quaternary_of_identity() {
        let g1 = HermitianForm::identity().to_quaternary(&Field::new(1).unwrap());
        assert_eq!(g1, QuaternaryForm::from_ints([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]));
        let g3 = HermitianForm::identity().to_quaternary(&Field::new(3).unwrap());
        let h = frac(1, 2);
        assert_eq!(g3.gram[0][0], int(1));
        assert_eq!(g3.gram[0][1], h);
        assert_eq!(g3.gram[2][3], h);
        assert_eq!(g3.gram[0][2], int(0));
    }

    #[test]
    fn positive_definiteness() {
        let f = Field::new(2).unwrap();
        assert!(HermitianForm::identity().is_positive_definite(&f));
        let semi = HermitianForm::new(int(1), FieldElement::from_ints(1, 0), int(1));
        assert!(!semi.is_positive_definite(&f));
        assert!(semi.is_positive_semidefinite(&f));
        assert!(matches!(semi.minimal_vectors(&f), Err(Error::NotPositiveDefinite)));
        assert!(matches!(
            semi.enumerate_short(&f, &int(1)),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn minimal_vectors_of_identity() {
        let f1 = Field::new(1).unwrap();
        let m = HermitianForm::identity().minimal_vectors(&f1).unwrap();
        assert_eq!(m.minimum, int(1));
        let mut got = m.vectors.clone();
        got.sort();
        let mut want = vec![lv(1, 0, 0, 0), lv(0, 1, 0, 0), lv(0, 0, 1, 0), lv(0, 0, 0, 1)];
        want.sort();
        assert_eq!(got, want);

        let f3 = Field::new(3).unwrap();
        let m = HermitianForm::identity().minimal_vectors(&f3).unwrap();
        assert_eq!(m.minimum, int(1));
        let mut got = m.vectors.clone();
        got.sort();
        // (1,0), (w,0), (w-1,0) and the same in the second slot, up to sign
        let mut want: Vec<LatticeVector> = [
            lv(1, 0, 0, 0),
            lv(0, 1, 0, 0),
            lv(-1, 1, 0, 0),
            lv(0, 0, 1, 0),
            lv(0, 0, 0, 1),
            lv(0, 0, -1, 1),
        ]
        .iter()
        .map(|v| v.canonical())
        .collect();
        want.sort();
        assert_eq!(got, want);
        assert!(HermitianForm::identity()
            .enumerate_short(&f3, &frac(1, 2))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn short_vectors_closed_under_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1, 3, 7] {
            let f = Field::new(d).unwrap();
            for _ in 0..20 {
                let a = loop {
                    let a = random_form(&mut rng);
                    if a.is_positive_definite(&f) {
                        break a;
                    }
                };
                let min = a.minimal_vectors(&f).unwrap().minimum;
                let list = a.enumerate_short(&f, &(&min * int(3))).unwrap();
                for (v, val) in &list {
                    for u in f.units() {
                        let w = v.scale(&f, &u).unwrap().canonical();
                        let hit = list.iter().find(|(x, _)| *x == w);
                        assert_eq!(hit.map(|(_, y)| y), Some(val));
                    }
                }
            }
        }
    }
}
