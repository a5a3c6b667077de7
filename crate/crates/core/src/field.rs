//! Exact arithmetic in an imaginary quadratic field `Q(sqrt(-d))` and its
//! ring of integers `Z[w]`.
//!
//! Elements are stored as `x0 + x1*w` with rational coordinates. The
//! generator `w` is `sqrt(-d)` when `d = 1, 2 (mod 4)` and `(1 + sqrt(-d))/2`
//! when `d = 3 (mod 4)`, so it satisfies `w^2 = t*w - n` with `t = Tr(w)` and
//! `n = N(w)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, is_integral, Rational};

/// An imaginary quadratic field `F = Q(sqrt(-d))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Field {
    pub d: u64,
    pub discriminant: i64,
    pub omega_trace: i64,
    pub omega_norm: i64,
    pub unit_count: u32,
}

fn is_squarefree(d: u64) -> bool {
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

impl Field {
    /// Builds the field for a squarefree `d >= 1`.
    pub fn new(d: i64) -> Result<Self> {
        if d <= 0 || !is_squarefree(d as u64) {
            return Err(Error::InvalidField(d));
        }
        let (discriminant, t, n) = if d % 4 == 3 {
            (-d, 1, (1 + d) / 4)
        } else {
            (-4 * d, 0, d)
        };
        let unit_count = match d {
            1 => 4,
            3 => 6,
            _ => 2,
        };
        Ok(Field {
            d: d as u64,
            discriminant,
            omega_trace: t,
            omega_norm: n,
            unit_count,
        })
    }

    /// Builds the field with the given discriminant, which must be a
    /// negative fundamental discriminant.
    pub fn from_discriminant(disc: i64) -> Result<Self> {
        let abs = disc.abs();
        if disc >= 0 {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let d = if abs % 4 == 3 {
            abs
        } else if abs % 4 == 0 && matches!((abs / 4) % 4, 1 | 2) {
            abs / 4
        } else {
            return Err(Error::InvalidDiscriminant(disc));
        };
        let field = Field::new(d).map_err(|_| Error::InvalidDiscriminant(disc))?;
        debug_assert_eq!(field.discriminant, disc);
        Ok(field)
    }

    pub fn abs_discriminant(&self) -> u64 {
        self.discriminant.unsigned_abs()
    }

    pub fn omega(&self) -> FieldElement {
        FieldElement::from_ints(0, 1)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        // (a + b w)(c + e w) = ac + (ae + bc) w + be (t w - n)
        let t = int(self.omega_trace);
        let n = int(self.omega_norm);
        let be = &x.x1 * &y.x1;
        FieldElement {
            x0: &x.x0 * &y.x0 - &n * &be,
            x1: &x.x0 * &y.x1 + &x.x1 * &y.x0 + &t * &be,
        }
    }

    pub fn conjugate(&self, x: &FieldElement) -> FieldElement {
        FieldElement {
            x0: &x.x0 + &x.x1 * int(self.omega_trace),
            x1: -&x.x1,
        }
    }

    pub fn norm(&self, x: &FieldElement) -> Rational {
        &x.x0 * &x.x0
            + &x.x0 * &x.x1 * int(self.omega_trace)
            + &x.x1 * &x.x1 * int(self.omega_norm)
    }

    pub fn trace(&self, x: &FieldElement) -> Rational {
        &x.x0 * int(2) + &x.x1 * int(self.omega_trace)
    }

    pub fn inverse(&self, x: &FieldElement) -> Result<FieldElement> {
        let nx = self.norm(x);
        if nx.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conjugate(x).scale(&nx.recip()))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inverse(y)?))
    }

    /// One representative per pair `{u, -u}` of units of `O_F`.
    pub fn units(&self) -> Vec<FieldElement> {
        match self.d {
            1 => vec![FieldElement::one(), FieldElement::from_ints(0, 1)],
            3 => vec![
                FieldElement::one(),
                FieldElement::from_ints(0, 1),
                FieldElement::from_ints(-1, 1),
            ],
            _ => vec![FieldElement::one()],
        }
    }

    /// Every unit of `O_F`, both signs.
    pub fn all_units(&self) -> Vec<FieldElement> {
        self.units()
            .into_iter()
            .flat_map(|u| [u.clone(), -u])
            .collect()
    }

    pub fn is_unit(&self, x: &FieldElement) -> bool {
        x.is_integral() && self.norm(x).is_one()
    }

    pub fn omega_numeric(&self) -> Complex64 {
        let s = (self.d as f64).sqrt();
        if self.omega_trace == 1 {
            Complex64::new(0.5, 0.5 * s)
        } else {
            Complex64::new(0.0, s)
        }
    }

    pub fn embed(&self, x: &FieldElement) -> Complex64 {
        let x0 = x.x0.to_f64().unwrap_or(f64::NAN);
        let x1 = x.x1.to_f64().unwrap_or(f64::NAN);
        Complex64::new(x0, 0.0) + self.omega_numeric() * x1
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt(-{})) [disc {}]", self.d, self.discriminant)
    }
}

/// `x0 + x1*w` with rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub x0: Rational,
    pub x1: Rational,
}

impl FieldElement {
    pub fn new(x0: Rational, x1: Rational) -> Self {
        FieldElement { x0, x1 }
    }

    pub fn from_ints(x0: i64, x1: i64) -> Self {
        FieldElement {
            x0: int(x0),
            x1: int(x1),
        }
    }

    pub fn from_rational(x0: Rational) -> Self {
        FieldElement {
            x0,
            x1: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        FieldElement::from_ints(0, 0)
    }

    pub fn one() -> Self {
        FieldElement::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        is_integral(&self.x0) && is_integral(&self.x1)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        FieldElement {
            x0: &self.x0 * r,
            x1: &self.x1 * r,
        }
    }

    /// Integer coordinates, if integral and small enough.
    pub fn to_ints(&self) -> Option<(i64, i64)> {
        if !self.is_integral() {
            return None;
        }
        Some((self.x0.to_integer().to_i64()?, self.x1.to_integer().to_i64()?))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            x0: &self.x0 + &rhs.x0,
            x1: &self.x1 + &rhs.x1,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement {
            x0: &self.x0 - &rhs.x0,
            x1: &self.x1 - &rhs.x1,
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            x0: -self.x0,
            x1: -self.x1,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x0.is_zero(), self.x1.is_zero()) {
            (_, true) => write!(f, "{}", self.x0),
            (true, false) => write!(f, "{}*w", self.x1),
            (false, false) => {
                let sign = if self.x1.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}*w", self.x0, sign, self.x1.abs())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn el(a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(a, b)
    }

    #[test]
    fn field_descriptors() {
        let f1 = Field::new(1).unwrap();
        assert_eq!(
            (f1.discriminant, f1.omega_trace, f1.omega_norm, f1.unit_count),
            (-4, 0, 1, 4)
        );
        let f3 = Field::new(3).unwrap();
        assert_eq!(
            (f3.discriminant, f3.omega_trace, f3.omega_norm, f3.unit_count),
            (-3, 1, 1, 6)
        );
        let f91 = Field::new(91).unwrap();
        assert_eq!((f91.discriminant, f91.omega_trace, f91.omega_norm), (-91, 1, 23));
        assert_eq!(Field::new(2).unwrap().discriminant, -8);
        assert_eq!(Field::new(5).unwrap().unit_count, 2);
    }

    #[test]
    fn rejects_invalid_d() {
        assert!(Field::new(0).is_err());
        assert!(Field::new(-3).is_err());
        assert!(Field::new(4).is_err());
        assert!(Field::new(12).is_err());
        assert!(Field::new(50).is_err());
    }

    #[test]
    fn from_discriminant_roundtrip() {
        for d in [1, 2, 3, 5, 7, 91, 195] {
            let f = Field::new(d).unwrap();
            assert_eq!(Field::from_discriminant(f.discriminant).unwrap(), f);
        }
        assert!(Field::from_discriminant(-12).is_err());
        assert!(Field::from_discriminant(-16).is_err());
        assert!(Field::from_discriminant(-5).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let f1 = Field::new(1).unwrap();
        assert_eq!(f1.conjugate(&el(0, 1)), el(0, -1));
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.conjugate(&el(0, 1)), el(1, -1));
        assert_eq!(f3.conjugate(&el(5, 0)), el(5, 0));
    }

    #[test]
    fn norm_trace_examples() {
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.norm(&el(0, 1)), int(1));
        assert_eq!(f3.trace(&el(0, 1)), int(1));
        let f91 = Field::new(91).unwrap();
        assert_eq!(f91.norm(&el(0, 1)), int(23));
        let f1 = Field::new(1).unwrap();
        assert_eq!(f1.norm(&el(1, 1)), int(2));
    }

    #[test]
    fn unit_representatives() {
        assert_eq!(Field::new(5).unwrap().units(), vec![el(1, 0)]);
        assert_eq!(Field::new(1).unwrap().units(), vec![el(1, 0), el(0, 1)]);
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.units(), vec![el(1, 0), el(0, 1), el(-1, 1)]);
        for d in [1, 2, 3, 7] {
            let f = Field::new(d).unwrap();
            for u in f.all_units() {
                assert_eq!(f.norm(&u), int(1));
            }
            assert_eq!(f.all_units().len() as u32, f.unit_count);
        }
    }

    #[test]
    fn embedding_examples() {
        let w1 = Field::new(1).unwrap().omega_numeric();
        assert!((w1 - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let w3 = Field::new(3).unwrap().omega_numeric();
        assert!((w3 - Complex64::new(0.5, 0.8660254037844386)).norm() < 1e-15);
    }

    #[test]
    fn ring_laws_on_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [1, 2, 3, 7, 11, 91] {
            let f = Field::new(d).unwrap();
            for _ in 0..1000 {
                let x = el(rng.gen_range(-50..50), rng.gen_range(-50..50));
                let y = el(rng.gen_range(-50..50), rng.gen_range(-50..50));
                let xy = f.mul(&x, &y);
                assert_eq!(f.norm(&xy), f.norm(&x) * f.norm(&y));
                assert_eq!(f.trace(&(&x + &y)), f.trace(&x) + f.trace(&y));
                assert_eq!(f.conjugate(&xy), f.mul(&f.conjugate(&x), &f.conjugate(&y)));
                assert_eq!(f.conjugate(&f.conjugate(&x)), x);
                let ex = f.embed(&x);
                let nx = f.norm(&x).to_f64().unwrap();
                assert!((ex.norm_sqr() - nx).abs() <= 1e-12 * nx.max(1.0));
                assert!((f.embed(&f.conjugate(&x)) - ex.conj()).norm() <= 1e-12 * ex.norm().max(1.0));
            }
        }
    }

    #[test]
    fn norm_vanishes_only_at_zero() {
        for d in [1, 2, 3, 7] {
            let f = Field::new(d).unwrap();
            for a in -5..=5 {
                for b in -5..=5 {
                    let x = el(a, b);
                    assert_eq!(f.norm(&x).is_zero(), x.is_zero());
                    assert!(!f.norm(&x).is_negative());
                }
            }
        }
    }

    #[test]
    fn inverse_and_division() {
        let f = Field::new(91).unwrap();
        let num = el(1, 1);
        let den = el(4, -1);
        assert_eq!(f.div(&num, &den).unwrap(), FieldElement::new(int(-4) / int(7), int(1) / int(7)));
        assert!(f.inverse(&FieldElement::zero()).is_err());
    }
}
