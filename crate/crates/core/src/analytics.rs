//! Dedekind zeta values, covolumes of Bianchi groups and the bounds on the
//! number of perfect forms derived from them.

use std::f64::consts::PI;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Default absolute tolerance for `zeta_f_2`.
pub const ZETA_TOL: f64 = 1e-10;

/// `Lambda(pi/3)`, computed once.
pub static LAMBDA_PI_3: LazyLock<f64> = LazyLock::new(|| crate::polytope::lobachevsky(PI / 3.0));

/// Whether `disc` is a fundamental discriminant.
pub fn is_fundamental(disc: i64) -> bool {
    let squarefree = |m: i64| {
        let m = m.unsigned_abs();
        (2..).take_while(|p| p * p <= m).all(|p| !m.is_multiple_of(p * p))
    };
    if disc == 0 || disc == 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => squarefree(disc),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

/// Jacobi symbol `(a / n)` for odd `n > 0`.
fn jacobi(a: i64, n: u64) -> i8 {
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(disc / n)` for a fundamental discriminant.
pub fn kronecker(disc: i64, n: u64) -> Result<i8> {
    if !is_fundamental(disc) {
        return Err(Error::InvalidDiscriminant(disc));
    }
    if n == 0 {
        return Ok(0);
    }
    let twos = n.trailing_zeros();
    let odd = n >> twos;
    let at_two = if disc % 2 == 0 {
        0
    } else if matches!(disc.rem_euclid(8), 1 | 7) {
        1
    } else {
        -1
    };
    let two_part = if twos == 0 {
        1
    } else if twos.is_multiple_of(2) {
        at_two * at_two
    } else {
        at_two
    };
    Ok(two_part * jacobi(disc, odd))
}

/// Number of terms giving absolute error `tol` in `L(2, chi)`: partial
/// character sums are bounded by `|disc|`, so the tail after `N` is at
/// most `2 |disc| / N^2`; a safety factor of 10 is applied.
pub fn terms_for(abs_disc: u64, tol: f64) -> u64 {
    10 * (2.0 * abs_disc as f64 / tol).sqrt().ceil() as u64
}

/// `L(2, chi_disc)` by direct summation of `terms` terms, smallest first.
pub fn l_value_2(disc: i64, terms: u64) -> Result<f64> {
    let period = disc.unsigned_abs();
    let chi: Vec<i8> = (0..period).map(|r| kronecker(disc, r)).collect::<Result<_>>()?;
    let mut sum = 0.0;
    let mut r = terms % period;
    for n in (1..=terms).rev() {
        let c = chi[r as usize];
        if c != 0 {
            let x = n as f64;
            sum += f64::from(c) / (x * x);
        }
        r = if r == 0 { period - 1 } else { r - 1 };
    }
    Ok(sum)
}

/// `zeta_F(2) = zeta(2) L(2, chi_disc)` to absolute error `tol`.
pub fn zeta_f_2(field: &Field, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidBound(format!("tolerance {tol}")));
    }
    let l = l_value_2(field.discriminant, terms_for(field.abs_discriminant(), tol / 2.0))?;
    Ok(PI * PI / 6.0 * l)
}

fn disc_power(field: &Field) -> f64 {
    (field.abs_discriminant() as f64).powf(1.5)
}

/// Hyperbolic covolume of `GL_2(O_F)`.
pub fn covolume_gl2(field: &Field, zeta2: f64) -> f64 {
    disc_power(field) * zeta2 / (8.0 * PI * PI)
}

/// Hyperbolic covolume of `PSL_2(O_F)`, twice that of `GL_2(O_F)`.
pub fn covolume_psl2(field: &Field, zeta2: f64) -> f64 {
    2.0 * covolume_gl2(field, zeta2)
}

fn bound_expression(field: &Field, zeta2: f64, denominator: f64) -> f64 {
    disc_power(field) * zeta2 / (denominator * PI * PI * *LAMBDA_PI_3)
}

/// Lower bound for the number of classes of perfect forms.
pub fn perfect_lower_bound(field: &Field, zeta2: f64) -> u64 {
    bound_expression(field, zeta2, 360.0).ceil() as u64
}

/// Estimate for the number of classes of perfect forms, fifteen times the
/// expression of the lower bound before rounding up.
pub fn estimate_e(field: &Field, zeta2: f64) -> u64 {
    bound_expression(field, zeta2, 24.0).ceil() as u64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldAnalytics {
    pub zeta2: f64,
    pub mu_gl2: f64,
    pub mu_psl2: f64,
    pub lower_bound: u64,
    pub estimate_e: u64,
}

pub fn field_analytics(field: &Field, tol: f64) -> Result<FieldAnalytics> {
    let zeta2 = zeta_f_2(field, tol)?;
    Ok(FieldAnalytics {
        zeta2,
        mu_gl2: covolume_gl2(field, zeta2),
        mu_psl2: covolume_psl2(field, zeta2),
        lower_bound: perfect_lower_bound(field, zeta2),
        estimate_e: estimate_e(field, zeta2),
    })
}

/// Outcome of comparing the tessellation volume with the covolume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeCheck {
    /// `sum vol(p_A) / m_A`.
    pub weighted_volume: f64,
    /// `sum vol(p_A)`.
    pub total_volume: f64,
    pub mu_gl2: f64,
    /// `|weighted - mu| / mu`.
    pub discrepancy: f64,
    /// `mu <= total`.
    pub inequality_holds: bool,
}

/// Compares `sum vol(p_A) / m_A` over representatives with `mu(GL_2)`.
/// `stabilizer_images` are the orders of the stabilizers in `PGL_2(O_F)`.
pub fn volume_identity_check(volumes: &[f64], stabilizer_images: &[u64], mu_gl2: f64) -> Result<VolumeCheck> {
    if volumes.is_empty() || volumes.len() != stabilizer_images.len() {
        return Err(Error::MissingData(format!(
            "{} volumes for {} stabilizers",
            volumes.len(),
            stabilizer_images.len()
        )));
    }
    if stabilizer_images.contains(&0) {
        return Err(Error::MissingData("zero stabilizer order".into()));
    }
    if volumes.iter().any(|v| !v.is_finite()) {
        return Err(Error::MissingData("non-finite volume".into()));
    }
    let weighted_volume: f64 = volumes
        .iter()
        .zip(stabilizer_images)
        .map(|(v, &m)| v / m as f64)
        .sum();
    let total_volume: f64 = volumes.iter().sum();
    Ok(VolumeCheck {
        weighted_volume,
        total_volume,
        mu_gl2,
        discrepancy: (weighted_volume - mu_gl2).abs() / mu_gl2,
        inequality_holds: mu_gl2 <= total_volume,
    })
}
