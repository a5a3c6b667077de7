use num_traits::{One, Signed, Zero};

use super::{span_rank, ConeFacet, Limits, PerfectForm};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermitian::{point_row, q_image, HermitianForm};
use crate::linalg;
use crate::rational::{int, Rational};

/// Least `rho > 0` such that `form + rho * dir` acquires a new vector of
/// value 1 among those whose value decreases along `dir`.
///
/// `form` must have minimum 1. Returns `rho` together with the moved form.
pub fn line_search(
    field: &Field,
    form: &HermitianForm,
    dir: &HermitianForm,
    limits: &Limits,
) -> Result<(Rational, HermitianForm)> {
    let one = Rational::one();
    // `lo` is positive definite with no new short vectors; `hi`, once set,
    // is not positive definite.
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    let mut rho = Rational::one();
    for _ in 0..limits.max_line_search_steps {
        let trial = form.add_scaled(&rho, dir);
        if !trial.is_positive_definite(field) {
            rho = (&lo + &rho) / int(2);
            hi = Some(rho.clone() * int(2) - &lo);
            continue;
        }
        let short = trial.enumerate_short(field, &one)?;
        let best = short
            .iter()
            .filter_map(|(x, _)| {
                let slope = dir.evaluate(field, x);
                slope
                    .is_negative()
                    .then(|| (form.evaluate(field, x) - &one) / -slope)
            })
            .min();
        match best {
            Some(r) => {
                debug_assert!(r.is_positive());
                let moved = form.add_scaled(&r, dir);
                return Ok((r, moved));
            }
            None => {
                lo = rho.clone();
                rho = match &hi {
                    Some(h) => (&lo + h) / int(2),
                    None => &rho * int(2),
                };
            }
        }
    }
    Err(Error::IterationCap {
        stage: "line search",
        cap: limits.max_line_search_steps,
    })
}

pub fn initial_perfect_form(field: &Field) -> Result<PerfectForm> {
    initial_perfect_form_from(field, &HermitianForm::identity(), &Limits::default())
}

/// Raises the rank of the span of minimal cone points one direction at a
/// time, starting from `start` rescaled to minimum 1.
pub fn initial_perfect_form_from(
    field: &Field,
    start: &HermitianForm,
    limits: &Limits,
) -> Result<PerfectForm> {
    let md = start.minimal_vectors(field)?;
    let mut form = start.scale(&md.minimum.recip());
    for _ in 0..limits.max_rank_steps {
        let md = form.minimal_vectors(field)?;
        let pts = md.cone_points(field);
        if span_rank(field, &pts) == 4 {
            return PerfectForm::from_form(field, &form);
        }
        let rows: Vec<Vec<Rational>> = pts.iter().map(|p| point_row(field, p)).collect();
        let ker = linalg::kernel(&rows, 4);
        let coords: [Rational; 4] = ker[0].clone().try_into().expect("kernel of width 4");
        let mut dir = HermitianForm::from_coords(coords);
        if dir.is_positive_semidefinite(field) {
            dir = dir.scale(&int(-1));
        }
        form = line_search(field, &form, &dir, limits)?.1;
    }
    Err(Error::IterationCap {
        stage: "initial perfect form",
        cap: limits.max_rank_steps,
    })
}

/// The perfect form across `facet` from `p`.
pub fn neighbor(field: &Field, p: &PerfectForm, facet: &ConeFacet, limits: &Limits) -> Result<PerfectForm> {
    if !facet.is_facet_of(field, p) {
        return Err(Error::NotAFacet);
    }
    let (_, moved) = line_search(field, &p.form, &facet.support, limits)?;
    let next = PerfectForm::from_form(field, &moved)?;
    if next.form != moved {
        // the line search must land exactly on minimum 1
        return Err(Error::NotPerfect);
    }
    debug_assert!(facet
        .members
        .iter()
        .all(|&i| next.cone_points.contains(&q_image(field, &p.minimal.vectors[i]).unwrap())));
    Ok(next)
}
