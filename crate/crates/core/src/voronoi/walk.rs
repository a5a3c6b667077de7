use std::collections::{HashMap, VecDeque};

use super::{
    are_equivalent, cone_facets, initial_perfect_form_from, neighbor, reduce, stabilizer_order, ConeFacet,
    Limits, PerfectForm, Transformation,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermitian::{ConePoint, HermitianForm};
use crate::rational::Rational;

/// The neighbor of representative `from` across its facet `facet` is
/// `witness . representatives[to]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub facet: usize,
    pub to: usize,
    pub neighbor: HermitianForm,
    pub witness: Transformation,
}

/// Representatives of the `GL_2(O_F)`-classes of perfect forms with their
/// facet adjacency.
#[derive(Clone, Debug)]
pub struct OrbitGraph {
    pub representatives: Vec<PerfectForm>,
    pub facets: Vec<Vec<ConeFacet>>,
    pub edges: Vec<Edge>,
    /// `(order in GL_2(O_F), order of image in PGL_2(O_F))` per representative.
    pub stabilizer_orders: Vec<(u64, u64)>,
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    /// Each `(representative, facet)` pair has exactly one edge.
    pub fn is_closed(&self) -> bool {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for e in &self.edges {
            *count.entry((e.from, e.facet)).or_default() += 1;
        }
        self.facets.iter().enumerate().all(|(i, fs)| {
            (0..fs.len()).all(|j| count.get(&(i, j)) == Some(&1))
        }) && count.len() == self.edges.len()
    }
}

pub fn enumerate_perfect_forms(field: &Field) -> Result<OrbitGraph> {
    enumerate_perfect_forms_from(field, &HermitianForm::identity(), &Limits::default())
}

struct Catalog {
    /// exact form key -> (representative, g with g . rep = form)
    known: HashMap<Vec<ConePoint>, (usize, Transformation)>,
    /// invariant -> representatives sharing it
    buckets: HashMap<(Rational, usize, usize), Vec<usize>>,
}

fn invariant(field: &Field, p: &PerfectForm) -> (Rational, usize, usize) {
    (p.determinant(field), p.minimal.len(), p.key().len())
}

/// Breadth-first walk over facets starting from the perfect form reached
/// from `start`.
pub fn enumerate_perfect_forms_from(
    field: &Field,
    start: &HermitianForm,
    limits: &Limits,
) -> Result<OrbitGraph> {
    let first = initial_perfect_form_from(field, start, limits)?;
    let first = PerfectForm::from_form(field, &reduce(field, &first.form).1)?;
    let mut reps = vec![first];
    let mut facets: Vec<Vec<ConeFacet>> = Vec::new();
    let mut edges = Vec::new();
    let mut cat = Catalog {
        known: HashMap::new(),
        buckets: HashMap::new(),
    };
    cat.known.insert(reps[0].key(), (0, Transformation::identity()));
    cat.buckets.entry(invariant(field, &reps[0])).or_default().push(0);

    let mut queue = VecDeque::from([0usize]);
    let mut flips = 0usize;
    while let Some(i) = queue.pop_front() {
        let fs = cone_facets(field, &reps[i]);
        for (j, facet) in fs.iter().enumerate() {
            flips += 1;
            if flips > limits.max_flips {
                return Err(Error::IterationCap {
                    stage: "facet walk",
                    cap: limits.max_flips,
                });
            }
            let next = neighbor(field, &reps[i], facet, limits)?;
            let key = next.key();
            let (to, witness) = if let Some((r, g)) = cat.known.get(&key) {
                (*r, g.clone())
            } else {
                let inv = invariant(field, &next);
                let hit = cat.buckets.get(&inv).and_then(|cands| {
                    cands
                        .iter()
                        .find_map(|&r| are_equivalent(field, &reps[r], &next).map(|g| (r, g)))
                });
                let (r, g) = match hit {
                    Some(found) => found,
                    None => {
                        // store the class in a reduced basis so later
                        // enumerations stay cheap
                        let (g, reduced) = reduce(field, &next.form);
                        let rep = PerfectForm::from_form(field, &reduced)?;
                        let r = reps.len();
                        cat.known.insert(rep.key(), (r, Transformation::identity()));
                        reps.push(rep);
                        cat.buckets.entry(inv).or_default().push(r);
                        queue.push_back(r);
                        (r, g.inverse(field).expect("unimodular"))
                    }
                };
                cat.known.insert(key, (r, g.clone()));
                (r, g)
            };
            edges.push(Edge {
                from: i,
                facet: j,
                to,
                neighbor: next.form,
                witness,
            });
        }
        facets.push(fs);
    }
    // the queue is FIFO over increasing indices, so facets[i] belongs to reps[i]
    let stabilizer_orders = reps.iter().map(|p| stabilizer_order(field, p)).collect();
    Ok(OrbitGraph {
        representatives: reps,
        facets,
        edges,
        stabilizer_orders,
    })
}
