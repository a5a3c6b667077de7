//! Ideal polytopes attached to perfect forms: cusps, facet combinatorics,
//! the coning subdivision and hyperbolic volume.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::LazyLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::hermitian::MinimalData;
use crate::rational::{from_pq, to_pq};
use crate::voronoi::{cone_facets, PerfectForm};

/// A point of `P^1(F)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cusp {
    Infinity,
    Finite(FieldElement),
}

impl Cusp {
    /// The cusp `x / y` of the vector `(x, y)`.
    pub fn of(field: &Field, x: &FieldElement, y: &FieldElement) -> Result<Cusp> {
        if y.is_zero() {
            if x.is_zero() {
                return Err(Error::ZeroVector);
            }
            return Ok(Cusp::Infinity);
        }
        Ok(Cusp::Finite(field.div(x, y)?))
    }

    /// Position in `C`, `None` at infinity.
    pub fn embed(&self, field: &Field) -> Option<Complex64> {
        match self {
            Cusp::Infinity => None,
            Cusp::Finite(z) => Some(field.embed(z)),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "oo"),
            Cusp::Finite(z) => write!(f, "{z}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CuspRepr {
    Infinity(String),
    Finite([String; 2]),
}

impl Serialize for Cusp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cusp::Infinity => CuspRepr::Infinity("infinity".into()),
            Cusp::Finite(z) => CuspRepr::Finite([to_pq(&z.x0), to_pq(&z.x1)]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cusp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match CuspRepr::deserialize(d)? {
            CuspRepr::Infinity(s) if s == "infinity" => Ok(Cusp::Infinity),
            CuspRepr::Infinity(s) => Err(D::Error::custom(format!("unknown cusp {s:?}"))),
            CuspRepr::Finite([a, b]) => Ok(Cusp::Finite(FieldElement::new(
                from_pq(&a).map_err(D::Error::custom)?,
                from_pq(&b).map_err(D::Error::custom)?,
            ))),
        }
    }
}

/// Distinct cusps of the minimal vectors, in order of first appearance,
/// and the index of each vector's cusp.
pub fn cusps_of(field: &Field, minimal: &MinimalData) -> Result<(Vec<Cusp>, Vec<usize>)> {
    let mut cusps: Vec<Cusp> = Vec::new();
    let mut index = Vec::with_capacity(minimal.len());
    for v in &minimal.vectors {
        let c = Cusp::of(field, &v.first(), &v.second())?;
        let i = match cusps.iter().position(|k| *k == c) {
            Some(i) => i,
            None => {
                cusps.push(c);
                cusps.len() - 1
            }
        };
        index.push(i);
    }
    Ok((cusps, index))
}

/// `(V, E, F, sorted facet sizes, sorted vertex degrees)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fingerprint {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub facet_sizes: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{} {} {} {} {}",
            self.vertices,
            self.edges,
            self.faces,
            join(&self.facet_sizes),
            join(&self.degrees)
        )
    }
}

const TYPE_TABLE: &str = include_str!("../data/polytope_types.txt");

/// Named combinatorial types, parsed from the pinned data file.
pub static NAMED_TYPES: LazyLock<Vec<(String, Fingerprint)>> =
    LazyLock::new(|| parse_type_table(TYPE_TABLE).expect("bundled type table parses"));

/// Parses lines `name V E F sizes degrees` with comma separated lists;
/// `#` starts a comment.
pub fn parse_type_table(text: &str) -> Result<Vec<(String, Fingerprint)>> {
    let bad = |line: &str| Error::Polytope(format!("bad type table line: {line:?}"));
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [name, v, e, f, sizes, degrees] = parts[..] else {
            return Err(bad(line));
        };
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad(line));
        let list = |s: &str| s.split(',').map(num).collect::<Result<Vec<_>>>();
        out.push((
            name.to_string(),
            Fingerprint {
                vertices: num(v)?,
                edges: num(e)?,
                faces: num(f)?,
                facet_sizes: list(sizes)?,
                degrees: list(degrees)?,
            },
        ));
    }
    Ok(out)
}

pub const UNKNOWN_TYPE: &str = "unknown";

pub fn type_name(fp: &Fingerprint) -> &'static str {
    NAMED_TYPES
        .iter()
        .find(|(_, f)| f == fp)
        .map_or(UNKNOWN_TYPE, |(n, _)| n.as_str())
}

/// The ideal polytope of a perfect form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polytope {
    pub vertices: Vec<Cusp>,
    /// Vertex indices of each facet in cyclic order, starting at the least.
    pub facets: Vec<Vec<usize>>,
    /// Sorted pairs.
    pub edges: Vec<(usize, usize)>,
    pub fingerprint: Fingerprint,
    pub type_name: String,
}

impl Polytope {
    /// Assembles a polytope from vertex sets of facets. Edges are pairs of
    /// facets meeting in exactly two vertices.
    pub fn from_facets(vertices: Vec<Cusp>, facet_sets: &[BTreeSet<usize>]) -> Result<Polytope> {
        let mut edges = BTreeSet::new();
        for (i, a) in facet_sets.iter().enumerate() {
            if a.len() < 3 {
                return Err(Error::Polytope(format!("facet {i} has {} vertices", a.len())));
            }
            for b in &facet_sets[i + 1..] {
                let common: Vec<usize> = a.intersection(b).copied().collect();
                if let [u, v] = common[..] {
                    edges.insert((u, v));
                }
            }
        }
        let edges: Vec<(usize, usize)> = edges.into_iter().collect();
        let (v, e, f) = (vertices.len(), edges.len(), facet_sets.len());
        if v + f != e + 2 {
            return Err(Error::Polytope(format!("Euler characteristic violated: V={v} E={e} F={f}")));
        }
        let facets = facet_sets
            .iter()
            .map(|s| cyclic_order(s, &edges))
            .collect::<Result<Vec<_>>>()?;
        let mut degrees = vec![0; v];
        for &(a, b) in &edges {
            degrees[a] += 1;
            degrees[b] += 1;
        }
        degrees.sort_unstable();
        let mut facet_sizes: Vec<usize> = facets.iter().map(Vec::len).collect();
        facet_sizes.sort_unstable();
        let fingerprint = Fingerprint {
            vertices: v,
            edges: e,
            faces: f,
            facet_sizes,
            degrees,
        };
        let type_name = type_name(&fingerprint).to_string();
        Ok(Polytope {
            vertices,
            facets,
            edges,
            fingerprint,
            type_name,
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Fan triangulation of every facet from its least vertex.
    pub fn triangulate(&self) -> Vec<[usize; 3]> {
        self.facets
            .iter()
            .flat_map(|cyc| cyc.windows(2).skip(1).map(move |w| [cyc[0], w[0], w[1]]))
            .collect()
    }
}

/// Orders the vertices of a facet along the polytope edges inside it.
fn cyclic_order(facet: &BTreeSet<usize>, edges: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in edges {
        if facet.contains(&a) && facet.contains(&b) {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let broken = || Error::Polytope(format!("facet {facet:?} is not a cycle of edges"));
    if adj.len() != facet.len() || adj.values().any(|n| n.len() != 2) {
        return Err(broken());
    }
    let start = *facet.first().ok_or_else(broken)?;
    let mut order = vec![start];
    let mut prev = start;
    let mut cur = *adj[&start].iter().min().ok_or_else(broken)?;
    while cur != start {
        order.push(cur);
        let next = *adj[&cur].iter().find(|&&n| n != prev).ok_or_else(broken)?;
        prev = cur;
        cur = next;
    }
    if order.len() != facet.len() {
        return Err(broken());
    }
    Ok(order)
}

/// The polytope whose vertices are the cusps of `p` and whose facets come
/// from the facets of its cone.
pub fn build_polytope(field: &Field, p: &PerfectForm) -> Result<Polytope> {
    let (cusps, index) = cusps_of(field, &p.minimal)?;
    let mut sets: Vec<BTreeSet<usize>> = cone_facets(field, p)
        .iter()
        .map(|f| f.members.iter().map(|&m| index[m]).collect())
        .collect();
    sets.sort();
    sets.dedup();
    Polytope::from_facets(cusps, &sets)
}

/// Tetrahedra obtained by coning the triangulated boundary from `apex`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subdivision {
    pub apex: usize,
    pub tetrahedra: Vec<[usize; 4]>,
}

/// Cones from a vertex of maximal degree in the triangulated boundary
/// (least index on ties).
pub fn subdivide(poly: &Polytope) -> Subdivision {
    let triangles = poly.triangulate();
    let mut degree = vec![0usize; poly.vertices.len()];
    for e in triangulated_edges(&triangles) {
        degree[e.0] += 1;
        degree[e.1] += 1;
    }
    let apex = (0..degree.len())
        .max_by_key(|&v| (degree[v], std::cmp::Reverse(v)))
        .unwrap_or(0);
    subdivide_from(poly, apex)
}

pub fn subdivide_from(poly: &Polytope, apex: usize) -> Subdivision {
    let tetrahedra = poly
        .triangulate()
        .into_iter()
        .filter(|t| !t.contains(&apex))
        .map(|[a, b, c]| [apex, a, b, c])
        .collect();
    Subdivision { apex, tetrahedra }
}

pub fn triangulated_edges(triangles: &[[usize; 3]]) -> BTreeSet<(usize, usize)> {
    let mut edges = BTreeSet::new();
    for t in triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    edges
}

/// Whether a vertex bijection carries the facets of `a` onto those of `b`.
pub fn combinatorially_equivalent(a: &Polytope, b: &Polytope) -> bool {
    if a.fingerprint != b.fingerprint {
        return false;
    }
    let n = a.vertices.len();
    let a_sets: Vec<BTreeSet<usize>> = a.facets.iter().map(|f| f.iter().copied().collect()).collect();
    let b_sets: BTreeSet<BTreeSet<usize>> = b.facets.iter().map(|f| f.iter().copied().collect()).collect();
    let a_adj: BTreeSet<(usize, usize)> = a.edges.iter().copied().collect();
    let b_adj: BTreeSet<(usize, usize)> = b.edges.iter().copied().collect();
    let adjacent = |set: &BTreeSet<(usize, usize)>, u: usize, v: usize| set.contains(&(u.min(v), u.max(v)));
    let a_deg: Vec<usize> = (0..n).map(|v| a.degree(v)).collect();
    let b_deg: Vec<usize> = (0..n).map(|v| b.degree(v)).collect();

    fn extend(
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(&[usize], usize) -> bool,
        n: usize,
    ) -> bool {
        if map.len() == n {
            return ok(map, n);
        }
        for t in 0..n {
            if used[t] {
                continue;
            }
            map.push(t);
            if ok(map, map.len() - 1) {
                used[t] = true;
                if extend(map, used, ok, n) {
                    return true;
                }
                used[t] = false;
            }
            map.pop();
        }
        false
    }

    let ok = |map: &[usize], last: usize| -> bool {
        if last == n {
            return a_sets
                .iter()
                .all(|f| b_sets.contains(&f.iter().map(|&v| map[v]).collect::<BTreeSet<_>>()));
        }
        let img = map[last];
        a_deg[last] == b_deg[img]
            && (0..last).all(|u| adjacent(&a_adj, u, last) == adjacent(&b_adj, map[u], img))
    };
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &ok, n)
}

const LI2_TERMS: usize = 40;

/// Bernoulli numbers `B_0 ..= B_{2 LI2_TERMS}` as floats, from the exact
/// recurrence `sum_{k<=n} C(n+1, k) B_k = 0`.
static BERNOULLI: LazyLock<Vec<f64>> = LazyLock::new(|| {
    use crate::rational::Rational;
    use num_bigint::BigInt;
    use num_traits::{ToPrimitive, Zero};
    let n_max = 2 * LI2_TERMS + 2;
    let mut b: Vec<Rational> = Vec::with_capacity(n_max + 1);
    b.push(Rational::from_integer(1.into()));
    for n in 1..=n_max {
        let mut s = Rational::zero();
        let mut binom = BigInt::from(1);
        for (k, bk) in b.iter().enumerate() {
            s += bk * Rational::from_integer(binom.clone());
            binom = binom * (n + 1 - k) / (k + 1);
        }
        b.push(-s / Rational::from_integer(BigInt::from(n + 1)));
    }
    b.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
});

/// Clausen function `Cl_2(x)` for `|x| <= pi`.
fn clausen_small(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let b = &*BERNOULLI;
    let x2 = x * x;
    let mut pow = x * x2; // x^(2k+1)
    let mut fact = 6.0; // (2k+1)!
    let mut sum = x - x * x.abs().ln();
    for k in 1..=LI2_TERMS {
        let term = b[2 * k].abs() * pow / (2.0 * k as f64 * fact);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
        pow *= x2;
        fact *= ((2 * k + 2) * (2 * k + 3)) as f64;
    }
    sum
}

/// `Lambda(theta) = -int_0^theta log|2 sin t| dt`, odd and `pi`-periodic.
pub fn lobachevsky(theta: f64) -> f64 {
    use std::f64::consts::PI;
    let mut t = theta.rem_euclid(PI);
    if t > PI / 2.0 {
        t -= PI;
    }
    0.5 * clausen_small(2.0 * t)
}

/// `Li_2(z)` from the series in `u = -log(1 - z)` with Bernoulli
/// coefficients; accurate for `|z| <= 1`, `Re z <= 1/2`.
fn dilog_series(z: Complex64) -> Complex64 {
    let b = &*BERNOULLI;
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let mut sum = u - u * u / 4.0;
    let u2 = u * u;
    let mut pow = u * u2; // u^(2k+1)
    let mut fact = 6.0; // (2k+1)!
    for k in 1..=LI2_TERMS {
        let term = pow * (b[2 * k] / fact);
        sum += term;
        if term.norm() < 1e-18 {
            break;
        }
        pow *= u2;
        fact *= ((2 * k + 2) * (2 * k + 3)) as f64;
    }
    sum
}

/// Bloch-Wigner dilogarithm `D(z) = Im Li_2(z) + arg(1 - z) log|z|`.
///
/// Uses `D(1/z) = D(1 - z) = -D(z)` to move into the region where the
/// series converges fast.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 {
        return 0.0;
    }
    if z.norm_sqr() > 1.0 {
        return -bloch_wigner(z.inv());
    }
    if z.re > 0.5 {
        return -bloch_wigner(Complex64::new(1.0, 0.0) - z);
    }
    dilog_series(z).im + (Complex64::new(1.0, 0.0) - z).arg() * z.norm().ln()
}

/// Cross-ratio `(a - c)(b - d) / ((a - d)(b - c))`; `None` is infinity.
/// Factors involving infinity cancel in pairs.
pub fn cross_ratio(p: [Option<Complex64>; 4]) -> Complex64 {
    let [a, b, c, d] = p;
    let diff = |x: Option<Complex64>, y: Option<Complex64>| match (x, y) {
        (Some(x), Some(y)) => x - y,
        _ => Complex64::new(1.0, 0.0),
    };
    diff(a, c) * diff(b, d) / (diff(a, d) * diff(b, c))
}

/// Volume of the ideal tetrahedron with the given vertices.
pub fn tetrahedron_volume(field: &Field, cusps: [&Cusp; 4]) -> Result<f64> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if cusps[i] == cusps[j] {
                return Err(Error::CoincidentCusps);
            }
        }
    }
    let z = cross_ratio(cusps.map(|c| c.embed(field)));
    Ok(bloch_wigner(z).abs())
}

pub fn subdivision_volume(field: &Field, poly: &Polytope, sub: &Subdivision) -> Result<f64> {
    sub.tetrahedra.iter().try_fold(0.0, |acc, t| {
        Ok(acc + tetrahedron_volume(field, t.map(|i| &poly.vertices[i]))?)
    })
}

pub fn polytope_volume(field: &Field, poly: &Polytope) -> Result<f64> {
    subdivision_volume(field, poly, &subdivide(poly))
}

/// Volume of the regular ideal tetrahedron, `3 Lambda(pi/3)`.
pub fn regular_tetrahedron_volume() -> f64 {
    3.0 * lobachevsky(std::f64::consts::FRAC_PI_3)
}
