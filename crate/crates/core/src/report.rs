//! Per-field documents: the full orbit graph in exact coordinates, the
//! polytopes and the field summary, with persistence, summary tables and
//! re-verification of stored data.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analytics::{self, field_analytics, volume_identity_check};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::hermitian::{q_image, ConePoint, HermitianForm, LatticeVector, MAX_MINIMAL_VECTORS};
use crate::polytope::{
    build_polytope, combinatorially_equivalent, cusps_of, subdivide, subdivision_volume, triangulated_edges,
    Polytope, Subdivision, NAMED_TYPES, UNKNOWN_TYPE,
};
use crate::voronoi::{
    are_equivalent, cone_facets, enumerate_perfect_forms, neighbor, stabilizer_order, Limits, PerfectForm,
    Transformation,
};

pub const SCHEMA_VERSION: &str = "perfect-forms/1";
pub const OMEGA_CONVENTION: &str = "omega = sqrt(-d) if d = 1, 2 mod 4; omega = (1 + sqrt(-d))/2 if d = 3 mod 4";
/// Largest allowed `|sum vol / m - mu| / mu`.
pub const VOLUME_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub support: HermitianForm,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentativeRecord {
    pub form: HermitianForm,
    pub minimal_vectors: Vec<LatticeVector>,
    pub cone_points: Vec<ConePoint>,
    /// Index into `polytope.vertices` for each minimal vector.
    pub cusp_of_vector: Vec<usize>,
    pub facets: Vec<FacetRecord>,
    pub stabilizer_order: u64,
    /// Order of the image of the stabilizer in `PGL_2(O_F)`.
    pub stabilizer_image_order: u64,
    pub polytope: Polytope,
    pub subdivision: Subdivision,
    pub volume: f64,
}

/// The neighbor across facet `facet` of representative `from` is
/// `witness . representatives[to]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub from: usize,
    pub facet: usize,
    pub to: usize,
    pub neighbor: HermitianForm,
    pub witness: Transformation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldReport {
    pub d: u64,
    pub discriminant: i64,
    pub n_perf: u64,
    pub type_counts: BTreeMap<String, u64>,
    /// Number of representatives by number of minimal vectors.
    pub min_vector_histogram: BTreeMap<usize, u64>,
    pub zeta2: f64,
    pub mu_gl2: f64,
    pub lower_bound: u64,
    pub estimate_e: u64,
    /// `n_perf / estimate_e`.
    pub ratio: f64,
    pub weighted_volume: f64,
    pub total_volume: f64,
    pub volume_discrepancy: f64,
    pub wall_time_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldDocument {
    pub schema_version: String,
    pub omega_convention: String,
    pub field: Field,
    pub representatives: Vec<RepresentativeRecord>,
    pub edges: Vec<EdgeRecord>,
    pub report: FieldReport,
}

/// Runs the full pipeline on one field.
pub fn analyze_field(field: &Field) -> Result<FieldDocument> {
    let start = Instant::now();
    let graph = enumerate_perfect_forms(field)?;
    let mut reps = Vec::with_capacity(graph.len());
    for (i, p) in graph.representatives.iter().enumerate() {
        let (_, cusp_of_vector) = cusps_of(field, &p.minimal)?;
        let polytope = build_polytope(field, p)?;
        let subdivision = subdivide(&polytope);
        let volume = subdivision_volume(field, &polytope, &subdivision)?;
        let (full, image) = graph.stabilizer_orders[i];
        reps.push(RepresentativeRecord {
            form: p.form.clone(),
            minimal_vectors: p.minimal.vectors.clone(),
            cone_points: p.cone_points.clone(),
            cusp_of_vector,
            facets: graph.facets[i]
                .iter()
                .map(|f| FacetRecord {
                    support: f.support.clone(),
                    members: f.members.clone(),
                })
                .collect(),
            stabilizer_order: full,
            stabilizer_image_order: image,
            polytope,
            subdivision,
            volume,
        });
    }
    let edges = graph
        .edges
        .into_iter()
        .map(|e| EdgeRecord {
            from: e.from,
            facet: e.facet,
            to: e.to,
            neighbor: e.neighbor,
            witness: e.witness,
        })
        .collect();

    let an = field_analytics(field, analytics::ZETA_TOL)?;
    let volumes: Vec<f64> = reps.iter().map(|r| r.volume).collect();
    let images: Vec<u64> = reps.iter().map(|r| r.stabilizer_image_order).collect();
    let check = volume_identity_check(&volumes, &images, an.mu_gl2)?;
    let mut type_counts = BTreeMap::new();
    let mut min_vector_histogram = BTreeMap::new();
    for r in &reps {
        *type_counts.entry(r.polytope.type_name.clone()).or_insert(0) += 1;
        *min_vector_histogram.entry(r.minimal_vectors.len()).or_insert(0) += 1;
    }
    let n_perf = reps.len() as u64;
    let report = FieldReport {
        d: field.d,
        discriminant: field.discriminant,
        n_perf,
        type_counts,
        min_vector_histogram,
        zeta2: an.zeta2,
        mu_gl2: an.mu_gl2,
        lower_bound: an.lower_bound,
        estimate_e: an.estimate_e,
        ratio: n_perf as f64 / an.estimate_e as f64,
        weighted_volume: check.weighted_volume,
        total_volume: check.total_volume,
        volume_discrepancy: check.discrepancy,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(FieldDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        omega_convention: OMEGA_CONVENTION.to_string(),
        field: field.clone(),
        representatives: reps,
        edges,
        report,
    })
}

/// Fields with `lo <= |disc| <= hi`, by increasing `|disc|`.
pub fn fields_in_range(lo: u64, hi: u64) -> Vec<Field> {
    (lo.max(3)..=hi)
        .filter_map(|n| Field::from_discriminant(-(n as i64)).ok())
        .collect()
}

pub fn file_name(field: &Field) -> String {
    format!("disc_{}.json", field.abs_discriminant())
}

/// Writes to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn to_json(doc: &FieldDocument) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}

pub fn save_document(dir: &Path, doc: &FieldDocument) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(file_name(&doc.field));
    write_atomic(&path, to_json(doc)?.as_bytes())?;
    Ok(path)
}

pub fn load_document(path: &Path) -> Result<FieldDocument> {
    let malformed = |reason: String| Error::MalformedReport {
        path: path.display().to_string(),
        reason,
    };
    let text = fs::read_to_string(path)?;
    let doc: FieldDocument = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(malformed(format!("schema version {:?}", doc.schema_version)));
    }
    let expected = Field::new(doc.field.d as i64).map_err(|e| malformed(e.to_string()))?;
    if expected != doc.field {
        return Err(malformed("field descriptor does not match d".into()));
    }
    Ok(doc)
}

/// Whether `path` holds a readable document for `field`.
pub fn has_valid_document(path: &Path, field: &Field) -> bool {
    load_document(path).is_ok_and(|doc| doc.field == *field)
}

/// All `disc_*.json` documents under `dir`, by increasing `|disc|`.
pub fn load_dir(dir: &Path) -> Result<Vec<FieldDocument>> {
    let mut docs = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with("disc_") && name.ends_with(".json") {
            docs.push(load_document(&path)?);
        }
    }
    docs.sort_by_key(|d| d.field.abs_discriminant());
    Ok(docs)
}

/// Type names in table order, followed by any others seen.
fn type_order(docs: &[FieldDocument]) -> Vec<String> {
    let mut names: Vec<String> = NAMED_TYPES.iter().map(|(n, _)| n.clone()).collect();
    let extra: BTreeSet<&String> = docs
        .iter()
        .flat_map(|d| d.report.type_counts.keys())
        .filter(|n| !names.contains(n))
        .collect();
    names.extend(extra.into_iter().cloned());
    names
}

/// One row per polytope type: witnessing fields, polytopes and the
/// percentage of all polytopes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeRow {
    pub polytope_type: String,
    pub fields: u64,
    pub polytopes: u64,
    pub percentage: f64,
}

pub fn type_table(docs: &[FieldDocument]) -> Vec<TypeRow> {
    let total: u64 = docs.iter().map(|d| d.report.n_perf).sum();
    type_order(docs)
        .into_iter()
        .map(|name| {
            let counts: Vec<u64> = docs
                .iter()
                .map(|d| d.report.type_counts.get(&name).copied().unwrap_or(0))
                .collect();
            let polytopes: u64 = counts.iter().sum();
            TypeRow {
                fields: counts.iter().filter(|&&c| c > 0).count() as u64,
                polytopes,
                percentage: if total == 0 { 0.0 } else { 100.0 * polytopes as f64 / total as f64 },
                polytope_type: name,
            }
        })
        .collect()
}

fn round3(x: f64) -> String {
    format!("{x:.3}")
}

/// Writes `polytope_types.csv`, `n_perf.csv`, `ratio.csv` and
/// `type_percentages.csv` into `out`.
pub fn write_stats(docs: &[FieldDocument], out: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let mut written = Vec::new();
    let mut emit = |name: &str, rows: Vec<Vec<String>>| -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.write_record(&row)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        let path = out.join(name);
        write_atomic(&path, &bytes)?;
        written.push(path);
        Ok(())
    };

    let mut rows = vec![vec!["type".into(), "fields".into(), "polytopes".into(), "percentage".into()]];
    for r in type_table(docs) {
        rows.push(vec![r.polytope_type, r.fields.to_string(), r.polytopes.to_string(), round3(r.percentage)]);
    }
    emit("polytope_types.csv", rows)?;

    let mut rows = vec![vec![
        "abs_disc".into(),
        "d".into(),
        "n_perf".into(),
        "lower_bound".into(),
        "estimate_e".into(),
    ]];
    for d in docs {
        let r = &d.report;
        rows.push(vec![
            d.field.abs_discriminant().to_string(),
            r.d.to_string(),
            r.n_perf.to_string(),
            r.lower_bound.to_string(),
            r.estimate_e.to_string(),
        ]);
    }
    emit("n_perf.csv", rows)?;

    let mut rows = vec![vec!["abs_disc".into(), "ratio".into()]];
    for d in docs {
        rows.push(vec![d.field.abs_discriminant().to_string(), format!("{:.6}", d.report.ratio)]);
    }
    emit("ratio.csv", rows)?;

    let names = type_order(docs);
    let mut header = vec!["abs_disc".to_string()];
    header.extend(names.iter().cloned());
    let mut rows = vec![header];
    for d in docs {
        let mut row = vec![d.field.abs_discriminant().to_string()];
        for n in &names {
            let c = d.report.type_counts.get(n).copied().unwrap_or(0);
            row.push(round3(100.0 * c as f64 / d.report.n_perf.max(1) as f64));
        }
        rows.push(row);
    }
    emit("type_percentages.csv", rows)?;
    Ok(written)
}

/// A failed check on stored data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub abs_disc: u64,
    pub check: String,
    pub detail: String,
}

struct Checker {
    abs_disc: u64,
    out: Vec<Violation>,
}

impl Checker {
    fn require(&mut self, ok: bool, check: &str, detail: impl FnOnce() -> String) {
        if !ok {
            self.out.push(Violation {
                abs_disc: self.abs_disc,
                check: check.to_string(),
                detail: detail(),
            });
        }
    }
}

/// Structural invariants that need no recomputation.
fn check_structure(doc: &FieldDocument, c: &mut Checker) {
    let r = &doc.report;
    let n = doc.representatives.len();
    c.require(r.n_perf == n as u64, "n_perf", || format!("{} listed, {n} stored", r.n_perf));
    c.require(r.n_perf >= r.lower_bound, "lower_bound", || {
        format!("{} classes below bound {}", r.n_perf, r.lower_bound)
    });
    c.require(r.type_counts.values().sum::<u64>() == r.n_perf, "type_counts", || {
        format!("{:?} does not sum to {}", r.type_counts, r.n_perf)
    });
    c.require(r.ratio > 0.0, "ratio", || format!("{}", r.ratio));

    let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in &doc.edges {
        *edge_count.entry((e.from, e.facet)).or_default() += 1;
        c.require(e.to < n, "edge_target", || format!("edge to {} of {n}", e.to));
    }
    for (i, rep) in doc.representatives.iter().enumerate() {
        for j in 0..rep.facets.len() {
            let k = edge_count.get(&(i, j)).copied().unwrap_or(0);
            c.require(k == 1, "closure", || format!("representative {i} facet {j} has {k} edges"));
        }
        let m = rep.minimal_vectors.len();
        c.require(m <= MAX_MINIMAL_VECTORS, "min_vector_bound", || format!("representative {i} has {m}"));
        c.require(rep.stabilizer_order % doc.field.unit_count as u64 == 0, "stabilizer_center", || {
            format!("representative {i}: order {}", rep.stabilizer_order)
        });
        c.require(
            rep.stabilizer_image_order * doc.field.unit_count as u64 == rep.stabilizer_order,
            "stabilizer_image",
            || format!("representative {i}"),
        );

        let p = &rep.polytope;
        let (v, e, f) = (p.vertices.len(), p.edges.len(), p.facets.len());
        c.require(v + f == e + 2, "euler", || format!("representative {i}: V={v} E={e} F={f}"));
        c.require((4..=12).contains(&v), "vertex_count", || format!("representative {i}: V={v}"));
        let tri = p.triangulate();
        let te = triangulated_edges(&tri).len();
        c.require(te + 6 == 3 * v && tri.len() + 4 == 2 * v, "triangulation", || {
            format!("representative {i}: V={v} E'={te} F'={}", tri.len())
        });
        let t = rep.subdivision.tetrahedra.len();
        let max_deg = (0..v)
            .map(|x| triangulated_edges(&tri).iter().filter(|&&(a, b)| a == x || b == x).count())
            .max()
            .unwrap_or(0);
        c.require(t == tri.len() - max_deg, "subdivision_count", || {
            format!("representative {i}: {t} tetrahedra, {} triangles, max degree {max_deg}", tri.len())
        });
        if v > 6 {
            c.require(t + 9 <= 2 * v, "subdivision_bound", || format!("representative {i}: {t} > 2*{v} - 9"));
        }
        c.require(p.type_name != UNKNOWN_TYPE, "polytope_type", || {
            format!("representative {i}: unnamed fingerprint {}", p.fingerprint)
        });
        c.require(rep.cusp_of_vector.len() == m, "cusp_map", || format!("representative {i}"));
    }
}

/// Recomputes minimal vectors, facets, neighbors, equivalences and
/// stabilizers from the stored forms.
fn check_rederived(doc: &FieldDocument, c: &mut Checker) {
    let field = &doc.field;
    let mut perfect: Vec<Option<PerfectForm>> = Vec::new();
    for (i, rep) in doc.representatives.iter().enumerate() {
        match PerfectForm::from_form(field, &rep.form) {
            Ok(p) => {
                c.require(p.form == rep.form, "normalization", || format!("representative {i} minimum is not 1"));
                let want: BTreeSet<_> = p.minimal.vectors.iter().collect();
                let got: BTreeSet<_> = rep.minimal_vectors.iter().collect();
                c.require(want == got && rep.minimal_vectors.len() == got.len(), "minimal_vectors", || {
                    format!("representative {i}: stored {} vectors, recomputed {}", got.len(), want.len())
                });
                let pts: Result<Vec<ConePoint>> = rep.minimal_vectors.iter().map(|v| q_image(field, v)).collect();
                c.require(pts.is_ok_and(|p| p == rep.cone_points), "cone_points", || format!("representative {i}"));
                let facets: BTreeSet<_> = cone_facets(field, &p).into_iter().map(|f| f.support).collect();
                let stored: BTreeSet<_> = rep.facets.iter().map(|f| f.support.clone()).collect();
                c.require(facets == stored, "facets", || format!("representative {i}"));
                let (full, _) = stabilizer_order(field, &p);
                c.require(full == rep.stabilizer_order, "stabilizer_order", || {
                    format!("representative {i}: stored {}, recomputed {full}", rep.stabilizer_order)
                });
                perfect.push(Some(p));
            }
            Err(e) => {
                c.require(false, "perfection", || format!("representative {i}: {e}"));
                perfect.push(None);
            }
        }
    }
    for e in &doc.edges {
        let (Some(Some(from)), Some(Some(to))) = (perfect.get(e.from), perfect.get(e.to)) else {
            continue;
        };
        c.require(e.witness.is_unimodular(field), "witness_unimodular", || {
            format!("edge {}:{}", e.from, e.facet)
        });
        c.require(e.witness.act(field, &to.form) == e.neighbor, "witness_transport", || {
            format!("edge {}:{}", e.from, e.facet)
        });
        let Some(stored) = doc.representatives[e.from].facets.get(e.facet) else {
            c.require(false, "edge_facet", || format!("edge {}:{}", e.from, e.facet));
            continue;
        };
        let facet = crate::voronoi::ConeFacet {
            support: stored.support.clone(),
            members: stored.members.clone(),
        };
        let flipped = neighbor(field, from, &facet, &Limits::default());
        c.require(flipped.as_ref().is_ok_and(|q| q.form == e.neighbor), "neighbor", || {
            format!("edge {}:{}", e.from, e.facet)
        });
    }
    let live: Vec<(usize, &PerfectForm)> = perfect
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.as_ref().map(|p| (i, p)))
        .collect();
    for (a, &(i, p)) in live.iter().enumerate() {
        for &(j, q) in &live[a + 1..] {
            c.require(are_equivalent(field, p, q).is_none(), "inequivalence", || {
                format!("representatives {i} and {j} are equivalent")
            });
        }
    }
}

/// Recomputes volumes and compares the weighted sum with the covolume.
fn check_volumes(doc: &FieldDocument, c: &mut Checker) {
    let field = &doc.field;
    let mut volumes = Vec::new();
    for (i, rep) in doc.representatives.iter().enumerate() {
        match subdivision_volume(field, &rep.polytope, &rep.subdivision) {
            Ok(v) => {
                c.require((v - rep.volume).abs() <= 1e-9 * v.max(1.0), "volume", || {
                    format!("representative {i}: stored {}, recomputed {v}", rep.volume)
                });
                c.require(v <= 15.0 * crate::polytope::regular_tetrahedron_volume() + 1e-6, "volume_bound", || {
                    format!("representative {i}: {v}")
                });
                volumes.push(v);
            }
            Err(e) => c.require(false, "volume", || format!("representative {i}: {e}")),
        }
    }
    let images: Vec<u64> = doc.representatives.iter().map(|r| r.stabilizer_image_order).collect();
    let mu = field_analytics(field, analytics::ZETA_TOL).map(|a| a.mu_gl2);
    match mu.and_then(|mu| volume_identity_check(&volumes, &images, mu)) {
        Ok(check) => {
            c.require(check.discrepancy <= VOLUME_TOLERANCE, "volume_identity", || {
                format!("relative discrepancy {:e}", check.discrepancy)
            });
            c.require(check.inequality_holds, "volume_inequality", || {
                format!("mu {} > total {}", check.mu_gl2, check.total_volume)
            });
        }
        Err(e) => c.require(false, "volume_identity", || e.to_string()),
    }
}

/// Level 1: structure; 2: adds recomputation of the orbit graph;
/// 3: adds the volume identity. Levels are cumulative.
pub fn verify_document(doc: &FieldDocument, level: u8) -> Vec<Violation> {
    let mut c = Checker {
        abs_disc: doc.field.abs_discriminant(),
        out: Vec::new(),
    };
    check_structure(doc, &mut c);
    if level >= 2 {
        check_rederived(doc, &mut c);
    }
    if level >= 3 {
        check_volumes(doc, &mut c);
    }
    c.out
}

/// Polytopes sharing a type name must be combinatorially equivalent to the
/// first witness of that type.
pub fn verify_type_collisions(docs: &[FieldDocument]) -> Vec<Violation> {
    let mut first: BTreeMap<&str, &Polytope> = BTreeMap::new();
    let mut out = Vec::new();
    for doc in docs {
        for (i, rep) in doc.representatives.iter().enumerate() {
            let p = &rep.polytope;
            if p.type_name == UNKNOWN_TYPE {
                continue;
            }
            match first.get(p.type_name.as_str()) {
                None => {
                    first.insert(&p.type_name, p);
                }
                Some(w) if !combinatorially_equivalent(w, p) => out.push(Violation {
                    abs_disc: doc.field.abs_discriminant(),
                    check: "type_isomorphism".into(),
                    detail: format!("representative {i} is not a {}", p.type_name),
                }),
                Some(_) => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(d: i64) -> FieldDocument {
        analyze_field(&Field::new(d).unwrap()).unwrap()
    }

    #[test]
    fn d3_document() {
        let doc = doc(3);
        assert_eq!(doc.report.n_perf, 1);
        assert_eq!(doc.report.type_counts.get("tetrahedron"), Some(&1));
        assert!((doc.representatives[0].volume - 1.014_941_6).abs() < 1e-6);
        assert_eq!(doc.representatives[0].stabilizer_image_order, 12);
        assert!(doc.report.volume_discrepancy < 1e-6);
        for level in 1..=3 {
            assert_eq!(verify_document(&doc, level), vec![]);
        }
    }

    #[test]
    fn json_round_trip() {
        for d in [1, 5, 91] {
            let doc = doc(d);
            let text = to_json(&doc).unwrap();
            let back: FieldDocument = serde_json::from_str(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(to_json(&back).unwrap(), text);
        }
    }

    #[test]
    fn rationals_are_pq_strings() {
        let doc = doc(7);
        let v: serde_json::Value = serde_json::from_str(&to_json(&doc).unwrap()).unwrap();
        let form = &v["representatives"][0]["form"];
        assert!(form.as_array().unwrap().iter().all(|x| x.as_str().unwrap().contains('/')));
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
    }

    #[test]
    fn deleted_minimal_vector_is_detected() {
        let mut doc = doc(2);
        doc.representatives[0].minimal_vectors.pop();
        doc.representatives[0].cone_points.pop();
        doc.representatives[0].cusp_of_vector.pop();
        assert!(verify_document(&doc, 1).is_empty());
        let v = verify_document(&doc, 2);
        assert!(v.iter().any(|x| x.check == "minimal_vectors"), "{v:?}");
    }

    #[test]
    fn broken_witness_is_detected() {
        let mut doc = doc(5);
        let e = &mut doc.edges[0];
        e.witness = Transformation::from_ints([[1, 0], [1, 0], [0, 0], [1, 0]]).mul(&doc.field, &e.witness);
        let v = verify_document(&doc, 2);
        assert!(v.iter().any(|x| x.check == "witness_transport"), "{v:?}");
    }

    #[test]
    fn wrong_stabilizer_breaks_volume_identity() {
        let mut doc = doc(1);
        doc.representatives[0].stabilizer_image_order *= 2;
        doc.representatives[0].stabilizer_order *= 2;
        let v = verify_document(&doc, 3);
        assert!(v.iter().any(|x| x.check == "volume_identity"), "{v:?}");
    }

    #[test]
    fn save_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let doc = doc(3);
        let path = save_document(dir.path(), &doc).unwrap();
        assert_eq!(path.file_name().unwrap(), "disc_3.json");
        assert!(has_valid_document(&path, &doc.field));
        assert!(!has_valid_document(&path, &Field::new(1).unwrap()));
        assert_eq!(load_dir(dir.path()).unwrap(), vec![doc]);
        fs::write(dir.path().join("disc_4.json"), "{").unwrap();
        assert!(matches!(load_dir(dir.path()), Err(Error::MalformedReport { .. })));
    }

    #[test]
    fn single_field_stats() {
        let dir = tempfile::tempdir().unwrap();
        let docs = vec![doc(3)];
        write_stats(&docs, dir.path()).unwrap();
        let table = fs::read_to_string(dir.path().join("polytope_types.csv")).unwrap();
        assert!(table.contains("tetrahedron,1,1,100.000"), "{table}");
        let rows = type_table(&docs);
        assert_eq!(rows.iter().map(|r| r.polytopes).sum::<u64>(), 1);
    }

    #[test]
    fn range_selection() {
        let f: Vec<i64> = fields_in_range(1, 24).iter().map(|f| f.discriminant).collect();
        assert_eq!(f, vec![-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]);
    }
}
