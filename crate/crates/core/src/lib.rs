//! Exact enumeration of perfect binary Hermitian forms over imaginary
//! quadratic fields, with the ideal polytopes they cut out of hyperbolic
//! 3-space and the analytic quantities used to check the enumeration.

pub mod analytics;
pub mod error;
pub mod field;
pub mod hermitian;
pub mod lattice;
pub mod linalg;
pub mod polytope;
pub mod rational;
pub mod report;
pub mod voronoi;

pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use hermitian::{q_image, ConePoint, HermitianForm, LatticeVector, MinimalData, QuaternaryForm};
pub use polytope::{Cusp, Fingerprint, Polytope, Subdivision};
pub use rational::Rational;
pub use report::{FieldDocument, FieldReport, Violation};
