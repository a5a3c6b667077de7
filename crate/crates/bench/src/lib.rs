//! Fixtures shared by the benchmarks.

use perfect_forms::voronoi::{enumerate_perfect_forms, PerfectForm};
use perfect_forms::Field;

/// Representatives of every class for `d`, for benchmarks that need
/// realistic perfect forms.
pub fn representatives(d: i64) -> (Field, Vec<PerfectForm>) {
    let f = Field::new(d).expect("valid d");
    let g = enumerate_perfect_forms(&f).expect("enumeration succeeds");
    (f, g.representatives)
}
