//! Fixtures shared by the benchmarks.

use spin_gpc::geometry::spectral_polytope;
use spin_gpc::qparam::sample_polytope;
use spin_gpc::{builtin_catalog, ConstraintCatalog, Polytope, Setting, Q};

pub struct Fixture {
    pub setting: Setting,
    pub catalog: ConstraintCatalog,
    pub polytope: Polytope,
    pub points: Vec<Vec<Q>>,
}

/// Builtin polytope of `(n, d, 2S)` with `count` interior sample points.
pub fn fixture(n: u32, d: u32, two_s: u32, count: usize) -> Fixture {
    let setting = Setting::highest(n, d, two_s).expect("valid setting");
    let catalog = builtin_catalog();
    let polytope = spectral_polytope(&setting, &catalog).expect("covered setting");
    let points = sample_polytope(&setting, &polytope, count, 7, 1000).expect("samples");
    Fixture {
        setting,
        catalog,
        polytope,
        points,
    }
}
