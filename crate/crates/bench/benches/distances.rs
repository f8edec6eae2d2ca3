use criterion::{black_box, criterion_group, criterion_main, Criterion};
use spin_gpc::geometry::{distance_report, facet_distance_l1, hyperplane_distance_l1};
use spin_gpc::qparam::{builtin_intersections, QEvaluator, Variant};
use spin_gpc::sandbox::{orbital_spectrum, seeded_state};
use spin_gpc::truncation::bounds;
use spin_gpc::{OccupationVector, Setting};
use spin_gpc_bench::fixture;

fn distances(c: &mut Criterion) {
    for (n, d, two_s) in [(3, 5, 1), (4, 6, 2), (5, 6, 3)] {
        let f = fixture(n, d, two_s, 8);
        let facets = f.polytope.gpc_facets();
        let (_, gpc) = facets[0];
        let v = &f.points[0];
        c.bench_function(&format!("hyperplane {n},{d},{two_s}"), |b| {
            b.iter(|| hyperplane_distance_l1(gpc, black_box(v)).unwrap())
        });
        c.bench_function(&format!("facet {n},{d},{two_s}"), |b| {
            b.iter(|| facet_distance_l1(&f.polytope, gpc, black_box(v)).unwrap())
        });
        c.bench_function(&format!("all facets {n},{d},{two_s}"), |b| {
            b.iter(|| distance_report(&f.polytope, black_box(v)).unwrap())
        });
    }
}

fn qparam(c: &mut Criterion) {
    let f = fixture(4, 5, 2, 4);
    let table = builtin_intersections();
    let eval = QEvaluator::new(&f.setting, Variant::A, &f.catalog, table).unwrap();
    c.bench_function("q_global 4,5,2", |b| b.iter(|| eval.q_global(black_box(&f.points[0])).unwrap()));
}

fn truncation(c: &mut Criterion) {
    let f = fixture(3, 5, 1, 4);
    let v = OccupationVector::orbital(f.points[0].clone());
    c.bench_function("bounds 3,5,1 -> 4", |b| {
        b.iter(|| bounds(black_box(&v), &f.setting, 4, &f.catalog).unwrap())
    });
}

fn sandbox(c: &mut Criterion) {
    let s = Setting::highest(4, 6, 2).unwrap();
    let psi = seeded_state(&s, 1).unwrap();
    c.bench_function("orbital spectrum 4,6,2", |b| b.iter(|| orbital_spectrum(black_box(&psi)).unwrap()));
}

criterion_group!(benches, distances, qparam, truncation, sandbox);
criterion_main!(benches);
