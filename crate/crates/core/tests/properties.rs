use proptest::prelude::*;
use spin_gpc::catalog::{builtin_catalog, CatalogKey};
use spin_gpc::geometry::{
    contains, facet_distance_l1, hyperplane_distance_l1, spectral_polytope, Distance, Polytope,
};
use spin_gpc::qparam::{builtin_intersections, sample_polytope, QEvaluator, QValue, Variant};
use spin_gpc::rational::{q, qf};
use spin_gpc::sandbox::build_sector_basis;
use spin_gpc::selection::{highest_weight, sector_dimension, selected_weights, weight_lattice};
use spin_gpc::truncation::{bounds, lower_bound, rotated_hyperplane_distance};
use spin_gpc::{ConstraintCatalog, LinearConstraint, OccupationVector, Setting, Q};

/// Orbital settings with GPC facets and `d ≤ 5`.
fn faceted_settings(cat: &ConstraintCatalog) -> Vec<Setting> {
    cat.settings()
        .into_iter()
        .filter_map(|(k, n)| match k {
            CatalogKey::Orbital(k) if n > 0 && k.d() <= 5 => Some(k.setting().unwrap()),
            _ => None,
        })
        .collect()
}

fn facet_value(p: &Polytope, c: &LinearConstraint, v: &[Q]) -> Option<Q> {
    match facet_distance_l1(p, c, v).unwrap() {
        Distance::Value(x) => Some(x),
        Distance::EmptyFace => None,
    }
}

/// Copy of `cat` with the GPCs of `s` multiplied by `factor`.
fn scaled_catalog(cat: &ConstraintCatalog, s: &Setting, factor: &Q) -> ConstraintCatalog {
    let mut out = cat.clone();
    let entry = out.entries.get_mut(&CatalogKey::Orbital(s.key())).unwrap();
    entry.constraints = entry.constraints.iter().map(|c| c.scaled(factor)).collect();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn distances_relax_scale_and_repeat(pick in 0usize..64, seed in 0u64..1_000_000, num in 1i64..9, den in 1i64..9) {
        let cat = builtin_catalog();
        let settings = faceted_settings(&cat);
        let s = settings[pick % settings.len()];
        let p = spectral_polytope(&s, &cat).unwrap();
        let factor = qf(num, den);
        let scaled = spectral_polytope(&s, &scaled_catalog(&cat, &s, &factor)).unwrap();
        for v in sample_polytope(&s, &p, 2, seed, 1000).unwrap() {
            for ((i, c), (j, c2)) in p.gpc_facets().into_iter().zip(scaled.gpc_facets()) {
                prop_assert_eq!(i, j);
                let h = hyperplane_distance_l1(c, &v).unwrap();
                prop_assert_eq!(c.residual(&v).unwrap() == q(0), h == q(0));
                prop_assert_eq!(&h, &hyperplane_distance_l1(c2, &v).unwrap());
                let f = facet_value(&p, c, &v);
                if let Some(f) = &f {
                    prop_assert!(&h <= f);
                }
                prop_assert_eq!(&f, &facet_value(&scaled, c2, &v));
                prop_assert_eq!(&f, &facet_value(&p, c, &v));
            }
        }
    }

    #[test]
    fn q_values_are_ordered_and_scale_free(pick in 0usize..64, seed in 0u64..1_000_000) {
        let cat = builtin_catalog();
        let table = builtin_intersections();
        let settings: Vec<Setting> = table
            .settings()
            .into_iter()
            .filter(|k| k.d() <= 5)
            .map(|k| k.setting().unwrap())
            .collect();
        let s = settings[pick % settings.len()];
        let p = spectral_polytope(&s, &cat).unwrap();
        let scaled = scaled_catalog(&cat, &s, &qf(7, 3));
        let v = sample_polytope(&s, &p, 1, seed, 1000).unwrap().remove(0);
        let mut by_variant = Vec::new();
        for variant in [Variant::A, Variant::B] {
            let rep = QEvaluator::new(&s, variant, &cat, table).unwrap().q_global(&v).unwrap();
            let rep2 = QEvaluator::new(&s, variant, &scaled, table).unwrap().q_global(&v).unwrap();
            prop_assert_eq!(&rep.gpcs, &rep2.gpcs);
            for g in &rep.gpcs {
                if let (QValue::Finite(total), QValue::Finite(gi)) = (rep.value, g.value) {
                    prop_assert!(total >= gi);
                }
                if rep.value != QValue::Infinite && g.value == QValue::Infinite {
                    prop_assert!(false, "global Q below an infinite Q^(i)");
                }
                for f in &g.faces {
                    if let (QValue::Finite(gi), QValue::Finite(x)) = (g.value, f.value) {
                        prop_assert!(gi >= x);
                    }
                }
            }
            by_variant.push(rep);
        }
        for ga in &by_variant[0].gpcs {
            let fa = table.faces_for(s.key(), ga.index, Variant::A);
            let fb = table.faces_for(s.key(), ga.index, Variant::B);
            let same = fa.len() == fb.len() && fa.iter().zip(&fb).all(|(a, b)| a.c == b.c && a.shape == b.shape);
            if same {
                let gb = by_variant[1].gpcs.iter().find(|g| g.index == ga.index).unwrap();
                prop_assert_eq!(ga.value, gb.value);
            }
        }
    }

    #[test]
    fn truncation_bounds_are_ordered(pick in 0usize..3, seed in 0u64..1_000_000) {
        let cat = builtin_catalog();
        let (s, d_prime) = [
            (Setting::highest(3, 5, 1).unwrap(), 4),
            (Setting::highest(3, 5, 1).unwrap(), 3),
            (Setting::highest(4, 5, 2).unwrap(), 4),
        ][pick];
        let p = spectral_polytope(&s, &cat).unwrap();
        let v = sample_polytope(&s, &p, 1, seed, 1000).unwrap().remove(0);
        let t = bounds(&OccupationVector::orbital(v), &s, d_prime, &cat).unwrap();
        prop_assert!(t.lower_bound >= q(0));
        prop_assert!(t.lower_bound <= t.upper_bound);
    }

    #[test]
    fn lower_bound_decreases_with_truncation_error(
        pick in 0usize..64,
        seed in 0u64..1_000_000,
        e1 in 0i64..200,
        e2 in 0i64..200,
    ) {
        let cat = builtin_catalog();
        let settings = faceted_settings(&cat);
        let s = settings[pick % settings.len()];
        let p = spectral_polytope(&s, &cat).unwrap();
        let v = sample_polytope(&s, &p, 1, seed, 1000).unwrap().remove(0);
        let (lo, hi) = (qf(e1.min(e2), 1000), qf(e1.max(e2), 1000));
        for (_, c) in p.gpc_facets() {
            let a = lower_bound(c, &v, &lo).unwrap();
            let b = lower_bound(c, &v, &hi).unwrap();
            prop_assert!(b.value <= a.value, "{} at ε' = {} vs {}", c, lo, hi);
            let at_zero = rotated_hyperplane_distance(c, &v, &hi, &q(0)).unwrap();
            prop_assert_eq!(at_zero, Some(hyperplane_distance_l1(c, &v).unwrap()));
        }
    }
}

#[test]
fn highest_weight_lies_in_every_builtin_polytope() {
    let cat = builtin_catalog();
    for (key, _) in cat.settings() {
        let CatalogKey::Orbital(k) = key else { continue };
        let s = k.setting().unwrap();
        let hw: Vec<Q> = highest_weight(&s).as_rationals();
        let p = spectral_polytope(&s, &cat).unwrap();
        assert!(contains(&p, &hw).unwrap(), "{s}");
        for (_, c) in p.gpc_facets() {
            if c.residual(&hw).unwrap() == q(0) {
                assert_eq!(hyperplane_distance_l1(c, &hw).unwrap(), q(0));
                assert_eq!(facet_value(&p, c, &hw), Some(q(0)));
                let sel = selected_weights(c, &s).unwrap();
                assert!(sel.selected.iter().any(|w| w.occupations == highest_weight(&s).occupations));
            }
        }
    }
}

#[test]
fn lattice_sizes_match_the_sandbox() {
    for d in 1..=5u32 {
        for n in 0..=2 * d {
            for two_s in (n % 2..=n.min(2 * d - n)).step_by(2) {
                let Ok(s) = Setting::highest(n, d, two_s) else { continue };
                let lattice = weight_lattice(&s).unwrap();
                let total: u64 = lattice.iter().map(|w| w.multiplicity).sum();
                assert_eq!(total, sector_dimension(&s).unwrap());
                let basis = build_sector_basis(&s).map(|b| b.len() as u64).unwrap_or(0);
                assert_eq!(basis, total, "{s}");
                let hw = highest_weight(&s).occupations;
                for w in &lattice {
                    let sorted = w.sorted_desc();
                    let mut acc = (0u32, 0u32);
                    for (a, b) in sorted.iter().zip(&hw) {
                        acc.0 += *a as u32;
                        acc.1 += *b as u32;
                        assert!(acc.0 <= acc.1, "{s}: {:?} not dominated", w.occupations);
                    }
                }
            }
        }
    }
}

#[test]
fn selection_partitions_by_exact_residual() {
    let cat = builtin_catalog();
    for s in faceted_settings(&cat) {
        for (_, c) in cat.lookup(s.key()).unwrap().inequalities() {
            let r = selected_weights(c, &s).unwrap();
            for w in &r.selected {
                assert_eq!(c.residual(&w.as_rationals()).unwrap(), q(0));
            }
            for w in &r.excluded {
                assert_ne!(c.residual(&w.as_rationals()).unwrap(), q(0));
            }
            let total = r.selected.len() + r.excluded.len();
            assert_eq!(total, weight_lattice(&s).unwrap().len());
            assert!(r.pinned_dimension <= sector_dimension(&s).unwrap());
        }
    }
}
