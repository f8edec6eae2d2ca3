//! Exact residuals, membership tests and l1 distances to hyperplanes, facets,
//! faces and polytope boundaries.

pub mod lp;

use std::ops::Deref;

use num_traits::{Signed, Zero};

use crate::catalog::{pauli_constraints, plain_pauli_constraints, ConstraintCatalog};
use crate::constraint::{ConstraintKind, LinearConstraint, Relation};
use crate::error::{Error, Result};
use crate::rational::{fraction_string, q, Q};
use crate::setting::Setting;

pub use lp::{solve_lp, LpSolution, LpStatus};
use lp::StandardLp;

/// Orbital (`λ_j ∈ [0,2]`) or spin-orbital (`λ_j ∈ [0,1]`) occupations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    Orbital,
    SpinOrbital,
}

impl Space {
    pub fn cap(self) -> i64 {
        match self {
            Space::Orbital => 2,
            Space::SpinOrbital => 1,
        }
    }
}

/// A vector of natural occupation numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    pub values: Vec<Q>,
    pub space: Space,
    pub sorted_desc: bool,
}

impl OccupationVector {
    pub fn orbital(values: Vec<Q>) -> Self {
        let sorted_desc = is_descending(&values);
        OccupationVector {
            values,
            space: Space::Orbital,
            sorted_desc,
        }
    }

    pub fn spin_orbital(values: Vec<Q>) -> Self {
        let sorted_desc = is_descending(&values);
        OccupationVector {
            values,
            space: Space::SpinOrbital,
            sorted_desc,
        }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::orbital(values.iter().map(|&x| q(x)).collect())
    }

    /// Descending copy together with the permutation `perm[new] = old`.
    pub fn sorted(&self) -> (OccupationVector, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.values.len()).collect();
        perm.sort_by(|&a, &b| self.values[b].cmp(&self.values[a]).then(a.cmp(&b)));
        let values = perm.iter().map(|&i| self.values[i].clone()).collect();
        (
            OccupationVector {
                values,
                space: self.space,
                sorted_desc: true,
            },
            perm,
        )
    }

    pub fn sum(&self) -> Q {
        self.values.iter().fold(Q::zero(), |a, b| a + b)
    }
}

impl Deref for OccupationVector {
    type Target = [Q];
    fn deref(&self) -> &[Q] {
        &self.values
    }
}

fn is_descending(v: &[Q]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

/// A polytope in H-representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub equalities: Vec<LinearConstraint>,
    pub inequalities: Vec<LinearConstraint>,
    pub dim: usize,
}

impl Polytope {
    pub fn from_constraints(dim: usize, constraints: impl IntoIterator<Item = LinearConstraint>) -> Self {
        let mut p = Polytope {
            equalities: Vec::new(),
            inequalities: Vec::new(),
            dim,
        };
        for c in constraints {
            assert_eq!(c.dim(), dim, "constraint dimension");
            if c.is_equality() {
                p.equalities.push(c);
            } else {
                p.inequalities.push(c);
            }
        }
        p
    }

    pub fn constraints(&self) -> impl Iterator<Item = &LinearConstraint> {
        self.equalities.iter().chain(&self.inequalities)
    }

    /// GPC inequalities with their 1-based index among all GPC rows of the
    /// setting (equality rows count towards the index).
    pub fn gpc_facets(&self) -> Vec<(usize, &LinearConstraint)> {
        let mut out: Vec<(usize, &LinearConstraint)> = self
            .inequalities
            .iter()
            .filter(|c| c.kind == ConstraintKind::Gpc)
            .map(|c| (gpc_index(c), c))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }
}

/// Index parsed from a `GPC <i>` label, or 0.
pub fn gpc_index(c: &LinearConstraint) -> usize {
    c.label
        .strip_prefix("GPC ")
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

/// `Σ^(p)↓`: the catalog GPCs together with the spin-adapted Pauli constraints.
pub fn spectral_polytope(setting: &Setting, catalog: &ConstraintCatalog) -> Result<Polytope> {
    let lookup = catalog.lookup(setting.key())?;
    let mut cons = pauli_constraints(setting);
    cons.extend(lookup.gpcs);
    Ok(Polytope::from_constraints(setting.d(), cons))
}

/// `Σ^(e)_{S,M}`: spin-adapted Pauli constraints only.
pub fn spin_pauli_polytope(setting: &Setting) -> Polytope {
    Polytope::from_constraints(setting.d(), pauli_constraints(setting))
}

/// `Σ^(e)`: ordering, `λ_1 ≤ 2` and normalization.
pub fn pauli_polytope(setting: &Setting) -> Polytope {
    Polytope::from_constraints(setting.d(), plain_pauli_constraints(setting.d(), setting.n_particles, 2))
}

/// Exact residual `κ0 + κ·v`.
pub fn residual(c: &LinearConstraint, v: &[Q]) -> Result<Q> {
    c.residual(v)
}

/// Exact membership test.
pub fn contains(p: &Polytope, v: &[Q]) -> Result<bool> {
    check_dim(p.dim, v.len())?;
    Ok(p.constraints().all(|c| c.holds(v)))
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        Err(Error::Dimension { expected, got })
    } else {
        Ok(())
    }
}

/// One finding of [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `v[position] < v[position + 1]` (0-based position).
    Ordering { position: usize },
    OutOfBox { position: usize, value: Q },
    Normalization { sum: Q, expected: Q },
    SpinPauli { label: String, residual: Q },
    Dimension { expected: usize, got: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Ordering { position } => {
                write!(f, "ordering violated at position {}", position + 1)
            }
            Violation::OutOfBox { position, value } => {
                write!(f, "entry {} = {} outside the box", position + 1, fraction_string(value))
            }
            Violation::Normalization { sum, expected } => write!(
                f,
                "sum {} differs from N = {}",
                fraction_string(sum),
                fraction_string(expected)
            ),
            Violation::SpinPauli { label, residual } => {
                write!(f, "{label} violated (residual {})", fraction_string(residual))
            }
            Violation::Dimension { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
        }
    }
}

/// Report of [`validate`]; the input is never modified.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks ordering, the box, normalization within `tol`, and the spin-adapted
/// Pauli constraints. Violations are data, not errors.
pub fn validate(setting: &Setting, v: &OccupationVector, tol: &Q) -> ValidationReport {
    let mut report = ValidationReport::default();
    let d = setting.d();
    if v.len() != d {
        report.violations.push(Violation::Dimension {
            expected: d,
            got: v.len(),
        });
        return report;
    }
    for i in 0..d.saturating_sub(1) {
        if v[i] < v[i + 1] {
            report.violations.push(Violation::Ordering { position: i });
        }
    }
    let cap = q(v.space.cap());
    for (i, x) in v.iter().enumerate() {
        if x.is_negative() || *x > cap {
            report.violations.push(Violation::OutOfBox {
                position: i,
                value: x.clone(),
            });
        }
    }
    let sum = v.sum();
    let expected = q(setting.n_particles as i64);
    if (&sum - &expected).abs() > *tol {
        report.violations.push(Violation::Normalization { sum, expected });
    }
    for c in pauli_constraints(setting) {
        if c.kind == ConstraintKind::SpinPauli {
            let r = c.residual_unchecked(v);
            if r.is_negative() {
                report.violations.push(Violation::SpinPauli {
                    label: c.label.clone(),
                    residual: r,
                });
            }
        }
    }
    report
}

/// l1 distance to the hyperplane `κ0 + κ·x = 0`, `|κ0 + κ·v| / max_j |κ_j|`.
pub fn hyperplane_distance_l1(c: &LinearConstraint, v: &[Q]) -> Result<Q> {
    check_dim(c.dim(), v.len())?;
    if c.has_zero_normal() {
        return Err(Error::ZeroNormal);
    }
    Ok(c.residual_unchecked(v).abs() / c.max_abs_kappa())
}

/// Outcome of a distance LP.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Distance {
    Value(Q),
    /// The face is empty.
    EmptyFace,
}

impl Distance {
    pub fn value(&self) -> Option<&Q> {
        match self {
            Distance::Value(x) => Some(x),
            Distance::EmptyFace => None,
        }
    }

    pub fn into_result(self) -> Result<Q> {
        match self {
            Distance::Value(x) => Ok(x),
            Distance::EmptyFace => Err(Error::EmptyFace),
        }
    }
}

/// Minimum l1 distance from `v` to `{x : all constraints hold}`; returns the
/// distance and a closest point.
pub fn distance_to_region(constraints: &[&LinearConstraint], v: &[Q]) -> Result<(Distance, Option<Vec<Q>>)> {
    let d = v.len();
    for c in constraints {
        check_dim(d, c.dim())?;
    }
    // x = v + p − q with p, q ≥ 0; minimize Σ(p + q).
    let mut lp = StandardLp::new(2 * d);
    for j in 0..2 * d {
        lp.cost[j] = q(1);
    }
    for c in constraints {
        let r = c.residual_unchecked(v);
        let mut row: Vec<Q> = c.kappa.clone();
        row.extend(c.kappa.iter().map(|k| -k));
        lp.add_row(row, -r, c.relation);
    }
    let sol = lp.solve();
    match sol.status {
        LpStatus::Optimal => {
            let y = sol.point.expect("point");
            let x = (0..d).map(|j| &v[j] + &y[j] - &y[d + j]).collect();
            Ok((Distance::Value(sol.value.expect("value")), Some(x)))
        }
        LpStatus::Infeasible => Ok((Distance::EmptyFace, None)),
        LpStatus::Unbounded => unreachable!("l1 objective is bounded below"),
    }
}

/// l1 distance from `v` to the facet `p ∩ {facet = 0}`.
pub fn facet_distance_l1(p: &Polytope, facet: &LinearConstraint, v: &[Q]) -> Result<Distance> {
    check_dim(p.dim, v.len())?;
    check_dim(p.dim, facet.dim())?;
    // Fast path: a point of the polytope on the hyperplane.
    if facet.residual_unchecked(v).is_zero() && p.constraints().all(|c| c.holds(v)) {
        return Ok(Distance::Value(Q::zero()));
    }
    let as_eq = LinearConstraint {
        relation: Relation::EqZero,
        ..facet.clone()
    };
    let mut cons: Vec<&LinearConstraint> = p.constraints().collect();
    cons.push(&as_eq);
    Ok(distance_to_region(&cons, v)?.0)
}

/// Per-constraint entry of a [`DistanceReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintDistance {
    pub index: usize,
    pub residual: Q,
    pub hyperplane_distance: Q,
    pub facet_distance: Distance,
}

/// Residuals and distances of `v` for every GPC facet of a polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub entries: Vec<ConstraintDistance>,
    pub min_facet_distance: Option<Q>,
    pub argmin: Option<usize>,
}

/// Computes the full distance report for the GPC facets of `p`.
pub fn distance_report(p: &Polytope, v: &[Q]) -> Result<DistanceReport> {
    let mut entries = Vec::new();
    let mut best: Option<(Q, usize)> = None;
    for (index, c) in p.gpc_facets() {
        let residual = c.residual(v)?;
        let hyperplane_distance = hyperplane_distance_l1(c, v)?;
        let facet_distance = facet_distance_l1(p, c, v)?;
        if let Distance::Value(x) = &facet_distance {
            if best.as_ref().map_or(true, |(b, _)| x < b) {
                best = Some((x.clone(), index));
            }
        }
        entries.push(ConstraintDistance {
            index,
            residual,
            hyperplane_distance,
            facet_distance,
        });
    }
    Ok(DistanceReport {
        entries,
        min_facet_distance: best.as_ref().map(|b| b.0.clone()),
        argmin: best.map(|b| b.1),
    })
}

/// Minimum facet distance over the GPC facets and its index (smallest index on
/// ties). Empty facets are skipped.
pub fn boundary_distance(p: &Polytope, v: &[Q]) -> Result<(Q, usize)> {
    let facets = p.gpc_facets();
    if facets.is_empty() {
        return Err(Error::NotCovered("polytope has no GPC facets".into()));
    }
    let mut best: Option<(Q, usize)> = None;
    for (index, c) in facets {
        if let Distance::Value(x) = facet_distance_l1(p, c, v)? {
            if best.as_ref().map_or(true, |(b, _)| x < *b) {
                best = Some((x, index));
            }
        }
    }
    best.ok_or(Error::EmptyFace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::constraint::{normalize_inequality, Sense};
    use crate::rational::qf;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn setting(n: u32, d: u32, s: u32) -> Setting {
        Setting::highest(n, d, s).unwrap()
    }

    #[test]
    fn hyperplane_distances() {
        let c = normalize_inequality(&qs(&[1, -1]), &q(1), Sense::Eq);
        assert_eq!(hyperplane_distance_l1(&c, &qs(&[2, 0])).unwrap(), q(1));
        let c = normalize_inequality(&qs(&[2, 1]), &q(4), Sense::Eq);
        assert_eq!(hyperplane_distance_l1(&c, &qs(&[0, 0])).unwrap(), q(2));
        let c = normalize_inequality(&qs(&[2, -1, 0, 1]), &q(3), Sense::Leq);
        assert_eq!(hyperplane_distance_l1(&c, &qs(&[2, 1, 1, 0])).unwrap(), q(0));
        let z = LinearConstraint::geq(q(1), qs(&[0, 0]), ConstraintKind::Gpc);
        assert_eq!(hyperplane_distance_l1(&z, &qs(&[0, 0])), Err(Error::ZeroNormal));
    }

    #[test]
    fn membership() {
        let cat = builtin_catalog();
        let p = spectral_polytope(&setting(4, 4, 2), &cat).unwrap();
        assert!(contains(&p, &qs(&[2, 1, 1, 0])).unwrap());
        assert!(contains(&p, &qs(&[1, 1, 1, 1])).unwrap());
        assert!(!contains(&p, &qs(&[2, 2, 0, 0])).unwrap());
        assert!(contains(&p, &qs(&[1, 1])).is_err());
    }

    #[test]
    fn validation_findings() {
        let s = setting(4, 4, 2);
        let ok = validate(&s, &OccupationVector::from_ints(&[2, 1, 1, 0]), &q(0));
        assert!(ok.is_valid());
        let r = validate(&s, &OccupationVector::from_ints(&[1, 2, 1, 0]), &q(0));
        assert_eq!(r.violations, vec![Violation::Ordering { position: 0 }]);
        let r = validate(&s, &OccupationVector::from_ints(&[2, 2, 0, 0]), &q(0));
        assert!(matches!(&r.violations[..], [Violation::SpinPauli { residual, .. }] if *residual == q(-1)));
        let r = validate(
            &s,
            &OccupationVector::orbital(vec![q(2), q(1), q(1), qf(1, 100)]),
            &qf(1, 1000),
        );
        assert!(matches!(&r.violations[..], [Violation::Normalization { .. }]));
    }

    #[test]
    fn vertex_lies_on_facets() {
        let cat = builtin_catalog();
        let p = spectral_polytope(&setting(4, 4, 2), &cat).unwrap();
        let v = qs(&[2, 1, 1, 0]);
        for (_, f) in p.gpc_facets() {
            assert_eq!(facet_distance_l1(&p, f, &v).unwrap(), Distance::Value(q(0)));
        }
        assert_eq!(boundary_distance(&p, &v).unwrap(), (q(0), 1));
    }

    #[test]
    fn center_distances() {
        let cat = builtin_catalog();
        let p = spectral_polytope(&setting(4, 4, 2), &cat).unwrap();
        let v = qs(&[1, 1, 1, 1]);
        let rep = distance_report(&p, &v).unwrap();
        assert_eq!(rep.entries.len(), 4);
        for e in &rep.entries {
            assert!(e.hyperplane_distance <= *e.facet_distance.value().unwrap());
        }
        let (d, i) = boundary_distance(&p, &v).unwrap();
        assert_eq!(Some(d), rep.min_facet_distance);
        assert_eq!(Some(i), rep.argmin);
    }

    #[test]
    fn outside_point_still_has_distance() {
        let cat = builtin_catalog();
        let p = spectral_polytope(&setting(4, 4, 2), &cat).unwrap();
        let v = vec![q(2), q(1), qf(9, 10), q(0)];
        let (d, _) = boundary_distance(&p, &v).unwrap();
        assert!(d.is_positive());
    }

    #[test]
    fn empty_face_is_reported() {
        let p = Polytope::from_constraints(
            1,
            vec![LinearConstraint::geq(q(1), qs(&[-1]), ConstraintKind::Ordering)],
        );
        let f = LinearConstraint::geq(q(-2), qs(&[1]), ConstraintKind::Gpc);
        assert_eq!(facet_distance_l1(&p, &f, &qs(&[0])).unwrap(), Distance::EmptyFace);
    }

    #[test]
    fn sorting_records_permutation() {
        let v = OccupationVector::from_ints(&[0, 2, 1]);
        assert!(!v.sorted_desc);
        let (s, perm) = v.sorted();
        assert_eq!(s.values, qs(&[2, 1, 0]));
        assert_eq!(perm, vec![1, 2, 0]);
    }
}
