//! The spin-adapted Q-parameter: distances to the faces `M_x` of each GPC
//! facet, the auxiliary values `Q_x`, their per-GPC maxima and the global `Q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::catalog::{split_fields, ConstraintCatalog};
use crate::constraint::{ConstraintKind, LinearConstraint, Relation};
use crate::error::{Error, Result};
use crate::geometry::lp::{LpStatus, StandardLp};
use crate::geometry::{contains, distance_to_region, facet_distance_l1, spectral_polytope, Distance, Polytope};
use crate::rational::{parse_rational, q, round_to, to_f64, Q};
use crate::setting::{Setting, SettingKey};

/// Embedded intersection tables.
pub const BUILTIN_INTERSECTIONS: &str = include_str!("../data/intersections.txt");

/// Which Pauli polytope the faces were intersected with: `A` uses the
/// spin-adapted Pauli polytope, `B` the plain one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    A,
    B,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "A" | "a" => Some(Variant::A),
            "B" | "b" => Some(Variant::B),
            _ => None,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

/// Hyperplane or vertex description of a face.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FaceShape {
    H {
        equalities: Vec<LinearConstraint>,
        inequalities: Vec<LinearConstraint>,
    },
    V {
        vertices: Vec<Vec<Q>>,
    },
}

/// One face `M_x^(i)` together with its constant `c_x^(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionFace {
    pub setting: SettingKey,
    pub gpc_index: usize,
    /// 1-based position among the faces of the same GPC and variant.
    pub face_id: usize,
    pub variant: Variant,
    pub c: Q,
    pub shape: FaceShape,
}

impl IntersectionFace {
    pub fn dim(&self) -> usize {
        self.setting.d()
    }

    fn rows(&self) -> Vec<&LinearConstraint> {
        match &self.shape {
            FaceShape::H {
                equalities,
                inequalities,
            } => equalities.iter().chain(inequalities).collect(),
            FaceShape::V { .. } => Vec::new(),
        }
    }
}

/// All faces, grouped by setting, GPC index and variant.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntersectionTable {
    pub faces: Vec<IntersectionFace>,
}

/// The embedded intersection tables.
pub fn builtin_intersections() -> &'static IntersectionTable {
    static TABLE: OnceLock<IntersectionTable> = OnceLock::new();
    TABLE.get_or_init(|| parse_intersections(BUILTIN_INTERSECTIONS).expect("embedded intersections parse"))
}

/// Parses the intersection text format.
pub fn parse_intersections(text: &str) -> Result<IntersectionTable> {
    let mut faces: Vec<IntersectionFace> = Vec::new();
    let mut counters: BTreeMap<(SettingKey, usize, Variant), usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(raw);
        let (col0, keyword) = fields[0];
        match keyword {
            "face" => {
                if fields.len() != 7 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        "expected `face <N> <d> <2S> <gpc-index> <A|B> <c>`",
                    ));
                }
                let mut ints = [0u32; 4];
                for (k, slot) in ints.iter_mut().enumerate() {
                    let (col, tok) = fields[k + 1];
                    *slot = tok
                        .parse()
                        .map_err(|_| Error::parse(line_no, col, format!("expected an integer, found {tok:?}")))?;
                }
                let (vcol, vtok) = fields[5];
                let variant = Variant::parse(vtok)
                    .ok_or_else(|| Error::parse(line_no, vcol, format!("unknown variant {vtok:?}")))?;
                let (ccol, ctok) = fields[6];
                let c = parse_rational(ctok).map_err(|e| Error::from_number(line_no, ccol - 1, e))?;
                if !c.is_positive() || c > Q::one() {
                    return Err(Error::parse(line_no, ccol, "constant must lie in (0, 1]"));
                }
                let setting = SettingKey::new(ints[0], ints[1], ints[2]);
                let gpc_index = ints[3] as usize;
                if gpc_index == 0 {
                    return Err(Error::parse(line_no, fields[4].0, "GPC indices start at 1"));
                }
                let counter = counters.entry((setting, gpc_index, variant)).or_insert(0);
                *counter += 1;
                faces.push(IntersectionFace {
                    setting,
                    gpc_index,
                    face_id: *counter,
                    variant,
                    c,
                    shape: FaceShape::H {
                        equalities: Vec::new(),
                        inequalities: Vec::new(),
                    },
                });
            }
            "eq" | "ineq" | "vertex" => {
                let Some(face) = faces.last_mut() else {
                    return Err(Error::parse(line_no, col0, "row before any face header"));
                };
                let d = face.dim();
                let expected = if keyword == "vertex" { d } else { d + 1 };
                if fields.len() != expected + 1 {
                    return Err(Error::parse(
                        line_no,
                        col0,
                        format!("expected {expected} numbers, found {}", fields.len() - 1),
                    ));
                }
                let mut nums = Vec::with_capacity(expected);
                for (col, tok) in &fields[1..] {
                    nums.push(parse_rational(tok).map_err(|e| Error::from_number(line_no, col - 1, e))?);
                }
                let label = format!("M{} row {}", face.face_id, line_no);
                match (keyword, &mut face.shape) {
                    ("vertex", FaceShape::V { vertices }) => vertices.push(nums),
                    ("vertex", shape @ FaceShape::H { .. }) => {
                        if matches!(shape, FaceShape::H { equalities, inequalities } if !equalities.is_empty() || !inequalities.is_empty())
                        {
                            return Err(Error::parse(line_no, col0, "face mixes vertex and hyperplane rows"));
                        }
                        *shape = FaceShape::V { vertices: vec![nums] };
                    }
                    (_, FaceShape::V { .. }) => {
                        return Err(Error::parse(line_no, col0, "face mixes vertex and hyperplane rows"));
                    }
                    (kw, FaceShape::H {
                        equalities,
                        inequalities,
                    }) => {
                        let b = nums.remove(0);
                        let c = LinearConstraint {
                            kappa0: -b,
                            kappa: nums,
                            relation: if kw == "eq" {
                                Relation::EqZero
                            } else {
                                Relation::GeqZero
                            },
                            kind: ConstraintKind::Face,
                            label,
                        };
                        if c.has_zero_normal() {
                            return Err(Error::parse(line_no, col0, "all coefficients are zero"));
                        }
                        if c.is_equality() {
                            equalities.push(c);
                        } else {
                            inequalities.push(c);
                        }
                    }
                }
            }
            other => {
                return Err(Error::parse(line_no, col0, format!("unknown keyword {other:?}")));
            }
        }
    }
    for f in &faces {
        if let FaceShape::H {
            equalities,
            inequalities,
        } = &f.shape
        {
            if equalities.is_empty() && inequalities.is_empty() {
                return Err(Error::Invalid(format!(
                    "face {} of GPC {} ({}, variant {}) has no rows",
                    f.face_id, f.gpc_index, f.setting, f.variant
                )));
            }
        }
    }
    Ok(IntersectionTable { faces })
}

impl IntersectionTable {
    pub fn faces_for(&self, setting: SettingKey, gpc_index: usize, variant: Variant) -> Vec<&IntersectionFace> {
        self.faces
            .iter()
            .filter(|f| f.setting == setting && f.gpc_index == gpc_index && f.variant == variant)
            .collect()
    }

    /// GPC indices with at least one face for the setting and variant.
    pub fn gpc_indices(&self, setting: SettingKey, variant: Variant) -> BTreeSet<usize> {
        self.faces
            .iter()
            .filter(|f| f.setting == setting && f.variant == variant)
            .map(|f| f.gpc_index)
            .collect()
    }

    pub fn settings(&self) -> BTreeSet<SettingKey> {
        self.faces.iter().map(|f| f.setting).collect()
    }
}

/// Exact l1 distance from `v` to a face.
pub fn face_distance(face: &IntersectionFace, v: &[Q]) -> Result<Q> {
    if v.len() != face.dim() {
        return Err(Error::Dimension {
            expected: face.dim(),
            got: v.len(),
        });
    }
    match &face.shape {
        FaceShape::H { .. } => distance_to_region(&face.rows(), v)?.0.into_result(),
        FaceShape::V { vertices } if vertices.len() == 1 => Ok(l1(&vertices[0], v)),
        FaceShape::V { vertices } => hull_distance(vertices, v),
    }
}

fn l1(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + (x - y).abs())
}

/// l1 distance to the convex hull of `vertices` via barycentric coordinates.
fn hull_distance(vertices: &[Vec<Q>], v: &[Q]) -> Result<Q> {
    let k = vertices.len();
    let d = v.len();
    let mut lp = StandardLp::new(k + 2 * d);
    for j in k..k + 2 * d {
        lp.cost[j] = q(1);
    }
    for j in 0..d {
        let mut row = vec![Q::zero(); k + 2 * d];
        for (m, vert) in vertices.iter().enumerate() {
            row[m] = vert[j].clone();
        }
        row[k + j] = q(-1);
        row[k + d + j] = q(1);
        lp.add_row(row, v[j].clone(), Relation::EqZero);
    }
    let mut row = vec![Q::zero(); k + 2 * d];
    for x in row.iter_mut().take(k) {
        *x = q(1);
    }
    lp.add_row(row, q(1), Relation::EqZero);
    let sol = lp.solve();
    match sol.status {
        LpStatus::Optimal => Ok(sol.value.expect("value")),
        _ => Err(Error::EmptyFace),
    }
}

/// Cheap exact lower bound on [`face_distance`]: the largest l1 distance to a
/// single violated face row, or the exact value for vertex faces.
pub fn face_distance_lower_bound(face: &IntersectionFace, v: &[Q]) -> Q {
    match &face.shape {
        FaceShape::V { vertices } if vertices.len() == 1 => l1(&vertices[0], v),
        FaceShape::V { .. } => Q::zero(),
        FaceShape::H { .. } => {
            let mut best = Q::zero();
            for c in face.rows() {
                let r = c.residual_unchecked(v);
                let viol = match c.relation {
                    Relation::EqZero => r.abs(),
                    Relation::GeqZero if r.is_negative() => -r,
                    Relation::GeqZero => continue,
                };
                let dist = viol / c.max_abs_kappa();
                if dist > best {
                    best = dist;
                }
            }
            best
        }
    }
}

/// Value of a Q-parameter or one of its flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QValue {
    Finite(f64),
    /// Pinned (facet distance 0) while off the face.
    Infinite,
    /// On the face: the ratio is undefined.
    TriviallyPinned,
    NotApplicable,
}

impl QValue {
    fn rank(&self) -> (u8, f64) {
        match self {
            QValue::NotApplicable => (0, 0.0),
            QValue::TriviallyPinned => (1, 0.0),
            QValue::Finite(x) => (2, *x),
            QValue::Infinite => (3, 0.0),
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, QValue::Finite(_) | QValue::Infinite)
    }

    /// Larger of two numeric values.
    fn max_numeric(self, other: QValue) -> QValue {
        let (a, b) = (self.rank(), other.rank());
        if (b.0, b.1) > (a.0, a.1) {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Finite(x) => write!(f, "{x:.12}"),
            QValue::Infinite => f.write_str("+inf"),
            QValue::TriviallyPinned => f.write_str("TRIVIALLY_PINNED"),
            QValue::NotApplicable => f.write_str("NOT_APPLICABLE"),
        }
    }
}

/// `Q_x` for one face.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceQ {
    pub face_id: usize,
    pub c: Q,
    pub face_distance: Q,
    /// `facet_distance / (c · face_distance)` when defined.
    pub ratio: Option<Q>,
    pub value: QValue,
}

/// `Q_x = −log10(facet_dist / (c · face_dist))` with the pinning flags.
pub fn q_aux(v: &[Q], facet_dist: &Q, face: &IntersectionFace) -> Result<FaceQ> {
    let face_distance = face_distance(face, v)?;
    let (ratio, value) = if face_distance.is_zero() {
        (None, QValue::TriviallyPinned)
    } else if facet_dist.is_zero() {
        (Some(Q::zero()), QValue::Infinite)
    } else {
        let r = facet_dist / (&face.c * &face_distance);
        let x = -to_f64(&r).log10();
        (Some(r), QValue::Finite(x))
    };
    Ok(FaceQ {
        face_id: face.face_id,
        c: face.c.clone(),
        face_distance,
        ratio,
        value,
    })
}

/// `Q^(i)` with its per-face breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct GpcQ {
    pub index: usize,
    pub facet_distance: Option<Q>,
    pub faces: Vec<FaceQ>,
    pub value: QValue,
}

/// Global Q with the per-GPC breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct QReport {
    pub variant: Variant,
    pub gpcs: Vec<GpcQ>,
    pub value: QValue,
    pub warnings: Vec<String>,
}

/// Evaluates Q-parameters for one setting and variant; facet distances are
/// computed once per GPC and shared by all faces.
pub struct QEvaluator<'a> {
    pub setting: Setting,
    pub variant: Variant,
    pub polytope: Polytope,
    table: &'a IntersectionTable,
}

impl<'a> QEvaluator<'a> {
    pub fn new(
        setting: &Setting,
        variant: Variant,
        catalog: &ConstraintCatalog,
        table: &'a IntersectionTable,
    ) -> Result<Self> {
        let key = setting.key();
        if table.gpc_indices(key, variant).is_empty() {
            return Err(Error::NotCovered(format!(
                "no intersection table for {key} variant {variant}"
            )));
        }
        Ok(QEvaluator {
            setting: *setting,
            variant,
            polytope: spectral_polytope(setting, catalog)?,
            table,
        })
    }

    fn facet(&self, i: usize) -> Option<&LinearConstraint> {
        self.polytope
            .gpc_facets()
            .into_iter()
            .find(|(j, _)| *j == i)
            .map(|(_, c)| c)
    }

    /// `Q^(i)`: maximum of the face values; any trivially pinned face makes the
    /// whole GPC trivially pinned.
    pub fn q_gpc(&self, v: &[Q], i: usize) -> Result<GpcQ> {
        let faces = self.table.faces_for(self.setting.key(), i, self.variant);
        let facet = match (faces.is_empty(), self.facet(i)) {
            (false, Some(f)) => f,
            _ => {
                return Ok(GpcQ {
                    index: i,
                    facet_distance: None,
                    faces: Vec::new(),
                    value: QValue::NotApplicable,
                })
            }
        };
        let facet_distance = facet_distance_l1(&self.polytope, facet, v)?.into_result()?;
        let mut out = Vec::with_capacity(faces.len());
        for f in faces {
            out.push(q_aux(v, &facet_distance, f)?);
        }
        let value = if out.iter().any(|f| f.value == QValue::TriviallyPinned) {
            QValue::TriviallyPinned
        } else {
            out.iter()
                .fold(QValue::NotApplicable, |acc, f| acc.max_numeric(f.value))
        };
        Ok(GpcQ {
            index: i,
            facet_distance: Some(facet_distance),
            faces: out,
            value,
        })
    }

    /// `Q = max_i Q^(i)` over the GPCs with numeric values; trivially pinned
    /// GPCs only determine the result when no GPC has a numeric value.
    pub fn q_global(&self, v: &[Q]) -> Result<QReport> {
        if v.len() != self.setting.d() {
            return Err(Error::Dimension {
                expected: self.setting.d(),
                got: v.len(),
            });
        }
        let mut warnings = Vec::new();
        if !contains(&self.polytope, v)? {
            warnings.push("vector lies outside the spectral polytope".to_string());
        }
        let mut gpcs = Vec::new();
        for i in self.table.gpc_indices(self.setting.key(), self.variant) {
            gpcs.push(self.q_gpc(v, i)?);
        }
        let mut value = gpcs
            .iter()
            .filter(|g| g.value.is_numeric())
            .fold(QValue::NotApplicable, |acc, g| acc.max_numeric(g.value));
        if value == QValue::NotApplicable && gpcs.iter().any(|g| g.value == QValue::TriviallyPinned) {
            value = QValue::TriviallyPinned;
        }
        Ok(QReport {
            variant: self.variant,
            gpcs,
            value,
            warnings,
        })
    }
}

/// `Q^(i)` with the builtin catalog and tables.
pub fn q_gpc(setting: &Setting, catalog: &ConstraintCatalog, v: &[Q], i: usize, variant: Variant) -> Result<GpcQ> {
    match QEvaluator::new(setting, variant, catalog, builtin_intersections()) {
        Ok(e) => e.q_gpc(v, i),
        Err(Error::NotCovered(_)) => Ok(GpcQ {
            index: i,
            facet_distance: None,
            faces: Vec::new(),
            value: QValue::NotApplicable,
        }),
        Err(e) => Err(e),
    }
}

/// Global Q with the builtin tables; uncovered settings give `NotApplicable`.
pub fn q_global(setting: &Setting, catalog: &ConstraintCatalog, v: &[Q], variant: Variant) -> Result<QReport> {
    match QEvaluator::new(setting, variant, catalog, builtin_intersections()) {
        Ok(e) => e.q_global(v),
        Err(Error::NotCovered(msg)) => Ok(QReport {
            variant,
            gpcs: Vec::new(),
            value: QValue::NotApplicable,
            warnings: vec![msg],
        }),
        Err(e) => Err(e),
    }
}

/// Samples points of `Σ^(p)↓` on the grid `1/den`: exponential weights scaled
/// to the normalization, sorted, rejected when outside the polytope. Every
/// second point is pulled towards the highest weight by a random factor so that
/// neighbourhoods of the vertex are covered as well.
pub fn sample_polytope(setting: &Setting, p: &Polytope, count: usize, seed: u64, den: i64) -> Result<Vec<Vec<Q>>> {
    let d = setting.d();
    let n = setting.n_particles as f64;
    let hw: Vec<f64> = (0..d)
        .map(|j| {
            if (j as u32) < setting.k() {
                2.0
            } else if (j as u32) < setting.k() + setting.two_s {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let limit = count.saturating_mul(2000).max(10_000);
    while out.len() < count {
        attempts += 1;
        if attempts > limit {
            return Err(Error::Invalid(format!(
                "sampling produced only {} of {count} points in {attempts} attempts",
                out.len()
            )));
        }
        let w: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = w.iter().sum();
        let mut x: Vec<f64> = w.iter().map(|y| y / total * n).collect();
        if x.iter().any(|&y| y > 2.0) {
            continue;
        }
        x.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        if out.len() % 2 == 1 {
            let t: f64 = rng.gen::<f64>().powi(2);
            for (xj, hj) in x.iter_mut().zip(&hw) {
                *xj = hj + t * (*xj - hj);
            }
        }
        let mut v: Vec<Q> = x.iter().map(|&y| round_to(y, den)).collect();
        let sum: Q = v.iter().sum();
        v[0] = &v[0] + (q(setting.n_particles as i64) - sum);
        if contains(p, &v)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Outcome of [`verify_constant`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantCheck {
    pub stored: Q,
    pub empirical_max: f64,
    pub samples: usize,
    /// Sampled points whose exact ratio exceeds the stored constant.
    pub violations: usize,
}

/// Empirical maximum of `dist(λ, F_i) / dist(λ, M_x)` over sampled points of
/// `Σ^(p)↓`.
pub fn verify_constant(
    setting: &Setting,
    catalog: &ConstraintCatalog,
    table: &IntersectionTable,
    i: usize,
    face_id: usize,
    variant: Variant,
    samples: usize,
    seed: u64,
) -> Result<ConstantCheck> {
    let faces = table.faces_for(setting.key(), i, variant);
    let face = faces
        .iter()
        .find(|f| f.face_id == face_id)
        .ok_or_else(|| Error::NotCovered(format!("no face {face_id} for GPC {i}")))?;
    let eval = QEvaluator::new(setting, variant, catalog, table)?;
    let facet = eval
        .facet(i)
        .ok_or_else(|| Error::NotCovered(format!("GPC {i} is not an inequality")))?;
    let points = sample_polytope(setting, &eval.polytope, samples, seed, 1_000_000)?;
    let mut best = 0.0f64;
    let mut violations = 0;
    for v in &points {
        let fd = match facet_distance_l1(&eval.polytope, facet, v)? {
            Distance::Value(x) => x,
            Distance::EmptyFace => return Err(Error::EmptyFace),
        };
        let md = face_distance(face, v)?;
        if md.is_zero() {
            continue;
        }
        let ratio = &fd / &md;
        if ratio > face.c {
            violations += 1;
        }
        best = best.max(to_f64(&ratio));
    }
    Ok(ConstantCheck {
        stored: face.c.clone(),
        empirical_max: best,
        samples: points.len(),
        violations,
    })
}

/// Consistency checks of one face against its setting: nonempty, contained in
/// the GPC hyperplane and in `Σ^(p)↓`.
pub fn check_face(face: &IntersectionFace, catalog: &ConstraintCatalog) -> Result<()> {
    let setting = face.setting.setting()?;
    let p = spectral_polytope(&setting, catalog)?;
    let facet = p
        .gpc_facets()
        .into_iter()
        .find(|(j, _)| *j == face.gpc_index)
        .map(|(_, c)| c.clone())
        .ok_or_else(|| Error::Invalid(format!("GPC {} is not an inequality of {}", face.gpc_index, face.setting)))?;
    let describe = |what: &str| {
        Error::Invalid(format!(
            "face {} of GPC {} ({}, variant {}): {what}",
            face.face_id, face.gpc_index, face.setting, face.variant
        ))
    };
    match &face.shape {
        FaceShape::V { vertices } => {
            for v in vertices {
                if !facet.residual_unchecked(v).is_zero() {
                    return Err(describe("vertex off the GPC hyperplane"));
                }
                if !contains(&p, v)? {
                    return Err(describe("vertex outside the spectral polytope"));
                }
            }
        }
        FaceShape::H { .. } => {
            let rows: Vec<LinearConstraint> = face.rows().into_iter().cloned().collect();
            let mut targets: Vec<(LinearConstraint, bool)> = vec![(facet.clone(), true)];
            targets.extend(p.constraints().map(|c| (c.clone(), c.is_equality())));
            for (c, both) in targets {
                let min = crate::geometry::solve_lp(&c.kappa, &rows);
                if min.status == LpStatus::Infeasible {
                    return Err(describe("empty"));
                }
                let lo = min.value.map(|x| x + &c.kappa0);
                if lo.as_ref().map_or(true, |x| x.is_negative()) {
                    return Err(describe(&format!("violates {}", c)));
                }
                if both {
                    let neg: Vec<Q> = c.kappa.iter().map(|k| -k).collect();
                    let max = crate::geometry::solve_lp(&neg, &rows);
                    let hi = max.value.map(|x| c.kappa0.clone() - x);
                    if hi.map_or(true, |x| x.is_positive()) {
                        return Err(describe(&format!("not contained in {}", c)));
                    }
                }
            }
        }
    }
    Ok(())
}
