//! Exact two-phase tableau simplex with Bland's pivoting rule.
//!
//! Problems are first attempted over `Ratio<i128>` with checked arithmetic and
//! transparently re-solved over arbitrary-precision rationals on overflow, so
//! results are always exact.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::constraint::{LinearConstraint, Relation};
use crate::rational::Q;

/// Outcome class of a linear program.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve_lp`]: optimum value and witness point when optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: Option<Q>,
    pub point: Option<Vec<Q>>,
}

/// Minimizes `objective · x` over free variables `x` subject to `constraints`
/// (each `κ0 + κ·x ≥ 0` or `= 0`).
pub fn solve_lp(objective: &[Q], constraints: &[LinearConstraint]) -> LpSolution {
    let n = objective.len();
    let mut lp = StandardLp::new(2 * n);
    for (j, c) in objective.iter().enumerate() {
        lp.cost[j] = c.clone();
        lp.cost[n + j] = -c.clone();
    }
    for c in constraints {
        assert_eq!(c.dim(), n, "constraint dimension must match the objective");
        let mut row: Vec<Q> = c.kappa.clone();
        row.extend(c.kappa.iter().map(|k| -k));
        lp.add_row(row, -c.kappa0.clone(), c.relation);
    }
    let out = lp.solve();
    match out.status {
        LpStatus::Optimal => {
            let y = out.point.expect("optimal point");
            let x: Vec<Q> = (0..n).map(|j| &y[j] - &y[n + j]).collect();
            LpSolution {
                status: LpStatus::Optimal,
                value: out.value,
                point: Some(x),
            }
        }
        s => LpSolution {
            status: s,
            value: None,
            point: None,
        },
    }
}

/// `min cost·y` subject to rows `a·y (≥|=) b` and `y ≥ 0`.
#[derive(Debug, Clone)]
pub(crate) struct StandardLp {
    pub n_vars: usize,
    pub cost: Vec<Q>,
    pub rows: Vec<(Vec<Q>, Q, Relation)>,
}

impl StandardLp {
    pub fn new(n_vars: usize) -> Self {
        StandardLp {
            n_vars,
            cost: vec![<Q as Zero>::zero(); n_vars],
            rows: Vec::new(),
        }
    }

    /// Adds `a·y ≥ b` (`GeqZero`) or `a·y = b` (`EqZero`).
    pub fn add_row(&mut self, a: Vec<Q>, b: Q, relation: Relation) {
        debug_assert_eq!(a.len(), self.n_vars);
        self.rows.push((a, b, relation));
    }

    pub fn solve(&self) -> LpSolution {
        if let Some(small) = self.to_small() {
            if let Ok(sol) = simplex::<Small>(&small) {
                return sol.into_big();
            }
        }
        simplex::<Q>(&self.convert())
            .unwrap_or_else(|_| unreachable!("arbitrary precision arithmetic cannot overflow"))
            .into_big()
    }

    fn convert(&self) -> Problem<Q> {
        Problem {
            n_vars: self.n_vars,
            cost: self.cost.clone(),
            rows: self.rows.clone(),
        }
    }

    fn to_small(&self) -> Option<Problem<Small>> {
        let conv = |x: &Q| Small::from_big(x);
        Some(Problem {
            n_vars: self.n_vars,
            cost: self.cost.iter().map(conv).collect::<Option<_>>()?,
            rows: self
                .rows
                .iter()
                .map(|(a, b, r)| Some((a.iter().map(conv).collect::<Option<Vec<_>>>()?, conv(b)?, *r)))
                .collect::<Option<_>>()?,
        })
    }
}

/// Field operations that may report overflow.
trait Field: Clone + PartialOrd + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
    fn to_big(&self) -> Q;
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn to_big(&self) -> Q {
        self.clone()
    }
}

type Small = Ratio<i128>;

trait FromBig: Sized {
    fn from_big(x: &Q) -> Option<Self>;
}

impl FromBig for Small {
    fn from_big(x: &Q) -> Option<Self> {
        // Keep headroom so that products of two entries are representable.
        let n = x.numer().to_i128()?;
        let d = x.denom().to_i128()?;
        if n.unsigned_abs() > (1u128 << 100) || d > (1i128 << 100) {
            return None;
        }
        Some(Ratio::new_raw(n, d))
    }
}

impl Field for Small {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        *self.numer() == 0
    }
    fn is_pos(&self) -> bool {
        *self.numer() > 0
    }
    fn is_neg(&self) -> bool {
        *self.numer() < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn neg(&self) -> Self {
        Ratio::new_raw(-*self.numer(), *self.denom())
    }
    fn to_big(&self) -> Q {
        Q::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

struct Problem<F> {
    n_vars: usize,
    cost: Vec<F>,
    rows: Vec<(Vec<F>, F, Relation)>,
}

struct Overflow;

struct Solved<F> {
    status: LpStatus,
    value: Option<F>,
    point: Option<Vec<F>>,
}

impl<F: Field> Solved<F> {
    fn into_big(self) -> LpSolution {
        LpSolution {
            status: self.status,
            value: self.value.map(|v| v.to_big()),
            point: self.point.map(|p| p.iter().map(Field::to_big).collect()),
        }
    }
}

macro_rules! ck {
    ($e:expr) => {
        $e.ok_or(Overflow)?
    };
}

/// Dense tableau: `rows` constraint rows plus an objective row, each of
/// `width` columns followed by the right-hand side.
struct Tableau<F> {
    m: Vec<Vec<F>>,
    obj: Vec<F>,
    basis: Vec<usize>,
    width: usize,
}

impl<F: Field> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Overflow> {
        let p = self.m[r][c].clone();
        if !(p == F::one()) {
            for x in self.m[r].iter_mut() {
                if !x.is_zero() {
                    *x = ck!(x.div(&p));
                }
            }
        }
        let pivot_row = self.m[r].clone();
        let nz: Vec<usize> = (0..=self.width).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let t = ck!(f.mul(&pivot_row[j]));
                row[j] = ck!(row[j].sub(&t));
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for &j in &nz {
                let t = ck!(f.mul(&pivot_row[j]));
                self.obj[j] = ck!(self.obj[j].sub(&t));
            }
        }
        self.basis[r] = c;
        Ok(())
    }

    /// Runs Bland's rule over columns `< limit`. Returns false when unbounded.
    fn optimize(&mut self, limit: usize) -> Result<bool, Overflow> {
        loop {
            let Some(c) = (0..limit).find(|&j| self.obj[j].is_neg()) else {
                return Ok(true);
            };
            let mut best: Option<(usize, F)> = None;
            for (i, row) in self.m.iter().enumerate() {
                if !row[c].is_pos() {
                    continue;
                }
                let ratio = ck!(row[self.width].div(&row[c]));
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return Ok(false);
            };
            self.pivot(r, c)?;
        }
    }
}

fn simplex<F: Field>(p: &Problem<F>) -> Result<Solved<F>, Overflow> {
    let n = p.n_vars;
    let n_slack = p.rows.iter().filter(|r| r.2 == Relation::GeqZero).count();
    // Columns: originals, slacks, then artificials.
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(p.rows.len());
    let mut natural_basis: Vec<Option<usize>> = Vec::with_capacity(p.rows.len());
    let mut slack_col = n;
    for (a, b, rel) in &p.rows {
        let mut row: Vec<F> = a.clone();
        row.resize(n + n_slack, F::zero());
        let mut rhs = b.clone();
        let mut own_slack = None;
        if *rel == Relation::GeqZero {
            // a·y − s = b
            row[slack_col] = F::one().neg();
            own_slack = Some(slack_col);
            slack_col += 1;
        }
        if rhs.is_neg() {
            for x in row.iter_mut() {
                *x = x.neg();
            }
            rhs = rhs.neg();
        }
        // A slack with coefficient +1 can start in the basis.
        let start = own_slack.filter(|&s| row[s] == F::one());
        natural_basis.push(start);
        row.push(rhs);
        rows.push(row);
    }
    let n_art = natural_basis.iter().filter(|b| b.is_none()).count();
    let width = n + n_slack + n_art;
    let mut basis = Vec::with_capacity(rows.len());
    let mut art_col = n + n_slack;
    for (row, nb) in rows.iter_mut().zip(&natural_basis) {
        let rhs = row.pop().expect("rhs");
        row.resize(width, F::zero());
        match nb {
            Some(s) => basis.push(*s),
            None => {
                row[art_col] = F::one();
                basis.push(art_col);
                art_col += 1;
            }
        }
        row.push(rhs);
    }
    // Phase 1 objective: sum of artificials, expressed in reduced form.
    let mut obj = vec![F::zero(); width + 1];
    for (row, &b) in rows.iter().zip(&basis) {
        if b >= n + n_slack {
            for j in 0..=width {
                if j < n + n_slack || j == width {
                    obj[j] = ck!(obj[j].sub(&row[j]));
                }
            }
        }
    }
    let mut t = Tableau {
        m: rows,
        obj,
        basis,
        width,
    };
    if n_art > 0 {
        t.optimize(width)?;
        // Objective row holds −(sum of artificials).
        if !t.obj[width].is_zero() {
            return Ok(Solved {
                status: LpStatus::Infeasible,
                value: None,
                point: None,
            });
        }
        // Drive artificial variables out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.m.len() {
            if t.basis[i] >= n + n_slack {
                if let Some(c) = (0..n + n_slack).find(|&j| !t.m[i][j].is_zero()) {
                    t.pivot(i, c)?;
                    i += 1;
                } else {
                    t.m.remove(i);
                    t.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
        for row in t.m.iter_mut() {
            let rhs = row[width].clone();
            row.truncate(n + n_slack);
            row.push(rhs);
        }
        t.width = n + n_slack;
    }
    let width = t.width;
    // Phase 2 reduced costs.
    let mut obj = vec![F::zero(); width + 1];
    obj[..n].clone_from_slice(&p.cost[..n]);
    for (row, &b) in t.m.iter().zip(&t.basis) {
        let cb = if b < n { p.cost[b].clone() } else { F::zero() };
        if cb.is_zero() {
            continue;
        }
        for j in 0..=width {
            if !row[j].is_zero() {
                let v = ck!(cb.mul(&row[j]));
                obj[j] = ck!(obj[j].sub(&v));
            }
        }
    }
    t.obj = obj;
    if !t.optimize(width)? {
        return Ok(Solved {
            status: LpStatus::Unbounded,
            value: None,
            point: None,
        });
    }
    let mut y = vec![F::zero(); n];
    for (row, &b) in t.m.iter().zip(&t.basis) {
        if b < n {
            y[b] = row[width].clone();
        }
    }
    let mut value = F::zero();
    for (c, v) in p.cost.iter().zip(&y) {
        if !c.is_zero() && !v.is_zero() {
            let t = ck!(c.mul(v));
            value = ck!(value.add(&t));
        }
    }
    Ok(Solved {
        status: LpStatus::Optimal,
        value: Some(value),
        point: Some(y),
    })
}
