//! Affine constraints `κ0 + Σ κ_j λ_j (≥ 0 | = 0)`.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fraction_string, Q};

/// Whether the affine functional must be non-negative or vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    GeqZero,
    EqZero,
}

/// Direction of a raw table row `a·λ {≤, ≥, =} b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Leq,
    Geq,
    Eq,
}

impl Sense {
    pub fn keyword(self) -> &'static str {
        match self {
            Sense::Leq => "leq",
            Sense::Geq => "geq",
            Sense::Eq => "eq",
        }
    }
}

/// Origin of a constraint inside a polytope description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// A generalized Pauli constraint from a table.
    Gpc,
    /// `λ_i − λ_{i+1} ≥ 0` or `λ_d ≥ 0`.
    Ordering,
    /// `2 − λ_1 ≥ 0` (or `1 − λ_1 ≥ 0` for spin orbitals).
    Box,
    /// `Σ λ = N`.
    Normalization,
    /// Spin-adapted Pauli family `Σ_{m≤K+j} λ_m ≤ N − 2S + j`.
    SpinPauli,
    /// Face description rows (intersection tables).
    Face,
}

/// The functional `κ0 + κ·λ` together with its relation to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearConstraint {
    pub kappa0: Q,
    pub kappa: Vec<Q>,
    pub relation: Relation,
    pub kind: ConstraintKind,
    pub label: String,
}

impl LinearConstraint {
    pub fn geq(kappa0: Q, kappa: Vec<Q>, kind: ConstraintKind) -> Self {
        LinearConstraint {
            kappa0,
            kappa,
            relation: Relation::GeqZero,
            kind,
            label: String::new(),
        }
    }

    pub fn eq(kappa0: Q, kappa: Vec<Q>, kind: ConstraintKind) -> Self {
        LinearConstraint {
            kappa0,
            kappa,
            relation: Relation::EqZero,
            kind,
            label: String::new(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_kind(mut self, kind: ConstraintKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn dim(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_equality(&self) -> bool {
        self.relation == Relation::EqZero
    }

    pub fn has_zero_normal(&self) -> bool {
        self.kappa.iter().all(Zero::is_zero)
    }

    /// `max_j |κ_j|`, the dual norm of the normal vector under l1.
    pub fn max_abs_kappa(&self) -> Q {
        self.kappa
            .iter()
            .map(|k| k.abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Exact value `κ0 + κ·v`.
    pub fn residual(&self, v: &[Q]) -> Result<Q> {
        if v.len() != self.kappa.len() {
            return Err(Error::Dimension {
                expected: self.kappa.len(),
                got: v.len(),
            });
        }
        Ok(self.residual_unchecked(v))
    }

    pub(crate) fn residual_unchecked(&self, v: &[Q]) -> Q {
        let mut acc = self.kappa0.clone();
        for (k, x) in self.kappa.iter().zip(v) {
            if !k.is_zero() {
                acc += k * x;
            }
        }
        acc
    }

    /// Whether `v` satisfies the constraint exactly.
    pub fn holds(&self, v: &[Q]) -> bool {
        let r = self.residual_unchecked(v);
        match self.relation {
            Relation::GeqZero => !r.is_negative(),
            Relation::EqZero => r.is_zero(),
        }
    }

    /// Multiplies `(κ0, κ)` by `factor`.
    pub fn scaled(&self, factor: &Q) -> Self {
        LinearConstraint {
            kappa0: &self.kappa0 * factor,
            kappa: self.kappa.iter().map(|k| k * factor).collect(),
            ..self.clone()
        }
    }

    /// Extends κ with zeros up to dimension `d`.
    pub fn padded(&self, d: usize) -> Self {
        let mut kappa = self.kappa.clone();
        kappa.resize(d, Q::zero());
        LinearConstraint {
            kappa,
            ..self.clone()
        }
    }

    /// True when `other` describes the same half-space (or hyperplane) up to a
    /// positive factor.
    pub fn same_up_to_scale(&self, other: &LinearConstraint) -> bool {
        if self.dim() != other.dim() || self.relation != other.relation {
            return false;
        }
        let mine = std::iter::once(&self.kappa0).chain(&self.kappa);
        let theirs = std::iter::once(&other.kappa0).chain(&other.kappa);
        let mut ratio: Option<Q> = None;
        for (a, b) in mine.zip(theirs) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = b / a;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(x) if *x != r => return false,
                        _ => {}
                    }
                }
            }
        }
        match ratio {
            Some(r) => r.is_positive() || self.relation == Relation::EqZero,
            None => true,
        }
    }

    /// The row `a·λ {≤,≥,=} b` that normalizes back to this constraint.
    pub fn as_table_row(&self) -> (Vec<Q>, Q, Sense) {
        match self.relation {
            Relation::GeqZero => (self.kappa.iter().map(|k| -k).collect(), self.kappa0.clone(), Sense::Leq),
            Relation::EqZero => (self.kappa.clone(), -self.kappa0.clone(), Sense::Eq),
        }
    }
}

impl fmt::Display for LinearConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut text = fraction_string(&self.kappa0);
        for (j, k) in self.kappa.iter().enumerate() {
            if k.is_zero() {
                continue;
            }
            let sign = if k.is_negative() { '-' } else { '+' };
            let mag = k.abs();
            if mag == Q::from_integer(1.into()) {
                text.push_str(&format!(" {sign} λ{}", j + 1));
            } else {
                text.push_str(&format!(" {sign} {}λ{}", fraction_string(&mag), j + 1));
            }
        }
        let rel = match self.relation {
            Relation::GeqZero => "≥ 0",
            Relation::EqZero => "= 0",
        };
        write!(f, "{text} {rel}")
    }
}

/// Converts a table row `a·λ {≤,≥,=} b` into `κ0 + κ·λ (≥ 0 | = 0)`.
pub fn normalize_inequality(coeffs: &[Q], bound: &Q, sense: Sense) -> LinearConstraint {
    match sense {
        Sense::Leq => LinearConstraint::geq(
            bound.clone(),
            coeffs.iter().map(|a| -a).collect(),
            ConstraintKind::Gpc,
        ),
        Sense::Geq => LinearConstraint::geq(-bound.clone(), coeffs.to_vec(), ConstraintKind::Gpc),
        Sense::Eq => LinearConstraint::eq(-bound.clone(), coeffs.to_vec(), ConstraintKind::Gpc),
    }
}

/// Distance metric tag; only l1 is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    L1,
}
