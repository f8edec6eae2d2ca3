//! Truncation of occupation vectors to `d'` orbitals and the resulting bounds
//! on the boundary distance in the full setting.

use num_traits::{One, Signed, Zero};

use crate::catalog::ConstraintCatalog;
use crate::constraint::LinearConstraint;
use crate::error::{Error, Result};
use crate::geometry::{boundary_distance, spectral_polytope, OccupationVector};
use crate::rational::Q;
use crate::setting::Setting;

/// A truncated vector and its truncation error.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub vector: OccupationVector,
    pub epsilon_prime: Q,
    /// `perm[new] = old` when the input had to be sorted first.
    pub permutation: Option<Vec<usize>>,
}

/// Keeps the `d'` largest entries; `ε' = Σv − Σ_{j≤d'} v_j`.
pub fn truncate(v: &OccupationVector, d_prime: usize) -> Result<Truncated> {
    if d_prime > v.len() {
        return Err(Error::Invalid(format!(
            "cannot truncate {} entries to d' = {d_prime}",
            v.len()
        )));
    }
    let (sorted, permutation) = if v.sorted_desc {
        (v.clone(), None)
    } else {
        let (s, p) = v.sorted();
        (s, Some(p))
    };
    let total = sorted.sum();
    let kept: Vec<Q> = sorted.values[..d_prime].to_vec();
    let kept_sum = kept.iter().fold(Q::zero(), |a, b| a + b);
    Ok(Truncated {
        vector: OccupationVector {
            values: kept,
            space: v.space,
            sorted_desc: true,
        },
        epsilon_prime: total - kept_sum,
        permutation,
    })
}

/// `|D'(v') + α ε'| / max_j |κ_j − α|`; `None` when the denominator vanishes.
pub fn rotated_hyperplane_distance(gpc: &LinearConstraint, v_prime: &[Q], eps_prime: &Q, alpha: &Q) -> Result<Option<Q>> {
    let r = gpc.residual(v_prime)?;
    let den = gpc
        .kappa
        .iter()
        .map(|k| (k - alpha).abs())
        .max()
        .unwrap_or_else(Q::zero);
    if den.is_zero() {
        return Ok(None);
    }
    Ok(Some((r + alpha * eps_prime).abs() / den))
}

/// Maximized rotated distance minus `ε'`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    /// `max(c · max_α dist − ε', 0)`.
    pub value: Q,
    pub alpha_star: Q,
    /// `max_α dist` before scaling and subtracting.
    pub max_distance: Q,
}

/// Exact maximization of the rotated hyperplane distance over `α`.
///
/// The objective is linear-fractional between the breakpoints of numerator and
/// denominator, hence monotone there; its supremum is attained at a breakpoint
/// or approached at `|α| → ∞`, where it tends to `ε'`.
pub fn lower_bound(gpc: &LinearConstraint, v_prime: &[Q], eps_prime: &Q) -> Result<LowerBound> {
    lower_bound_scaled(gpc, v_prime, eps_prime, &Q::one())
}

/// [`lower_bound`] with the hyperplane constant `c` of the full setting.
pub fn lower_bound_scaled(gpc: &LinearConstraint, v_prime: &[Q], eps_prime: &Q, c: &Q) -> Result<LowerBound> {
    let r = gpc.residual(v_prime)?;
    let mut candidates: Vec<Q> = gpc.kappa.clone();
    let kmax = gpc.kappa.iter().max().cloned().unwrap_or_else(Q::zero);
    let kmin = gpc.kappa.iter().min().cloned().unwrap_or_else(Q::zero);
    candidates.push((&kmax + &kmin) / Q::from_integer(2.into()));
    for a in &gpc.kappa {
        for b in &gpc.kappa {
            if a < b {
                candidates.push((a + b) / Q::from_integer(2.into()));
            }
        }
    }
    if !eps_prime.is_zero() {
        candidates.push(-&r / eps_prime);
    }
    candidates.sort();
    candidates.dedup();
    let mut best: Option<(Q, Q)> = None;
    for alpha in candidates {
        if let Some(x) = rotated_hyperplane_distance(gpc, v_prime, eps_prime, &alpha)? {
            if best.as_ref().map_or(true, |(b, _)| x > *b) {
                best = Some((x, alpha));
            }
        }
    }
    let (mut max_distance, mut alpha_star) = best.unwrap_or_else(|| (Q::zero(), Q::zero()));
    // The limit |α| → ∞ is never attained; it only matters when it exceeds all
    // breakpoints, in which case the bound is c·ε' − ε' ≤ 0 anyway.
    if eps_prime.abs() > max_distance {
        max_distance = eps_prime.abs();
        alpha_star = Q::zero();
    }
    let mut value = c * &max_distance - eps_prime;
    if value.is_negative() {
        value = Q::zero();
    }
    Ok(LowerBound {
        value,
        alpha_star,
        max_distance,
    })
}

/// Bounds on the boundary distance of a full-setting vector from its truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationResult {
    pub d_prime: usize,
    pub truncated: OccupationVector,
    pub epsilon_prime: Q,
    pub f_min_prime: Q,
    /// GPC index achieving `F'_min` (smallest on ties).
    pub achieving_gpc: usize,
    pub lower_bound: Q,
    /// GPC index achieving `F_−` and its maximizing rotation.
    pub lower_gpc: usize,
    pub alpha_star: Q,
    pub upper_bound: Q,
}

/// `F_+ = F'_min + ε'` and `F_− = min_i max(c·max_α dist_i − ε', 0)` over the
/// GPCs of the truncated setting.
pub fn bounds(v: &OccupationVector, setting_full: &Setting, d_prime: usize, catalog: &ConstraintCatalog) -> Result<TruncationResult> {
    bounds_with_constant(v, setting_full, d_prime, catalog, &Q::one())
}

pub fn bounds_with_constant(
    v: &OccupationVector,
    setting_full: &Setting,
    d_prime: usize,
    catalog: &ConstraintCatalog,
    c: &Q,
) -> Result<TruncationResult> {
    if v.len() != setting_full.d() {
        return Err(Error::Dimension {
            expected: setting_full.d(),
            got: v.len(),
        });
    }
    let t = truncate(v, d_prime)?;
    let reduced = Setting::new(
        setting_full.n_particles,
        d_prime as u32,
        setting_full.two_s,
        setting_full.two_m,
    )?;
    let p = spectral_polytope(&reduced, catalog)?;
    let n = Q::from_integer(setting_full.n_particles.into());
    let eps = &n - t.vector.sum();
    let (f_min_prime, achieving_gpc) = boundary_distance(&p, &t.vector)?;
    let mut lower: Option<(Q, usize, Q)> = None;
    for (i, gpc) in p.gpc_facets() {
        let lb = lower_bound_scaled(gpc, &t.vector, &eps, c)?;
        if lower.as_ref().map_or(true, |(b, _, _)| lb.value < *b) {
            lower = Some((lb.value, i, lb.alpha_star));
        }
    }
    let (lower_bound, lower_gpc, alpha_star) = lower.expect("at least one facet");
    Ok(TruncationResult {
        d_prime,
        upper_bound: &f_min_prime + &eps,
        truncated: t.vector,
        epsilon_prime: eps,
        f_min_prime,
        achieving_gpc,
        lower_bound,
        lower_gpc,
        alpha_star,
    })
}
