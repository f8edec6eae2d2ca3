//! The Borland–Dennis setting `N = 3, d = 3, S = M = 1/2`.

use std::sync::Arc;

use nalgebra::{Complex, DVector};
use num_traits::{One, Signed, Zero};

use super::{
    natural_occupations, ordered_determinant, spin_orbital, spin_orbital_1rdm, DeterminantSpace, SectorState, C64,
};
use crate::error::{Error, Result};
use crate::rational::{q, qf, to_f64, Q};
use crate::setting::Setting;

pub fn bd_setting() -> Setting {
    Setting::highest(3, 3, 1).expect("valid setting")
}

/// A single configuration `f†_{p1} f†_{p2} … |0⟩` given as `(orbital, spin up)`
/// pairs (0-based orbitals) in the listed order.
pub fn configuration(setting: &Setting, orbitals: &[(usize, bool)]) -> Result<SectorState> {
    let space = Arc::new(DeterminantSpace::new(setting)?);
    let d = setting.d();
    if orbitals.iter().any(|&(j, _)| j >= d) {
        return Err(Error::Invalid(format!("orbital index out of range for d = {d}")));
    }
    let ps: Vec<usize> = orbitals.iter().map(|&(j, up)| spin_orbital(d, j, up)).collect();
    let (mask, sign) = ordered_determinant(&ps).ok_or_else(|| Error::Invalid("repeated spin orbital".into()))?;
    let pos = space
        .position(mask)
        .ok_or_else(|| Error::Invalid("configuration lies outside the sector".into()))?;
    let mut amps = DVector::from_element(space.len(), Complex::new(0.0, 0.0));
    amps[pos] = Complex::from(sign);
    SectorState::from_amplitudes(space, amps)
}

const I1: [(usize, bool); 3] = [(0, true), (0, false), (1, true)];
const I2: [(usize, bool); 3] = [(0, true), (2, true), (2, false)];
const I3: [(usize, bool); 3] = [(1, true), (1, false), (2, true)];
const I4: [(usize, bool); 3] = [(0, true), (1, true), (1, false)];
const I5: [(usize, bool); 3] = [(1, true), (2, true), (2, false)];
const I6: [(usize, bool); 3] = [(0, true), (0, false), (2, true)];

/// Weights `(2/3 − ε², ε², 1/3)` of `|I1⟩, |I2⟩, |I3⟩`.
fn weights(eps: &Q) -> Result<[Q; 3]> {
    let e2 = eps * eps;
    let p1 = qf(2, 3) - &e2;
    if !p1.is_positive() {
        return Err(Error::Invalid(format!("need ε² < 2/3, got ε = {eps}")));
    }
    Ok([p1, e2, qf(1, 3)])
}

/// `√(2/3 − ε²)|I1⟩ + ε|I2⟩ + √(1/3)|I3⟩`, optionally with `O(ε²)` admixtures of
/// `|I4⟩, |I5⟩, |I6⟩` and the first `(1,1,1)` state.
pub fn borland_dennis_state(eps: &Q, include_generic: bool) -> Result<SectorState> {
    let s = bd_setting();
    let [p1, _, p3] = weights(eps)?;
    let e = to_f64(eps);
    let mut terms: Vec<(SectorState, f64)> = vec![
        (configuration(&s, &I1)?, to_f64(&p1).sqrt()),
        (configuration(&s, &I2)?, e),
        (configuration(&s, &I3)?, to_f64(&p3).sqrt()),
    ];
    if include_generic {
        let g = e * e / 2.0;
        for c in [I4, I5, I6] {
            terms.push((configuration(&s, &c)?, g));
        }
        let a = configuration(&s, &[(0, true), (1, true), (2, false)])?;
        let b = configuration(&s, &[(0, true), (1, false), (2, true)])?;
        terms.push((a, g / 2f64.sqrt()));
        terms.push((b, -g / 2f64.sqrt()));
    }
    let space = terms[0].0.space.clone();
    let mut amps = DVector::from_element(space.len(), Complex::new(0.0, 0.0));
    for (st, c) in &terms {
        amps += &st.amplitudes * Complex::from(*c);
    }
    SectorState::from_amplitudes(space, amps)
}

/// Exact residuals of the three-term state.
#[derive(Debug, Clone, PartialEq)]
pub struct BdResidualTable {
    pub epsilon: Q,
    /// Sorted spin-orbital occupations `λ1 ≥ … ≥ λ6`.
    pub spin_orbital: Vec<Q>,
    /// Sorted orbital occupations `λ^(l)`.
    pub orbital: Vec<Q>,
    /// `λ5 + λ6 − λ4`.
    pub d: Q,
    /// `3 − λ1 − λ2 − λ3`.
    pub x1: Q,
    /// `1 − λ1`.
    pub x2: Q,
    /// `1 − λ1^(l) + λ2^(l)`.
    pub d1: Q,
    /// `1 − λ2^(l) + λ3^(l)`.
    pub d2: Q,
    /// `2 − λ1^(l)`.
    pub x1_l: Q,
    /// `3 − λ1^(l) − λ2^(l)`.
    pub x2_l: Q,
}

impl BdResidualTable {
    /// `(name, value)` rows in display order.
    pub fn rows(&self) -> Vec<(&'static str, &Q)> {
        vec![
            ("D", &self.d),
            ("X1", &self.x1),
            ("X2", &self.x2),
            ("D1", &self.d1),
            ("D2", &self.d2),
            ("X1_l", &self.x1_l),
            ("X2_l", &self.x2_l),
        ]
    }
}

/// The 1RDM of the three-term state is diagonal because the configurations
/// pairwise differ in two spin orbitals, so occupations are weighted counts.
pub fn bd_residual_table(eps: &Q) -> Result<BdResidualTable> {
    let p = weights(eps)?;
    let d = 3;
    let mut so = vec![Q::zero(); 2 * d];
    for (conf, w) in [I1, I2, I3].iter().zip(&p) {
        for &(j, up) in conf {
            so[spin_orbital(d, j, up)] += w;
        }
    }
    let mut orb: Vec<Q> = (0..d).map(|j| &so[j] + &so[d + j]).collect();
    so.sort_by(|a, b| b.cmp(a));
    orb.sort_by(|a, b| b.cmp(a));
    let one = Q::one();
    Ok(BdResidualTable {
        epsilon: eps.clone(),
        d: &so[4] + &so[5] - &so[3],
        x1: q(3) - &so[0] - &so[1] - &so[2],
        x2: &one - &so[0],
        d1: &one - &orb[0] + &orb[1],
        d2: &one - &orb[1] + &orb[2],
        x1_l: q(2) - &orb[0],
        x2_l: q(3) - &orb[0] - &orb[1],
        spin_orbital: so,
        orbital: orb,
    })
}

/// Triangle test for `e^{iφ1}√λ̃1⟨3|1̃⟩ − e^{iφ2}√λ̃2⟨2|2̃⟩ + √λ̃3⟨1|3̃⟩ = 0`:
/// three complex numbers with free relative phases can sum to zero exactly
/// when their moduli satisfy the triangle inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BdOrbitalCondition {
    /// Moduli of the three terms.
    pub terms: [f64; 3],
    /// `min` over the three triangle inequalities; `≥ 0` when satisfiable.
    pub slack: f64,
    pub spin_up: [f64; 3],
    pub spin_down: [f64; 3],
}

impl BdOrbitalCondition {
    pub fn satisfied(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// Evaluates the natural spin-orbital condition on a state of the setting.
///
/// Up orbitals `|j⟩` and down orbitals `|j̃⟩` are the natural orbitals of the
/// two spin blocks, both ordered by decreasing occupation.
pub fn bd_orbital_condition(psi: &SectorState) -> Result<BdOrbitalCondition> {
    if psi.setting != bd_setting() {
        return Err(Error::Invalid(format!("expected {}, got {}", bd_setting(), psi.setting)));
    }
    let g = spin_orbital_1rdm(psi);
    let up = natural_occupations(&g.view((0, 0), (3, 3)).into_owned())?;
    let down = natural_occupations(&g.view((3, 3), (3, 3)).into_owned())?;
    let overlap = |j: usize, k: usize| -> f64 {
        let mut acc: C64 = Complex::new(0.0, 0.0);
        for r in 0..3 {
            acc += up.vectors[(r, j)].conj() * down.vectors[(r, k)];
        }
        acc.norm()
    };
    let lam = |k: usize| down.occupations[k].max(0.0).sqrt();
    let terms = [lam(0) * overlap(2, 0), lam(1) * overlap(1, 1), lam(2) * overlap(0, 2)];
    let [a, b, c] = terms;
    let slack = (b + c - a).min(a + c - b).min(a + b - c);
    Ok(BdOrbitalCondition {
        terms,
        slack,
        spin_up: [up.occupations[0], up.occupations[1], up.occupations[2]],
        spin_down: [down.occupations[0], down.occupations[1], down.occupations[2]],
    })
}
