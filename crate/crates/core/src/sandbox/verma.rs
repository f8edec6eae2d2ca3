//! Monomial basis generated by the lowering operators `E†_{j+1,j}` from the
//! highest-weight determinant, orthonormalized within each weight.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector};

use super::{apply_s_minus, DeterminantSpace, SectorState, C64};
use crate::error::{Error, Result};
use crate::setting::Setting;

/// Largest `d` for the explicit monomial construction.
pub const MAX_VERMA_DIM: usize = 5;

/// Norm below which a new monomial counts as linearly dependent.
const DEPENDENCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct VermaState {
    pub weight: Vec<u8>,
    /// Lowering steps `j` (0-based, moving one electron `j → j+1`) in the
    /// order they were applied to the highest-weight determinant.
    pub monomial: Vec<usize>,
    pub state: SectorState,
}

/// `E†_{j+1,j} = Σ_σ f†_{j+1,σ} f_{j,σ}`.
fn lowering(space: &DeterminantSpace, j: usize, v: &DVector<C64>) -> DVector<C64> {
    let d = space.d();
    let mut h = DMatrix::from_element(d, d, Complex::new(0.0, 0.0));
    h[(j + 1, j)] = Complex::from(1.0);
    space.apply_one_body(&h, v)
}

/// States labeled by weights, orthonormal, spanning the sector. Repeated
/// weights are Gram–Schmidt orthonormalized in generation order.
pub fn verma_basis_states(setting: &Setting) -> Result<Vec<VermaState>> {
    let d = setting.d();
    if d > MAX_VERMA_DIM {
        return Err(Error::Bound(format!("monomial basis supports d ≤ {MAX_VERMA_DIM}, got {d}")));
    }
    let top = Setting::highest(setting.n_particles, setting.n_orbitals, setting.two_s)?;
    let space = Arc::new(DeterminantSpace::new(&top)?);
    let k = top.k() as usize;
    let ones = top.two_s as usize;
    let mut mask = 0u64;
    for j in 0..k {
        mask |= (1 << j) | (1 << (d + j));
    }
    for j in k..k + ones {
        mask |= 1 << j;
    }
    let mut hw = DVector::from_element(space.len(), Complex::new(0.0, 0.0));
    hw[space.position(mask).expect("highest weight in sector")] = Complex::from(1.0);
    let weight0 = space.weight(mask);

    let mut accepted: Vec<(Vec<u8>, Vec<usize>, DVector<C64>)> = vec![(weight0.clone(), vec![], hw.clone())];
    let mut by_weight: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
    by_weight.insert(weight0, vec![0]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let (w, mono, v) = accepted[idx].clone();
        for j in 0..d.saturating_sub(1) {
            if w[j] == 0 || w[j + 1] == 2 {
                continue;
            }
            let mut r = lowering(&space, j, &v);
            let raw = r.norm();
            if raw < DEPENDENCE_TOL {
                continue;
            }
            let mut nw = w.clone();
            nw[j] -= 1;
            nw[j + 1] += 1;
            let peers = by_weight.entry(nw.clone()).or_default();
            for _ in 0..2 {
                for &p in peers.iter() {
                    let b = &accepted[p].2;
                    let c = b.dotc(&r);
                    r -= b * c;
                }
            }
            if r.norm() < DEPENDENCE_TOL * raw {
                continue;
            }
            let n = r.norm();
            r /= Complex::from(n);
            let mut m = mono.clone();
            m.push(j);
            peers.push(accepted.len());
            queue.push_back(accepted.len());
            accepted.push((nw, m, r));
        }
    }

    let mut out = Vec::with_capacity(accepted.len());
    for (weight, monomial, amps) in accepted {
        let mut state = SectorState::from_amplitudes(space.clone(), amps)?;
        while state.setting.two_m > setting.two_m {
            state = apply_s_minus(&state)?;
        }
        out.push(VermaState {
            weight,
            monomial,
            state,
        });
    }
    Ok(out)
}
