//! Weights of a spin sector, their multiplicities, and the configuration
//! states selected by a pinned GPC.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::catalog::{pauli_constraints, ConstraintCatalog};
use crate::constraint::{ConstraintKind, LinearConstraint};
use crate::error::{Error, Result};
use crate::rational::{q, Q};
use crate::setting::Setting;

/// Largest `d` accepted by the weight enumeration.
pub const MAX_LATTICE_DIM: usize = 12;

/// An orbital occupation vector of a configuration state and its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub occupations: Vec<u8>,
    pub multiplicity: u64,
}

impl Weight {
    pub fn as_rationals(&self) -> Vec<Q> {
        self.occupations.iter().map(|&x| q(x as i64)).collect()
    }

    pub fn sorted_desc(&self) -> Vec<u8> {
        let mut v = self.occupations.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.occupations.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `(2,…,2, 1,…,1, 0,…,0)` with `K` twos and `2S` ones.
pub fn highest_weight(setting: &Setting) -> Weight {
    let d = setting.d();
    let k = setting.k() as usize;
    let ones = setting.two_s as usize;
    let occupations = (0..d)
        .map(|j| {
            if j < k {
                2
            } else if j < k + ones {
                1
            } else {
                0
            }
        })
        .collect();
    Weight {
        occupations,
        multiplicity: 1,
    }
}

/// Number of semistandard tableaux of shape `hw` (rows of length ≤ 2) with
/// content `w`. Zero when the sums differ or `w` is not dominated by `hw`.
pub fn kostka_multiplicity(hw: &Weight, w: &Weight) -> u64 {
    kostka(&hw.occupations, &w.occupations)
}

fn kostka(hw: &[u8], w: &[u8]) -> u64 {
    let total_hw: u32 = hw.iter().map(|&x| x as u32).sum();
    let total_w: u32 = w.iter().map(|&x| x as u32).sum();
    if total_hw != total_w || hw.iter().chain(w).any(|&x| x > 2) {
        return 0;
    }
    // Shape: a first column of length J = #{hw_j ≥ 1} and a second of length
    // K = #{hw_j = 2}. Entries j with w_j = 2 sit in both columns, entries with
    // w_j = 1 in one of them.
    let long = hw.iter().filter(|&&x| x >= 1).count();
    let short = hw.iter().filter(|&&x| x == 2).count();
    let twos: Vec<usize> = (0..w.len()).filter(|&j| w[j] == 2).collect();
    let singles: Vec<usize> = (0..w.len()).filter(|&j| w[j] == 1).collect();
    let need_long = long.checked_sub(twos.len());
    let need_short = short.checked_sub(twos.len());
    let (Some(need_long), Some(need_short)) = (need_long, need_short) else {
        return 0;
    };
    if need_long + need_short != singles.len() {
        return 0;
    }
    let mut count = 0;
    let mut col1 = Vec::with_capacity(long);
    let mut col2 = Vec::with_capacity(short);
    for mask in 0u32..(1 << singles.len()) {
        if mask.count_ones() as usize != need_long {
            continue;
        }
        col1.clear();
        col2.clear();
        let mut s = 0;
        for j in 0..w.len() {
            if w[j] == 2 {
                col1.push(j);
                col2.push(j);
            } else if w[j] == 1 {
                if mask & (1 << s) != 0 {
                    col1.push(j);
                } else {
                    col2.push(j);
                }
                s += 1;
            }
        }
        if col2.iter().zip(&col1).all(|(b, a)| b >= a) {
            count += 1;
        }
    }
    count
}

/// All weights of the sector with their multiplicities, in lexicographically
/// decreasing order of occupations.
pub fn weight_lattice(setting: &Setting) -> Result<Vec<Weight>> {
    let d = setting.d();
    if d > MAX_LATTICE_DIM {
        return Err(Error::Bound(format!(
            "weight enumeration supports d ≤ {MAX_LATTICE_DIM}, got {d}"
        )));
    }
    let hw = highest_weight(setting);
    let n = setting.n_particles as usize;
    let mut out = Vec::new();
    let mut cur = vec![0u8; d];
    enumerate(&mut cur, 0, n, &mut |w| {
        let m = kostka(&hw.occupations, w);
        if m > 0 {
            out.push(Weight {
                occupations: w.to_vec(),
                multiplicity: m,
            });
        }
    });
    Ok(out)
}

fn enumerate(cur: &mut Vec<u8>, pos: usize, left: usize, f: &mut impl FnMut(&[u8])) {
    if pos == cur.len() {
        if left == 0 {
            f(cur);
        }
        return;
    }
    let rest = cur.len() - pos - 1;
    for x in (0..=2u8.min(left as u8)).rev() {
        if left - x as usize > 2 * rest {
            continue;
        }
        cur[pos] = x;
        enumerate(cur, pos + 1, left - x as usize, f);
    }
    cur[pos] = 0;
}

/// Dimension of the sector, the sum of all multiplicities.
pub fn sector_dimension(setting: &Setting) -> Result<u64> {
    Ok(weight_lattice(setting)?.iter().map(|w| w.multiplicity).sum())
}

/// Partition of the weight lattice by a pinned GPC.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub gpcs: Vec<LinearConstraint>,
    pub selected: Vec<Weight>,
    pub excluded: Vec<Weight>,
    pub pinned_dimension: u64,
}

/// Weights with residual exactly zero for a GPC acting on natural-orbital
/// occupation operators.
pub fn selected_weights(gpc: &LinearConstraint, setting: &Setting) -> Result<SelectionResult> {
    select_joint(std::slice::from_ref(gpc), setting)
}

/// Weights with residual zero for every GPC in `gpcs` (simultaneous pinning).
pub fn select_joint(gpcs: &[LinearConstraint], setting: &Setting) -> Result<SelectionResult> {
    for g in gpcs {
        if g.dim() != setting.d() {
            return Err(Error::Dimension {
                expected: setting.d(),
                got: g.dim(),
            });
        }
    }
    let mut selected = Vec::new();
    let mut excluded = Vec::new();
    for w in weight_lattice(setting)? {
        let v = w.as_rationals();
        if gpcs.iter().all(|g| g.residual_unchecked(&v).is_zero()) {
            selected.push(w);
        } else {
            excluded.push(w);
        }
    }
    let pinned_dimension = selected.iter().map(|w| w.multiplicity).sum();
    Ok(SelectionResult {
        gpcs: gpcs.to_vec(),
        selected,
        excluded,
        pinned_dimension,
    })
}

/// Weights whose sorted occupations are strictly inside every GPC, the box and
/// the spin-adapted Pauli constraints: a nonzero coefficient on any of them
/// rules out pinning.
pub fn interior_weights(setting: &Setting, catalog: &ConstraintCatalog) -> Result<Vec<Weight>> {
    let lookup = catalog.lookup(setting.key())?;
    let mut checks: Vec<LinearConstraint> = lookup.inequalities().map(|(_, c)| c.clone()).collect();
    checks.extend(
        pauli_constraints(setting)
            .into_iter()
            .filter(|c| matches!(c.kind, ConstraintKind::Box | ConstraintKind::SpinPauli)),
    );
    Ok(weight_lattice(setting)?
        .into_iter()
        .filter(|w| {
            let v: Vec<Q> = w.sorted_desc().iter().map(|&x| q(x as i64)).collect();
            checks.iter().all(|c| c.residual_unchecked(&v).is_positive())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;

    fn setting(n: u32, d: u32, s: u32) -> Setting {
        Setting::highest(n, d, s).unwrap()
    }

    fn occ(ws: &[Weight]) -> Vec<Vec<u8>> {
        ws.iter().map(|w| w.occupations.clone()).collect()
    }

    fn w(v: &[u8]) -> Weight {
        Weight {
            occupations: v.to_vec(),
            multiplicity: 1,
        }
    }

    #[test]
    fn highest_weights() {
        assert_eq!(highest_weight(&setting(4, 4, 2)).occupations, vec![2, 1, 1, 0]);
        assert_eq!(highest_weight(&setting(4, 4, 0)).occupations, vec![2, 2, 0, 0]);
        assert_eq!(highest_weight(&setting(3, 3, 1)).occupations, vec![2, 1, 0]);
    }

    #[test]
    fn kostka_numbers() {
        assert_eq!(kostka_multiplicity(&w(&[2, 2, 0, 0]), &w(&[2, 2, 0, 0])), 1);
        assert_eq!(kostka_multiplicity(&w(&[2, 2, 0, 0]), &w(&[1, 1, 1, 1])), 2);
        assert_eq!(kostka_multiplicity(&w(&[2, 1, 0]), &w(&[1, 1, 1])), 2);
        assert_eq!(kostka_multiplicity(&w(&[2, 1, 1, 0]), &w(&[2, 2, 0, 0])), 0);
        assert_eq!(kostka_multiplicity(&w(&[2, 1, 0]), &w(&[1, 1, 0])), 0);
    }

    #[test]
    fn lattice_counts() {
        let l = weight_lattice(&setting(4, 4, 0)).unwrap();
        assert_eq!(l.len(), 19);
        assert_eq!(l.iter().map(|w| w.multiplicity).sum::<u64>(), 20);
        let center = l.iter().find(|w| w.occupations == vec![1, 1, 1, 1]).unwrap();
        assert_eq!(center.multiplicity, 2);

        let l = weight_lattice(&setting(3, 3, 1)).unwrap();
        assert_eq!(l.len(), 7);
        assert_eq!(sector_dimension(&setting(3, 3, 1)).unwrap(), 8);
    }

    #[test]
    fn sector_dimensions_match_weyl_formula() {
        // dim = (2S + 1)/(d + 1) · C(d + 1, K) · C(d + 1, J + 1).
        fn binom(n: u64, k: u64) -> u64 {
            if k > n {
                return 0;
            }
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for d in 1..=7u32 {
            for n in 1..=2 * d {
                for two_s in 0..=n {
                    let Ok(s) = Setting::highest(n, d, two_s) else { continue };
                    let (j, k, d1) = (s.j() as u64, s.k() as u64, d as u64 + 1);
                    let expected = (two_s as u64 + 1) * binom(d1, k) * binom(d1, j + 1) / d1;
                    assert_eq!(sector_dimension(&s).unwrap(), expected, "{s}");
                }
            }
        }
    }

    #[test]
    fn borland_dennis_selection() {
        let cat = builtin_catalog();
        let s = setting(3, 3, 1);
        let l = cat.lookup(s.key()).unwrap();
        let d1 = &l.gpcs[0];
        let d2 = &l.gpcs[1];
        let r = selected_weights(d1, &s).unwrap();
        assert_eq!(occ(&r.selected), vec![vec![2, 1, 0], vec![1, 0, 2]]);
        assert_eq!(r.pinned_dimension, 2);
        let r = selected_weights(d2, &s).unwrap();
        assert_eq!(occ(&r.selected), vec![vec![2, 1, 0], vec![0, 2, 1]]);
        let r = select_joint(&[d1.clone(), d2.clone()], &s).unwrap();
        assert_eq!(occ(&r.selected), vec![vec![2, 1, 0]]);
        assert_eq!(r.pinned_dimension, 1);
        assert_eq!(r.selected.len() + r.excluded.len(), 7);
    }

    #[test]
    fn interior() {
        let cat = builtin_catalog();
        assert_eq!(occ(&interior_weights(&setting(4, 4, 0), &cat).unwrap()), vec![vec![1, 1, 1, 1]]);
        let i = interior_weights(&setting(4, 4, 2), &cat).unwrap();
        assert!(!occ(&i).contains(&vec![2, 1, 1, 0]));
        let i = interior_weights(&setting(3, 3, 1), &cat).unwrap();
        assert!(occ(&i).contains(&vec![1, 1, 1]));
    }

    #[test]
    fn enumeration_bound() {
        assert!(matches!(weight_lattice(&setting(3, 13, 1)), Err(Error::Bound(_))));
    }
}
