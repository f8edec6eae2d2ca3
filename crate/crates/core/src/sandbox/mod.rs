//! Exact few-fermion states in a fixed spin sector.
//!
//! Determinants are `u64` bitmasks over spin orbitals `p = σ·d + j` (spin up
//! first) and stand for `f†_{p1} f†_{p2} … |0⟩` with `p1 < p2 < …`. Amplitudes
//! are stored as a row-major matrix over (up string, down string).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use crate::constraint::LinearConstraint;
use crate::error::{Error, Result};
use crate::rational::{q, round_to, to_f64, Q};
use crate::setting::Setting;

mod borland_dennis;
mod flow;
mod verma;

pub use borland_dennis::{
    bd_orbital_condition, bd_residual_table, bd_setting, borland_dennis_state, configuration, BdOrbitalCondition, BdResidualTable,
};
pub use flow::{
    dhat_apply, flow, flow_step, variance, verify_variance, DhatFrame, FlowOptions, FlowResult, FlowSample, FlowStop,
    VarianceCheck, BASIS_TOL, DEGENERACY_TOL,
};
pub use verma::{verma_basis_states, VermaState, MAX_VERMA_DIM};

pub type C64 = Complex<f64>;

/// Largest number of spatial orbitals the sandbox accepts.
pub const MAX_SANDBOX_DIM: usize = 6;

/// Tolerance on the S² eigenvalue when projecting onto a sector.
pub const EIG_TOL: f64 = 1e-8;

/// Hermiticity tolerance used by [`natural_occupations`].
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: C64 = Complex { re: 0.0, im: 0.0 };

/// `(−1)^{#occupied below p}`.
fn parity_below(mask: u64, p: usize) -> f64 {
    if (mask & ((1u64 << p) - 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `f_p` on a determinant.
pub fn annihilate(mask: u64, p: usize) -> Option<(u64, f64)> {
    if mask & (1 << p) == 0 {
        return None;
    }
    Some((mask ^ (1 << p), parity_below(mask, p)))
}

/// `f†_p` on a determinant.
pub fn create(mask: u64, p: usize) -> Option<(u64, f64)> {
    if mask & (1 << p) != 0 {
        return None;
    }
    Some((mask | (1 << p), parity_below(mask, p)))
}

/// `f†_p f_q` on a determinant.
pub fn hop(mask: u64, p: usize, q: usize) -> Option<(u64, f64)> {
    let (m, s1) = annihilate(mask, q)?;
    let (m, s2) = create(m, p)?;
    Some((m, s1 * s2))
}

/// Spin orbital index of orbital `j` (0-based) with spin `up`.
pub fn spin_orbital(d: usize, j: usize, up: bool) -> usize {
    if up {
        j
    } else {
        d + j
    }
}

/// Canonical mask and sign of `f†_{p1} … f†_{pN}|0⟩` in the listed order.
pub fn ordered_determinant(orbitals: &[usize]) -> Option<(u64, f64)> {
    let mut mask = 0u64;
    let mut sign = 1.0;
    // Creating left to right from the vacuum reverses the listed order.
    for &p in orbitals.iter().rev() {
        let (m, s) = create(mask, p)?;
        mask = m;
        sign *= s;
    }
    Some((mask, sign))
}

fn strings(d: usize, n: u32) -> Vec<u64> {
    (0u64..(1 << d)).filter(|s| s.count_ones() == n).collect()
}

/// `(source index, create, annihilate, target index, sign)` for one spin block.
type Excitation = (usize, usize, usize, usize, f64);

fn excitations(list: &[u64], d: usize) -> Vec<Excitation> {
    let index: HashMap<u64, usize> = list.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut out = Vec::new();
    for (src, &s) in list.iter().enumerate() {
        for a in 0..d {
            for c in 0..d {
                if let Some((t, sign)) = hop(s, c, a) {
                    out.push((src, c, a, index[&t], sign));
                }
            }
        }
    }
    out
}

/// The fixed-`M` determinant space of a setting.
#[derive(Debug)]
pub struct DeterminantSpace {
    pub setting: Setting,
    pub up: Vec<u64>,
    pub down: Vec<u64>,
    up_exc: Vec<Excitation>,
    down_exc: Vec<Excitation>,
    index: HashMap<u64, usize>,
}

impl DeterminantSpace {
    pub fn new(setting: &Setting) -> Result<Self> {
        let d = setting.d();
        if d > MAX_SANDBOX_DIM {
            return Err(Error::Bound(format!("sandbox supports d ≤ {MAX_SANDBOX_DIM}, got {d}")));
        }
        let up = strings(d, setting.n_up());
        let down = strings(d, setting.n_down());
        let up_exc = excitations(&up, d);
        let down_exc = excitations(&down, d);
        let mut index = HashMap::new();
        for (iu, &u) in up.iter().enumerate() {
            for (id, &w) in down.iter().enumerate() {
                index.insert(u | (w << d), iu * down.len() + id);
            }
        }
        Ok(DeterminantSpace {
            setting: *setting,
            up,
            down,
            up_exc,
            down_exc,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.up.len() * self.down.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn d(&self) -> usize {
        self.setting.d()
    }

    /// Full spin-orbital mask of basis position `i`.
    pub fn determinant(&self, i: usize) -> u64 {
        let nd = self.down.len();
        self.up[i / nd] | (self.down[i % nd] << self.d())
    }

    pub fn position(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    /// Orbital occupation vector of a determinant.
    pub fn weight(&self, mask: u64) -> Vec<u8> {
        let d = self.d();
        (0..d)
            .map(|j| ((mask >> j) & 1) as u8 + ((mask >> (d + j)) & 1) as u8)
            .collect()
    }

    /// Dense `S²` on this space.
    pub fn s_squared(&self) -> DMatrix<f64> {
        let d = self.d();
        let n = self.len();
        let sz = self.setting.two_m as f64 / 2.0;
        let mut m = DMatrix::<f64>::zeros(n, n);
        for src in 0..n {
            m[(src, src)] += sz * sz + sz;
            let det = self.determinant(src);
            // S−S+ with S+ = Σ f†_{j↑} f_{j↓}.
            for j in 0..d {
                let Some((mid, s1)) = hop(det, j, d + j) else { continue };
                for k in 0..d {
                    if let Some((t, s2)) = hop(mid, d + k, k) {
                        let tgt = self.index[&t];
                        m[(tgt, src)] += s1 * s2;
                    }
                }
            }
        }
        m
    }

    /// `Σ_ij h_ij Σ_σ f†_{iσ} f_{jσ}` applied to amplitudes.
    pub fn apply_one_body(&self, h: &DMatrix<C64>, amps: &DVector<C64>) -> DVector<C64> {
        let nd = self.down.len();
        let mut out = DVector::from_element(amps.len(), ZERO);
        for &(src, c, a, tgt, sign) in &self.up_exc {
            let coeff = h[(c, a)] * sign;
            if coeff == ZERO {
                continue;
            }
            for id in 0..nd {
                out[tgt * nd + id] += coeff * amps[src * nd + id];
            }
        }
        for &(src, c, a, tgt, sign) in &self.down_exc {
            let coeff = h[(c, a)] * sign;
            if coeff == ZERO {
                continue;
            }
            for iu in 0..self.up.len() {
                out[iu * nd + tgt] += coeff * amps[iu * nd + src];
            }
        }
        out
    }
}

/// A normalized state of a spin sector.
#[derive(Debug, Clone)]
pub struct SectorState {
    pub setting: Setting,
    pub space: Arc<DeterminantSpace>,
    pub amplitudes: DVector<C64>,
}

impl SectorState {
    /// Wraps amplitudes and normalizes them.
    pub fn from_amplitudes(space: Arc<DeterminantSpace>, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.len() {
            return Err(Error::Dimension {
                expected: space.len(),
                got: amplitudes.len(),
            });
        }
        let norm = amplitudes.norm();
        if norm < 1e-300 {
            return Err(Error::Invalid("zero state".into()));
        }
        Ok(SectorState {
            setting: space.setting,
            space,
            amplitudes: amplitudes / Complex::from(norm),
        })
    }

    pub fn basis_dim(&self) -> usize {
        self.space.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn amplitude(&self, mask: u64) -> C64 {
        self.space.position(mask).map_or(ZERO, |i| self.amplitudes[i])
    }

    /// Nonzero `(determinant, amplitude)` pairs in basis order.
    pub fn terms(&self, tol: f64) -> Vec<(u64, C64)> {
        (0..self.amplitudes.len())
            .filter(|&i| self.amplitudes[i].norm() > tol)
            .map(|i| (self.space.determinant(i), self.amplitudes[i]))
            .collect()
    }

    pub fn inner(&self, other: &SectorState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `‖self − other‖₂`.
    pub fn distance(&self, other: &SectorState) -> f64 {
        (&self.amplitudes - &other.amplitudes).norm()
    }

    pub fn expectation(&self, op: &DMatrix<f64>) -> f64 {
        let a = &self.amplitudes;
        let mut acc = ZERO;
        for c in 0..a.len() {
            for r in 0..a.len() {
                let m = op[(r, c)];
                if m != 0.0 {
                    acc += a[r].conj() * a[c] * m;
                }
            }
        }
        acc.re
    }

    /// Serializes in the `setting` / `det` line format.
    pub fn to_text(&self, tol: f64) -> String {
        let s = &self.setting;
        let mut out = format!("setting {} {} {} {}\n", s.n_particles, s.n_orbitals, s.two_s, s.two_m);
        for (mask, c) in self.terms(tol) {
            out.push_str(&format!("det {} {:.15e} {:.15e}\n", determinant_label(mask, s.d()), c.re, c.im));
        }
        out
    }
}

/// Labels like `1u 1d 2u` in canonical order.
pub fn determinant_label(mask: u64, d: usize) -> String {
    let mut parts = Vec::new();
    for p in 0..2 * d {
        if mask & (1 << p) != 0 {
            let (j, s) = if p < d { (p, 'u') } else { (p - d, 'd') };
            parts.push(format!("{}{}", j + 1, s));
        }
    }
    parts.join(" ")
}

impl fmt::Display for SectorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .terms(1e-12)
            .into_iter()
            .map(|(m, c)| format!("({:.6}{:+.6}i)|{}⟩", c.re, c.im, determinant_label(m, self.setting.d())))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Orthonormal basis of the sector: eigenvectors of `S²` at `S(S+1)`.
pub fn build_sector_basis(setting: &Setting) -> Result<Vec<SectorState>> {
    let space = Arc::new(DeterminantSpace::new(setting)?);
    let target = setting.s_squared();
    let eig = SymmetricEigen::new(space.s_squared());
    let mut out = Vec::new();
    for (k, &val) in eig.eigenvalues.iter().enumerate() {
        if (val - target).abs() <= EIG_TOL {
            let v = eig.eigenvectors.column(k).map(|x| Complex::new(x, 0.0));
            out.push(SectorState::from_amplitudes(space.clone(), v)?);
        }
    }
    if out.is_empty() {
        return Err(Error::Invalid(format!("empty spin sector {setting}")));
    }
    Ok(out)
}

/// A random unit vector in the span of `basis` (complex Gaussian coefficients).
pub fn random_state<R: Rng>(basis: &[SectorState], rng: &mut R) -> Result<SectorState> {
    let space = basis
        .first()
        .ok_or_else(|| Error::Invalid("empty basis".into()))?
        .space
        .clone();
    let mut amps = DVector::from_element(space.len(), ZERO);
    for b in basis {
        let c = Complex::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal));
        amps += &b.amplitudes * c;
    }
    SectorState::from_amplitudes(space, amps)
}

/// [`random_state`] in the sector of `setting`, driven by a ChaCha8 stream.
pub fn seeded_state(setting: &Setting, seed: u64) -> Result<SectorState> {
    let basis = build_sector_basis(setting)?;
    random_state(&basis, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
}

/// Orbital 1RDM `γ_ij = ⟨Ψ|E_ij|Ψ⟩` with `E_ij = Σ_σ f†_{jσ} f_{iσ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitalRdm {
    pub matrix: DMatrix<C64>,
}

impl OrbitalRdm {
    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|x| x.re).collect()
    }

    /// Largest off-diagonal modulus.
    pub fn off_diagonal(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }
}

pub fn orbital_1rdm(psi: &SectorState) -> OrbitalRdm {
    let sp = &psi.space;
    let d = sp.d();
    let nd = sp.down.len();
    let a = &psi.amplitudes;
    let mut g = DMatrix::from_element(d, d, ZERO);
    for &(src, c, an, tgt, sign) in &sp.up_exc {
        let mut acc = ZERO;
        for id in 0..nd {
            acc += a[tgt * nd + id].conj() * a[src * nd + id];
        }
        g[(an, c)] += acc * sign;
    }
    for &(src, c, an, tgt, sign) in &sp.down_exc {
        let mut acc = ZERO;
        for iu in 0..sp.up.len() {
            acc += a[iu * nd + tgt].conj() * a[iu * nd + src];
        }
        g[(an, c)] += acc * sign;
    }
    OrbitalRdm { matrix: g }
}

/// Spin-orbital 1RDM `γ_pq = ⟨f†_q f_p⟩` over all `2d` spin orbitals.
pub fn spin_orbital_1rdm(psi: &SectorState) -> DMatrix<C64> {
    let sp = &psi.space;
    let m = 2 * sp.d();
    let mut g = DMatrix::from_element(m, m, ZERO);
    for src in 0..sp.len() {
        let cs = psi.amplitudes[src];
        if cs == ZERO {
            continue;
        }
        let det = sp.determinant(src);
        for p in 0..m {
            for q in 0..m {
                if let Some((t, sign)) = hop(det, q, p) {
                    if let Some(tgt) = sp.position(t) {
                        g[(p, q)] += psi.amplitudes[tgt].conj() * cs * sign;
                    }
                }
            }
        }
    }
    g
}

/// Eigenvalues sorted descending (stable on ties) and eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct NaturalOrbitals {
    pub occupations: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl NaturalOrbitals {
    /// Smallest gap between consecutive occupations.
    pub fn min_gap(&self) -> f64 {
        self.occupations
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn natural_occupations(gamma: &DMatrix<C64>) -> Result<NaturalOrbitals> {
    natural_occupations_tol(gamma, HERMITIAN_TOL)
}

pub fn natural_occupations_tol(gamma: &DMatrix<C64>, tol: f64) -> Result<NaturalOrbitals> {
    if !gamma.is_square() {
        return Err(Error::Dimension {
            expected: gamma.nrows(),
            got: gamma.ncols(),
        });
    }
    let defect = (gamma - gamma.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
    if defect > tol {
        return Err(Error::Invalid(format!("matrix is not Hermitian (defect {defect:e})")));
    }
    let eig = SymmetricEigen::new((gamma + gamma.adjoint()) * Complex::from(0.5));
    let mut order: Vec<usize> = (0..gamma.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let occupations = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(gamma.nrows(), gamma.nrows(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(NaturalOrbitals { occupations, vectors })
}

/// Natural occupation numbers of the orbital 1RDM, descending.
pub fn orbital_spectrum(psi: &SectorState) -> Result<Vec<f64>> {
    Ok(natural_occupations(&orbital_1rdm(psi).matrix)?.occupations)
}

/// Natural occupations rounded to the grid `1/den`, the rounding error of the
/// normalization moved onto the largest entry so that the sum is exactly `N`.
pub fn rational_spectrum(psi: &SectorState, den: i64) -> Result<Vec<Q>> {
    let lam = orbital_spectrum(psi)?;
    let mut v: Vec<Q> = lam.iter().map(|&x| round_to(x.max(0.0), den)).collect();
    let sum: Q = v.iter().sum();
    v[0] = &v[0] + (q(psi.setting.n_particles as i64) - sum);
    Ok(v)
}

/// Expresses `psi` in the orbitals `b†_k = Σ_i U_ik f†_i` (same for both spins).
pub fn rotate(psi: &SectorState, u: &DMatrix<C64>) -> Result<SectorState> {
    let sp = &psi.space;
    let d = sp.d();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::Dimension {
            expected: d,
            got: u.nrows(),
        });
    }
    let tu = string_transform(&sp.up, u);
    let td = string_transform(&sp.down, u);
    let c = DMatrix::from_row_slice(sp.up.len(), sp.down.len(), psi.amplitudes.as_slice());
    let rotated = &tu * c * td.transpose();
    let amps = DVector::from_iterator(sp.len(), rotated.transpose().iter().copied());
    SectorState::from_amplitudes(psi.space.clone(), amps)
}

/// `T[K, I] = det(conj U[I, K])` over occupation strings.
fn string_transform(list: &[u64], u: &DMatrix<C64>) -> DMatrix<C64> {
    let bits = |s: u64| -> Vec<usize> { (0..u.nrows()).filter(|&p| s & (1 << p) != 0).collect() };
    let n = list.len();
    let mut t = DMatrix::from_element(n, n, ZERO);
    for (k, &sk) in list.iter().enumerate() {
        let cols = bits(sk);
        for (i, &si) in list.iter().enumerate() {
            let rows = bits(si);
            if rows.is_empty() {
                t[(k, i)] = Complex::new(1.0, 0.0);
                continue;
            }
            let m = DMatrix::from_fn(rows.len(), cols.len(), |r, c| u[(rows[r], cols[c])].conj());
            t[(k, i)] = m.determinant();
        }
    }
    t
}

/// `S⁻ = Σ_j f†_{j↓} f_{j↑}` applied and renormalized, moving to `M − 1`.
pub fn apply_s_minus(psi: &SectorState) -> Result<SectorState> {
    let s = psi.setting;
    let lower = Setting::new(s.n_particles, s.n_orbitals, s.two_s, s.two_m - 2)?;
    let space = Arc::new(DeterminantSpace::new(&lower)?);
    let d = s.d();
    let mut amps = DVector::from_element(space.len(), ZERO);
    for src in 0..psi.space.len() {
        let det = psi.space.determinant(src);
        for j in 0..d {
            if let Some((t, sign)) = hop(det, d + j, j) {
                amps[space.position(t).expect("same particle number")] += psi.amplitudes[src] * sign;
            }
        }
    }
    SectorState::from_amplitudes(space, amps)
}

/// `⟨S²⟩` of a state.
pub fn s_squared_expectation(psi: &SectorState) -> f64 {
    psi.expectation(&psi.space.s_squared())
}

/// `κ0 + Σ κ_j λ_j` in floating point.
pub fn gpc_value(gpc: &LinearConstraint, lambda: &[f64]) -> f64 {
    to_f64(&gpc.kappa0) + gpc.kappa.iter().zip(lambda).map(|(k, x)| to_f64(k) * x).sum::<f64>()
}

/// Parses the `setting N d 2S 2M` / `det 1u 1d 2u re im` format.
///
/// The state is projected onto the sector and normalized; a component outside
/// the `S²` eigenspace larger than `1e-8` is an error.
pub fn parse_state(text: &str) -> Result<SectorState> {
    let mut setting: Option<Setting> = None;
    let mut raw: Vec<(usize, u64, f64, C64)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<(usize, &str)> = crate::catalog::split_fields(body);
        let Some(&(col0, head)) = fields.first() else { continue };
        match head {
            "setting" => {
                if fields.len() != 5 {
                    return Err(Error::parse(ln, col0, "expected `setting N d 2S 2M`"));
                }
                let mut nums = [0i64; 4];
                for (k, &(col, tok)) in fields[1..].iter().enumerate() {
                    nums[k] = tok
                        .parse()
                        .map_err(|_| Error::parse(ln, col, format!("invalid integer \"{tok}\"")))?;
                }
                if nums[..3].iter().any(|&x| x < 0) {
                    return Err(Error::parse(ln, col0, "negative quantum number"));
                }
                let s = Setting::new(nums[0] as u32, nums[1] as u32, nums[2] as u32, nums[3] as i32)
                    .map_err(|e| Error::parse(ln, col0, e.to_string()))?;
                setting = Some(s);
            }
            "det" => {
                let s = setting.ok_or_else(|| Error::parse(ln, col0, "`det` before `setting`"))?;
                if fields.len() < 3 {
                    return Err(Error::parse(ln, col0, "expected `det <orbitals> <re> <im>`"));
                }
                let n = fields.len();
                let num = |k: usize| -> Result<f64> {
                    let (col, tok) = fields[k];
                    tok.parse::<f64>()
                        .map_err(|_| Error::parse(ln, col, format!("invalid number \"{tok}\"")))
                };
                let (re, im) = (num(n - 2)?, num(n - 1)?);
                let mut orbitals = Vec::new();
                for &(col, tok) in &fields[1..n - 2] {
                    orbitals.push(parse_spin_orbital(tok, s.d()).ok_or_else(|| {
                        Error::parse(ln, col, format!("invalid spin orbital \"{tok}\""))
                    })?);
                }
                let (mask, sign) =
                    ordered_determinant(&orbitals).ok_or_else(|| Error::parse(ln, col0, "repeated spin orbital"))?;
                raw.push((ln, mask, sign, Complex::new(re, im)));
            }
            other => return Err(Error::parse(ln, col0, format!("unknown keyword \"{other}\""))),
        }
    }
    let setting = setting.ok_or_else(|| Error::parse(1, 1, "missing `setting` line"))?;
    let basis = build_sector_basis(&setting)?;
    let space = basis[0].space.clone();
    let mut amps = DVector::from_element(space.len(), ZERO);
    let mut seen = vec![false; space.len()];
    for (ln, mask, sign, c) in raw {
        let pos = space
            .position(mask)
            .ok_or_else(|| Error::parse(ln, 1, "determinant does not belong to the sector"))?;
        if seen[pos] {
            return Err(Error::parse(ln, 1, "duplicate determinant"));
        }
        seen[pos] = true;
        amps[pos] = c * sign;
    }
    let norm = amps.norm();
    if norm == 0.0 {
        return Err(Error::Invalid("state has no amplitudes".into()));
    }
    amps /= Complex::from(norm);
    let mut proj = DVector::from_element(space.len(), ZERO);
    for b in &basis {
        proj += &b.amplitudes * b.amplitudes.dotc(&amps);
    }
    let outside = (&amps - &proj).norm();
    if outside > EIG_TOL {
        return Err(Error::Invalid(format!(
            "state leaves the spin sector (component {outside:e} outside S(S+1))"
        )));
    }
    SectorState::from_amplitudes(space, proj)
}

fn parse_spin_orbital(tok: &str, d: usize) -> Option<usize> {
    let (num, spin) = tok.split_at(tok.len().checked_sub(1)?);
    let j: usize = num.parse().ok()?;
    if j == 0 || j > d {
        return None;
    }
    match spin {
        "u" => Some(spin_orbital(d, j - 1, true)),
        "d" => Some(spin_orbital(d, j - 1, false)),
        _ => None,
    }
}
