//! The operator `D̂ = κ0 + Σ κ_j n̂_j` over natural orbitals and the normalized
//! imaginary-time flow `Ψ̇ = −(1 − |Ψ⟩⟨Ψ|) D̂^(Ψ) Ψ`.

use nalgebra::{Complex, DMatrix, DVector};

use super::{gpc_value, natural_occupations, orbital_1rdm, NaturalOrbitals, SectorState, C64};
use crate::constraint::LinearConstraint;
use crate::error::{Error, Result};
use crate::rational::to_f64;

/// Off-diagonal tolerance for states that claim to be in their natural basis.
pub const BASIS_TOL: f64 = 1e-8;

fn kappa(gpc: &LinearConstraint, d: usize) -> Result<(f64, Vec<f64>)> {
    if gpc.dim() != d {
        return Err(Error::Dimension {
            expected: d,
            got: gpc.dim(),
        });
    }
    Ok((to_f64(&gpc.kappa0), gpc.kappa.iter().map(to_f64).collect()))
}

/// Eigenvalues of `D̂` on the determinants, read off in the current basis.
fn diagonal_weights(gpc: &LinearConstraint, psi: &SectorState) -> Result<Vec<f64>> {
    let g = orbital_1rdm(psi);
    let off = g.off_diagonal();
    if off > BASIS_TOL {
        return Err(Error::BasisMismatch(off));
    }
    let d = psi.space.d();
    let (k0, k) = kappa(gpc, d)?;
    let diag = g.diagonal();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| diag[b].total_cmp(&diag[a]));
    // κ of the j-th largest occupation acts on orbital order[j].
    let mut per_orbital = vec![0.0; d];
    for (j, &o) in order.iter().enumerate() {
        per_orbital[o] = k[j];
    }
    Ok((0..psi.space.len())
        .map(|i| {
            let w = psi.space.weight(psi.space.determinant(i));
            k0 + w.iter().zip(&per_orbital).map(|(&n, kk)| n as f64 * kk).sum::<f64>()
        })
        .collect())
}

/// `D̂|Ψ⟩` (unnormalized) for a state written in its own natural orbitals.
pub fn dhat_apply(gpc: &LinearConstraint, psi: &SectorState) -> Result<SectorState> {
    let w = diagonal_weights(gpc, psi)?;
    let amps = DVector::from_iterator(w.len(), psi.amplitudes.iter().zip(&w).map(|(c, x)| c * *x));
    Ok(SectorState {
        setting: psi.setting,
        space: psi.space.clone(),
        amplitudes: amps,
    })
}

/// `Var_Ψ(D̂)` for a state written in its own natural orbitals.
pub fn variance(gpc: &LinearConstraint, psi: &SectorState) -> Result<f64> {
    let w = diagonal_weights(gpc, psi)?;
    let (mut m1, mut m2, mut norm) = (0.0, 0.0, 0.0);
    for (c, x) in psi.amplitudes.iter().zip(&w) {
        let p = c.norm_sqr();
        norm += p;
        m1 += p * x;
        m2 += p * x * x;
    }
    Ok((m2 / norm - (m1 / norm).powi(2)).max(0.0))
}

/// `D̂^(Ψ)` of a state in an arbitrary orbital basis, as the one-body operator
/// `κ0 + Σ_ij h_ij Σ_σ f†_{iσ} f_{jσ}` with `h = U diag(κ) U†`.
#[derive(Debug, Clone)]
pub struct DhatFrame {
    pub natural: NaturalOrbitals,
    /// `D(λ^(l))` at the sorted natural occupations.
    pub value: f64,
    pub kappa0: f64,
    pub h: DMatrix<C64>,
}

impl DhatFrame {
    pub fn new(gpc: &LinearConstraint, psi: &SectorState) -> Result<Self> {
        let d = psi.space.d();
        let (k0, k) = kappa(gpc, d)?;
        let natural = natural_occupations(&orbital_1rdm(psi).matrix)?;
        let u = &natural.vectors;
        let h = DMatrix::from_fn(d, d, |i, j| {
            (0..d)
                .map(|m| u[(i, m)] * u[(j, m)].conj() * k[m])
                .fold(Complex::new(0.0, 0.0), |a, b| a + b)
        });
        Ok(DhatFrame {
            value: gpc_value(gpc, &natural.occupations),
            natural,
            kappa0: k0,
            h,
        })
    }

    pub fn apply(&self, psi: &SectorState, amps: &DVector<C64>) -> DVector<C64> {
        psi.space.apply_one_body(&self.h, amps) + amps * Complex::from(self.kappa0)
    }

    /// `⟨D̂²⟩ − ⟨D̂⟩²` for normalized `psi`.
    pub fn variance(&self, psi: &SectorState) -> f64 {
        let dpsi = self.apply(psi, &psi.amplitudes);
        let mean = psi.amplitudes.dotc(&dpsi).re;
        (dpsi.norm_squared() - mean * mean).max(0.0)
    }

    /// Whether two natural occupations coincide within `tol`.
    pub fn degenerate(&self, tol: f64) -> bool {
        self.natural.min_gap() <= tol
    }
}

/// `−(D̂Ψ − ⟨D̂⟩Ψ)` with the frame built from the normalized state.
fn rhs(gpc: &LinearConstraint, psi: &SectorState, amps: &DVector<C64>) -> Result<(DVector<C64>, bool)> {
    let probe = SectorState::from_amplitudes(psi.space.clone(), amps.clone())?;
    let frame = DhatFrame::new(gpc, &probe)?;
    let dpsi = frame.apply(psi, amps);
    let mean = amps.dotc(&dpsi) / Complex::from(amps.norm_squared());
    Ok((-(dpsi - amps * mean), frame.degenerate(DEGENERACY_TOL)))
}

/// Natural occupations closer than this trigger a degeneracy warning.
pub const DEGENERACY_TOL: f64 = 1e-10;

fn rk4(gpc: &LinearConstraint, psi: &SectorState, dt: f64) -> Result<(SectorState, bool)> {
    let y = &psi.amplitudes;
    let h = Complex::from(dt);
    let half = Complex::from(dt / 2.0);
    let (k1, g1) = rhs(gpc, psi, y)?;
    let (k2, g2) = rhs(gpc, psi, &(y + &k1 * half))?;
    let (k3, g3) = rhs(gpc, psi, &(y + &k2 * half))?;
    let (k4, g4) = rhs(gpc, psi, &(y + &k3 * h))?;
    let next = y + (k1 + k2 * Complex::from(2.0) + k3 * Complex::from(2.0) + k4) * Complex::from(dt / 6.0);
    Ok((
        SectorState::from_amplitudes(psi.space.clone(), next)?,
        g1 || g2 || g3 || g4,
    ))
}

/// One RK4 step of length `dt`, renormalized. The flag reports degenerate
/// natural occupations at any stage.
pub fn flow_step(gpc: &LinearConstraint, psi: &SectorState, dt: f64) -> Result<(SectorState, bool)> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    rk4(gpc, psi, dt)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub dt: f64,
    pub t_max: f64,
    /// Stop once `D` drops below this.
    pub d_stop: f64,
    /// Stop at a fixed point with `D > 0` once the variance drops below this.
    pub var_stop: f64,
    /// Keep every `record_every`-th step in the trajectory.
    pub record_every: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: 1e-3,
            t_max: 1e3,
            d_stop: 1e-12,
            var_stop: 1e-26,
            record_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub t: f64,
    pub d: f64,
    pub variance: f64,
    /// `‖Ψ(t) − Ψ(0)‖₂`.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowStop {
    Pinned,
    Stationary,
    TimeLimit,
}

#[derive(Debug, Clone)]
pub struct FlowResult {
    pub samples: Vec<FlowSample>,
    pub final_state: SectorState,
    pub d0: f64,
    /// `√(2 D(0))`.
    pub bound: f64,
    pub stop: FlowStop,
    pub steps: usize,
    pub degenerate_steps: usize,
    pub warnings: Vec<String>,
}

impl FlowResult {
    pub fn final_sample(&self) -> &FlowSample {
        self.samples.last().expect("trajectory has a start")
    }

    /// Largest increase of `D` between consecutive samples.
    pub fn max_increase(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| w[1].d - w[0].d)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_delta(&self) -> f64 {
        self.samples.iter().map(|s| s.delta).fold(0.0, f64::max)
    }
}

/// Integrates the flow until `D < d_stop`, the state is stationary, or `t_max`.
pub fn flow(gpc: &LinearConstraint, psi0: &SectorState, opts: &FlowOptions) -> Result<FlowResult> {
    if !(opts.dt > 0.0) {
        return Err(Error::Invalid(format!("time step must be positive, got {}", opts.dt)));
    }
    let every = opts.record_every.max(1);
    let frame = DhatFrame::new(gpc, psi0)?;
    let d0 = frame.value;
    let mut samples = vec![FlowSample {
        t: 0.0,
        d: d0,
        variance: frame.variance(psi0),
        delta: 0.0,
    }];
    let mut psi = psi0.clone();
    let mut t = 0.0;
    let mut steps = 0;
    let mut degenerate_steps = 0;
    let mut warnings = Vec::new();
    let mut last = samples[0];
    if frame.degenerate(DEGENERACY_TOL) {
        warnings.push(format!("DEGENERACY: natural occupations coincide at t = 0 (gap {:e})", frame.natural.min_gap()));
    }
    let stop = loop {
        if last.d < opts.d_stop {
            break FlowStop::Pinned;
        }
        if last.variance < opts.var_stop {
            break FlowStop::Stationary;
        }
        if t >= opts.t_max {
            break FlowStop::TimeLimit;
        }
        let (next, degenerate) = rk4(gpc, &psi, opts.dt)?;
        if degenerate {
            if degenerate_steps == 0 {
                warnings.push(format!("DEGENERACY: natural occupations coincide near t = {t:.6}"));
            }
            degenerate_steps += 1;
        }
        psi = next;
        t += opts.dt;
        steps += 1;
        let frame = DhatFrame::new(gpc, &psi)?;
        last = FlowSample {
            t,
            d: frame.value,
            variance: frame.variance(&psi),
            delta: psi.distance(psi0),
        };
        if steps % every == 0 {
            samples.push(last);
        }
    };
    if samples.last() != Some(&last) {
        samples.push(last);
    }
    Ok(FlowResult {
        samples,
        final_state: psi,
        d0,
        bound: (2.0 * d0.max(0.0)).sqrt(),
        stop,
        steps,
        degenerate_steps,
        warnings,
    })
}

/// Central finite difference of `D` against `−2 Var`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceCheck {
    pub d: f64,
    pub variance: f64,
    pub derivative: f64,
    /// `|dD/dt + 2 Var| / (2 Var)`.
    pub relative_residual: f64,
    pub degenerate: bool,
}

pub fn verify_variance(gpc: &LinearConstraint, psi: &SectorState, dt: f64) -> Result<VarianceCheck> {
    if !(dt > 0.0) {
        return Err(Error::Invalid(format!("time step must be positive, got {dt}")));
    }
    let frame = DhatFrame::new(gpc, psi)?;
    let var = frame.variance(psi);
    let (fwd, g1) = rk4(gpc, psi, dt)?;
    let (bwd, g2) = rk4(gpc, psi, -dt)?;
    let derivative = (DhatFrame::new(gpc, &fwd)?.value - DhatFrame::new(gpc, &bwd)?.value) / (2.0 * dt);
    Ok(VarianceCheck {
        d: frame.value,
        variance: var,
        derivative,
        relative_residual: (derivative + 2.0 * var).abs() / (2.0 * var).max(f64::MIN_POSITIVE),
        degenerate: g1 || g2 || frame.degenerate(DEGENERACY_TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin_catalog;
    use crate::constraint::ConstraintKind;
    use crate::rational::q;
    use crate::sandbox::{bd_setting, build_sector_basis, configuration, random_state, rotate};
    use crate::setting::Setting;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bd_gpcs() -> Vec<LinearConstraint> {
        let s = Setting::highest(3, 3, 1).unwrap();
        builtin_catalog().lookup(s.key()).unwrap().gpcs
    }

    fn superpose(states: &[(&SectorState, f64)]) -> SectorState {
        let space = states[0].0.space.clone();
        let mut v = DVector::from_element(space.len(), Complex::new(0.0, 0.0));
        for (s, c) in states {
            v += &s.amplitudes * Complex::from(*c);
        }
        SectorState::from_amplitudes(space, v).unwrap()
    }

    #[test]
    fn dhat_on_configurations() {
        let g = bd_gpcs();
        let i1 = configuration(&bd_setting(), &[(0, true), (0, false), (1, true)]).unwrap();
        let i2 = configuration(&bd_setting(), &[(0, true), (2, true), (2, false)]).unwrap();
        let pinned = superpose(&[(&i1, 0.7f64.sqrt()), (&i2, 0.3f64.sqrt())]);
        assert!(dhat_apply(&g[0], &pinned).unwrap().amplitudes.norm() < 1e-14);
        assert!(dhat_apply(&g[1], &i1).unwrap().amplitudes.norm() < 1e-14);
        let x = configuration(&bd_setting(), &[(0, true), (1, true), (2, false)]).unwrap();
        let r = dhat_apply(&g[0], &x);
        // (1,1,1) is degenerate; D1 = 1 − n1 + n2 still acts as 1.
        assert!((r.unwrap().amplitudes - &x.amplitudes).norm() < 1e-14);
        // n̂_3 is 0 on I1 and 1 on |1↑2↓3↑⟩; the two differ by two moves.
        let y = configuration(&bd_setting(), &[(0, true), (1, false), (2, true)]).unwrap();
        let mixed = superpose(&[(&i1, 1.0), (&y, 1.0)]);
        let n3 = LinearConstraint::geq(q(0), vec![q(0), q(0), q(1)], ConstraintKind::Gpc);
        assert!((variance(&n3, &mixed).unwrap() - 0.25).abs() < 1e-14);
        assert_eq!(variance(&g[1], &i1).unwrap(), 0.0);
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let g = bd_gpcs();
        let s = Setting::highest(3, 3, 1).unwrap();
        let basis = build_sector_basis(&s).unwrap();
        let psi = random_state(&basis, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!(matches!(dhat_apply(&g[0], &psi), Err(Error::BasisMismatch(_))));
        let frame = DhatFrame::new(&g[0], &psi).unwrap();
        let rotated = rotate(&psi, &frame.natural.vectors).unwrap();
        let direct = variance(&g[0], &rotated).unwrap();
        assert!((direct - frame.variance(&psi)).abs() < 1e-12);
        // Dense-operator oracle: build D̂ as a matrix and take moments.
        let n = psi.space.len();
        let mut dense = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
        for i in 0..n {
            let mut e = DVector::from_element(n, Complex::new(0.0, 0.0));
            e[i] = Complex::from(1.0);
            dense.set_column(i, &frame.apply(&psi, &e));
        }
        let a = &psi.amplitudes;
        let m1 = a.dotc(&(&dense * a)).re;
        let m2 = a.dotc(&(&dense * &dense * a)).re;
        assert!((m2 - m1 * m1 - direct).abs() < 1e-12);
        assert!((m1 - frame.value).abs() < 1e-12);
    }

    #[test]
    fn eigenstates_are_fixed_points() {
        let g = bd_gpcs();
        let i1 = configuration(&bd_setting(), &[(0, true), (0, false), (1, true)]).unwrap();
        let (next, _) = flow_step(&g[0], &i1, 1e-3).unwrap();
        assert!(next.distance(&i1) < 1e-12);
        assert!(flow_step(&g[0], &i1, 0.0).is_err());
    }

    #[test]
    fn derivative_matches_variance() {
        let s = Setting::highest(3, 3, 1).unwrap();
        let basis = build_sector_basis(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for g in bd_gpcs() {
            let psi = random_state(&basis, &mut rng).unwrap();
            let check = verify_variance(&g, &psi, 1e-5).unwrap();
            assert!(check.relative_residual < 1e-6, "{check:?}");
        }
    }

    #[test]
    fn flow_pins_and_respects_the_bound() {
        let g = &bd_gpcs()[1];
        let i1 = configuration(&bd_setting(), &[(0, true), (0, false), (1, true)]).unwrap();
        let i3 = configuration(&bd_setting(), &[(1, true), (1, false), (2, true)]).unwrap();
        let i2 = configuration(&bd_setting(), &[(0, true), (2, true), (2, false)]).unwrap();
        let psi = superpose(&[(&i1, 0.8), (&i3, 0.55), (&i2, 0.05)]);
        let r = flow(g, &psi, &FlowOptions::default()).unwrap();
        assert_eq!(r.stop, FlowStop::Pinned);
        assert!(r.final_sample().d < 1e-10);
        assert!(r.max_increase() <= 1e-13);
        assert!(r.max_delta() <= r.bound);
        for s in &r.samples {
            assert!((s.delta - s.delta.min(2.0)).abs() < 1e-12);
        }
        assert!((r.final_state.norm() - 1.0).abs() < 1e-12);
    }
}
