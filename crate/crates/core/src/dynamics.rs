// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit open-system dynamics in the collective (Dicke) basis.
//!
//! States live in the basis (|e⟩, |+⟩, |−⟩, |g⟩): both qubits excited, the
//! symmetric and antisymmetric single-excitation states, and both qubits in
//! the ground state. Evolution is available through two mutually
//! cross-checking routes: the closed-form element solutions of the
//! collective decay problem ([`evolve_closed_form`]) and a fixed-step RK4
//! integration of the Lindblad master equation in the product basis
//! ([`integrate_lindblad`]).

use nalgebra::{Matrix2, SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, hermitize, CMatrix4};
use crate::rates::RateSet;

/// Index of |e⟩ (both excited) in the collective basis.
pub const LEVEL_EXCITED: usize = 0;
/// Index of |+⟩ (symmetric single excitation).
pub const LEVEL_SYMMETRIC: usize = 1;
/// Index of |−⟩ (antisymmetric single excitation).
pub const LEVEL_ANTISYMMETRIC: usize = 2;
/// Index of |g⟩ (both qubits in the ground state).
pub const LEVEL_GROUND: usize = 3;

/// Hermiticity tolerance for validated density matrices.
const HERM_TOL: f64 = 1e-12;
/// Trace tolerance for validated density matrices.
const TRACE_TOL: f64 = 1e-12;
/// Eigenvalue floor for validated density matrices.
const EIG_FLOOR: f64 = 1e-10;
/// Looser positivity floor applied along integrated trajectories.
const TRAJECTORY_EIG_FLOOR: f64 = 1e-8;
/// Trace drift beyond this aborts an integration (it indicates a broken
/// generator, not accumulated rounding).
const TRACE_DRIFT_ABORT: f64 = 1e-6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Two-qubit density matrix in the collective basis (|e⟩, |+⟩, |−⟩, |g⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveDensityMatrix {
    m: CMatrix4,
}

impl CollectiveDensityMatrix {
    /// Validates and wraps a collective-basis matrix: Hermitian to 1e-12,
    /// unit trace to 1e-12, eigenvalues ≥ −1e-10.
    pub fn new(m: CMatrix4) -> Result<Self> {
        let defect = hermiticity_defect(&m);
        if !(defect <= HERM_TOL) {
            return Err(Error::InvalidState(format!(
                "density matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = m.trace();
        if !((tr.re - 1.0).abs() <= TRACE_TOL && tr.im.abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!(
                "density matrix trace is {tr} instead of 1"
            )));
        }
        let min_eig = hermitian_eigenvalues(&m)[0];
        if !(min_eig >= -EIG_FLOOR) {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(CollectiveDensityMatrix { m: hermitize(&m) })
    }

    /// Wraps a matrix without validation. Intended for evolution outputs
    /// whose invariants are checked separately, and for inspecting the
    /// deliberately non-contractive literal solution branch.
    pub fn new_unchecked(m: CMatrix4) -> Self {
        CollectiveDensityMatrix { m }
    }

    /// The underlying collective-basis matrix.
    pub fn matrix(&self) -> &CMatrix4 {
        &self.m
    }

    /// Matrix element (row, column) in the collective basis.
    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// Diagonal populations (ρ_ee, ρ_++, ρ_−−, ρ_gg).
    pub fn populations(&self) -> [f64; 4] {
        [
            self.m[(0, 0)].re,
            self.m[(1, 1)].re,
            self.m[(2, 2)].re,
            self.m[(3, 3)].re,
        ]
    }

    /// Trace of the matrix.
    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Maximum deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.m)
    }

    /// Smallest eigenvalue (of the Hermitian part).
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.m)[0]
    }

    /// Checks the physical-state invariants with the given eigenvalue
    /// floor, returning a descriptive error on the first violation.
    pub fn check_physical(&self, eig_floor: f64) -> Result<()> {
        let defect = self.hermiticity_defect();
        if !(defect <= 1e-9) {
            return Err(Error::InvalidState(format!(
                "Hermiticity defect {defect:.3e}"
            )));
        }
        let tr = self.trace();
        if !((tr.re - 1.0).abs() <= 1e-9) {
            return Err(Error::InvalidState(format!("trace {tr} drifted from 1")));
        }
        let min_eig = self.min_eigenvalue();
        if !(min_eig >= -eig_floor) {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Maximum element-wise distance to another state.
    pub fn max_element_distance(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.m[(i, j)] - other.m[(i, j)]).norm());
            }
        }
        worst
    }
}

/// Supported initial preparations.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Pure superposition √α|e⟩ + √(1−α)|g⟩ of the doubly excited and
    /// ground levels; entangled with concurrence 2√(α(1−α)).
    EntangledPure { alpha: f64 },
    /// Diagonal mixture (1/3)·diag(α, 2, 0, 1−α) in the collective basis.
    MixedDiagonal { alpha: f64 },
    /// Arbitrary collective-basis density matrix.
    Custom { matrix: CMatrix4 },
}

impl InitialState {
    /// Builds the validated density matrix for this preparation.
    pub fn density_matrix(&self) -> Result<CollectiveDensityMatrix> {
        match self {
            InitialState::EntangledPure { alpha } => {
                let a = validated_alpha(*alpha)?;
                let coh = (a * (1.0 - a)).sqrt();
                let mut m = CMatrix4::zeros();
                m[(0, 0)] = cr(a);
                m[(0, 3)] = cr(coh);
                m[(3, 0)] = cr(coh);
                m[(3, 3)] = cr(1.0 - a);
                CollectiveDensityMatrix::new(m)
            }
            InitialState::MixedDiagonal { alpha } => {
                let a = validated_alpha(*alpha)?;
                let mut m = CMatrix4::zeros();
                m[(0, 0)] = cr(a / 3.0);
                m[(1, 1)] = cr(2.0 / 3.0);
                m[(3, 3)] = cr((1.0 - a) / 3.0);
                CollectiveDensityMatrix::new(m)
            }
            InitialState::Custom { matrix } => CollectiveDensityMatrix::new(*matrix),
        }
    }
}

fn validated_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!(
            "state parameter α must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(alpha)
}

/// The involutory change-of-basis matrix between the collective basis
/// (|e⟩, |+⟩, |−⟩, |g⟩) and the product basis (|ee⟩, |eg⟩, |ge⟩, |gg⟩):
/// columns are the collective states expressed in the product basis.
pub fn basis_change_matrix() -> CMatrix4 {
    let s = cr(std::f64::consts::FRAC_1_SQRT_2);
    let z = cr(0.0);
    let one = cr(1.0);
    CMatrix4::new(
        one, z, z, z, //
        z, s, s, z, //
        z, s, -s, z, //
        z, z, z, one,
    )
}

/// Transforms a collective-basis state into the product basis
/// (|ee⟩, |eg⟩, |ge⟩, |gg⟩). Unitary congruence: trace and spectrum are
/// preserved exactly.
pub fn dicke_basis_change(rho: &CollectiveDensityMatrix) -> CMatrix4 {
    let v = basis_change_matrix();
    v * rho.m * v.adjoint()
}

/// Inverse of [`dicke_basis_change`]: product-basis matrix → collective
/// basis (the basis-change matrix is its own inverse).
pub fn product_to_collective(m: &CMatrix4) -> CMatrix4 {
    let v = basis_change_matrix();
    v * m * v.adjoint()
}

/// Which closed-form variant of the two disputed coherence elements to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolutionBranch {
    /// Contractive element set: every coherence decays; agrees with the
    /// Lindblad integrator and preserves positivity.
    #[default]
    Corrected,
    /// Uncorrected variant kept for comparison: ρ_e− carries a growing
    /// exponent e^{+(3γ+Γ)t/2} and ρ_+− the opposite shift sign. It
    /// violates contractivity whenever those elements are populated and
    /// fails the integrator cross-check by design.
    Literal,
}

/// φ(z) = (1 − e^{−z})/z, the uniform bridge behind (e^{−pt}−e^{−qt})/(q−p);
/// φ(0) = 1, evaluated by series near zero to avoid cancellation.
fn phi_complex(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        // 1 − z/2 + z²/6 − z³/24 + z⁴/120; next term ~ |z|⁵/720 < 1e-18.
        let z2 = z * z;
        cr(1.0) - z * 0.5 + z2 / 6.0 - z2 * z / 24.0 + z2 * z2 / 120.0
    } else {
        (cr(1.0) - (-z).exp()) / z
    }
}

fn phi_real(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        -(-z).exp_m1() / z
    }
}

/// (e^{−p t} − e^{−q t})/(q − p) for real rates, continuous at p = q where
/// it equals t e^{−p t}. This is the population feeding profile of a level
/// drained at rate p and filled from one decaying at rate q.
pub fn decay_diff(p: f64, q: f64, t: f64) -> f64 {
    t * (-p * t).exp() * phi_real((q - p) * t)
}

/// Complex-rate version of [`decay_diff`] for coherence feeding terms.
fn decay_bridge(target: Complex64, source: Complex64, t: f64) -> Complex64 {
    (-target * t).exp() * t * phi_complex((source - target) * t)
}

fn validated_rates(rates: &RateSet) -> Result<(f64, f64, f64)> {
    let (g, cross, shift) = (
        rates.gamma,
        rates.collective_damping,
        rates.coherent_shift,
    );
    if !(g >= 0.0) || !g.is_finite() || !cross.is_finite() || !shift.is_finite() {
        return Err(Error::domain(format!(
            "rates must be finite with γ ≥ 0 (γ={g}, Γ={cross}, η={shift})"
        )));
    }
    if cross.abs() > g * (1.0 + 1e-12) {
        return Err(Error::NonPositiveRates { gamma: g, cross });
    }
    Ok((g, cross, shift))
}

/// Evolves a collective-basis state for a time `t ≥ 0` using the exact
/// closed-form element solutions (corrected branch; rotating frame).
///
/// The degenerate case |Γ| = γ is handled by the analytic limits of the
/// feeding terms, so separations d → 0 evaluate without special-casing.
pub fn evolve_closed_form(
    rho0: &CollectiveDensityMatrix,
    t: f64,
    rates: &RateSet,
) -> Result<CollectiveDensityMatrix> {
    evolve_closed_form_with(rho0, t, rates, SolutionBranch::Corrected)
}

/// [`evolve_closed_form`] with an explicit choice of solution branch.
pub fn evolve_closed_form_with(
    rho0: &CollectiveDensityMatrix,
    t: f64,
    rates: &RateSet,
    branch: SolutionBranch,
) -> Result<CollectiveDensityMatrix> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!(
            "evolution time must be finite and non-negative, got {t}"
        )));
    }
    let (g, cross, shift) = validated_rates(rates)?;
    let m0 = &rho0.m;
    let i_unit = c(0.0, 1.0);

    let sup = g + cross; // superradiant rate γ + Γ
    let sub = g - cross; // subradiant rate γ − Γ

    // Populations.
    let ee = m0[(0, 0)] * cr((-2.0 * g * t).exp());
    let pp = m0[(1, 1)] * cr((-sup * t).exp()) + m0[(0, 0)] * cr(sup * decay_diff(sup, 2.0 * g, t));
    let mm = m0[(2, 2)] * cr((-sub * t).exp()) + m0[(0, 0)] * cr(sub * decay_diff(sub, 2.0 * g, t));
    let gg = m0.trace() - ee - pp - mm;

    // Complex decay constants of the upper-triangle coherences.
    let lam_ep = cr(0.5 * (3.0 * g + cross)) - i_unit * shift;
    let lam_em_corrected = cr(0.5 * (3.0 * g - cross)) + i_unit * shift;
    let lam_em = match branch {
        SolutionBranch::Corrected => lam_em_corrected,
        SolutionBranch::Literal => cr(-0.5 * (3.0 * g + cross)) + i_unit * shift,
    };
    let lam_eg = cr(g);
    let lam_pm = match branch {
        SolutionBranch::Corrected => cr(g) + i_unit * (2.0 * shift),
        SolutionBranch::Literal => cr(g) - i_unit * (2.0 * shift),
    };
    let lam_pg = cr(0.5 * sup) + i_unit * shift;
    let lam_mg = cr(0.5 * sub) - i_unit * shift;

    let ep = m0[(0, 1)] * (-lam_ep * t).exp();
    let em = m0[(0, 2)] * (-lam_em * t).exp();
    let eg = m0[(0, 3)] * (-lam_eg * t).exp();
    let pm = m0[(1, 2)] * (-lam_pm * t).exp();
    // Single-excitation coherences are fed by the decay of the
    // doubly-excited coherences (always through the corrected exponent:
    // the literal branch replaces only the two elements above).
    let pg = m0[(1, 3)] * (-lam_pg * t).exp()
        + m0[(0, 1)] * cr(sup) * decay_bridge(lam_pg, lam_ep, t);
    let mg = m0[(2, 3)] * (-lam_mg * t).exp()
        - m0[(0, 2)] * cr(sub) * decay_bridge(lam_mg, lam_em_corrected, t);

    let mut out = CMatrix4::zeros();
    out[(0, 0)] = cr(ee.re);
    out[(1, 1)] = cr(pp.re);
    out[(2, 2)] = cr(mm.re);
    out[(3, 3)] = cr(gg.re);
    out[(0, 1)] = ep;
    out[(0, 2)] = em;
    out[(0, 3)] = eg;
    out[(1, 2)] = pm;
    out[(1, 3)] = pg;
    out[(2, 3)] = mg;
    out[(1, 0)] = ep.conj();
    out[(2, 0)] = em.conj();
    out[(3, 0)] = eg.conj();
    out[(2, 1)] = pm.conj();
    out[(3, 1)] = pg.conj();
    out[(3, 2)] = mg.conj();
    Ok(CollectiveDensityMatrix::new_unchecked(out))
}

/// Multiplies the coherences by the free-evolution phases that distinguish
/// the lab frame from the rotating frame at qubit gap `omega0`: level
/// energies are (+ω0, 0, 0, −ω0), so ρ_xy gains e^{−i(E_x−E_y)t}.
pub fn apply_lab_frame_phases(
    rho: &CollectiveDensityMatrix,
    omega0: f64,
    t: f64,
) -> CollectiveDensityMatrix {
    let energies = [omega0, 0.0, 0.0, -omega0];
    let mut m = rho.m;
    for (r, er) in energies.iter().enumerate() {
        for (col, ec) in energies.iter().enumerate() {
            let phase = c(0.0, -(er - ec) * t).exp();
            m[(r, col)] *= phase;
        }
    }
    CollectiveDensityMatrix::new_unchecked(m)
}

fn kron2(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> CMatrix4 {
    let mut out = CMatrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// The two-site ladder and population operators in the product basis
/// (|ee⟩, |eg⟩, |ge⟩, |gg⟩): returns (σ₊ per site, σ_z sum).
fn product_operators() -> ([CMatrix4; 2], CMatrix4) {
    let zero = cr(0.0);
    let one = cr(1.0);
    let raise = Matrix2::new(zero, one, zero, zero); // |e⟩⟨g| on one site
    let ident = Matrix2::identity();
    let sz = Matrix2::new(one, zero, zero, -one);
    let raise1 = kron2(&raise, &ident);
    let raise2 = kron2(&ident, &raise);
    let sz_total = kron2(&sz, &ident) + kron2(&ident, &sz);
    ([raise1, raise2], sz_total)
}

/// Right-hand side of the Lindblad master equation in the product basis:
/// coherent part from the qubit gap ω0 and the reservoir-mediated exchange
/// η, dissipative part from the damping matrix [[γ, Γ], [Γ, γ]].
pub fn lindblad_rhs(rho: &CMatrix4, rates: &RateSet, omega0: f64) -> Result<CMatrix4> {
    let (g, cross, shift) = validated_rates(rates)?;
    let ([raise1, raise2], sz_total) = product_operators();
    let lower1 = raise1.adjoint();
    let lower2 = raise2.adjoint();
    let i_unit = c(0.0, 1.0);

    // H/ħ = (ω0/2)(σ_z⊗1 + 1⊗σ_z) + η(σ₊¹σ₋² + σ₊²σ₋¹)
    let h = sz_total * cr(0.5 * omega0)
        + (raise1 * lower2 + raise2 * lower1) * cr(shift);
    let mut rhs = (h * rho - rho * h) * (-i_unit);

    let damping = [[g, cross], [cross, g]];
    let raises = [&raise1, &raise2];
    let lowers = [&lower1, &lower2];
    for i in 0..2 {
        for j in 0..2 {
            let r = cr(damping[i][j]);
            let jump = lowers[j] * rho * raises[i];
            let anti = raises[i] * lowers[j];
            rhs += (jump - (anti * rho + rho * anti) * cr(0.5)) * r;
        }
    }
    Ok(rhs)
}

/// Step-size and sampling controls for [`integrate_lindblad`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    /// Dimensionless step γ·dt (or, when γ = 0, the step relative to the
    /// fastest remaining rate). Default 1e-4.
    pub gamma_dt: f64,
    /// Number of equally spaced samples stored on [0, t_end] (≥ 2).
    pub sample_count: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            gamma_dt: 1e-4,
            sample_count: 201,
        }
    }
}

/// A time-ordered set of sampled states plus integration diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<CollectiveDensityMatrix>,
    max_trace_drift: f64,
    step_error_estimate: f64,
}

impl Trajectory {
    /// Sample times, strictly increasing.
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Sampled states (collective basis), aligned with [`Self::times`].
    pub fn states(&self) -> &[CollectiveDensityMatrix] {
        &self.states
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// True when the trajectory holds no samples.
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The last sampled state.
    pub fn final_state(&self) -> &CollectiveDensityMatrix {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest |trace − 1| observed along the run (logged, never
    /// renormalized away).
    pub fn max_trace_drift(&self) -> f64 {
        self.max_trace_drift
    }

    /// Richardson step-halving estimate of the global integration error
    /// (max element difference at t_end between the run step and its
    /// double, divided by 2⁴ − 1).
    pub fn step_error_estimate(&self) -> f64 {
        self.step_error_estimate
    }
}

type SuperOp = SMatrix<Complex64, 16, 16>;
type StateVec = SVector<Complex64, 16>;

/// Builds the 16×16 superoperator of [`lindblad_rhs`] acting on the
/// column-major vectorization of product-basis matrices.
fn lindblad_superoperator(rates: &RateSet, omega0: f64) -> Result<SuperOp> {
    let mut s = SuperOp::zeros();
    for col in 0..4 {
        for row in 0..4 {
            let mut basis = CMatrix4::zeros();
            basis[(row, col)] = cr(1.0);
            let image = lindblad_rhs(&basis, rates, omega0)?;
            let vec_index = 4 * col + row;
            for cc in 0..4 {
                for rr in 0..4 {
                    s[(4 * cc + rr, vec_index)] = image[(rr, cc)];
                }
            }
        }
    }
    Ok(s)
}

fn matrix_to_vec(m: &CMatrix4) -> StateVec {
    let mut v = StateVec::zeros();
    for col in 0..4 {
        for row in 0..4 {
            v[4 * col + row] = m[(row, col)];
        }
    }
    v
}

fn vec_to_matrix(v: &StateVec) -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    for col in 0..4 {
        for row in 0..4 {
            m[(row, col)] = v[4 * col + row];
        }
    }
    m
}

fn hermitize_vec(v: &mut StateVec) {
    for i in 0..4 {
        let d = v[4 * i + i];
        v[4 * i + i] = cr(d.re);
        for j in (i + 1)..4 {
            let upper = v[4 * j + i]; // element (i, j)
            let lower = v[4 * i + j]; // element (j, i)
            let mean = (upper + lower.conj()) * cr(0.5);
            v[4 * j + i] = mean;
            v[4 * i + j] = mean.conj();
        }
    }
}

fn vec_trace(v: &StateVec) -> Complex64 {
    v[0] + v[5] + v[10] + v[15]
}

fn rk4_step(s: &SuperOp, v: &StateVec, h: f64) -> StateVec {
    let k1 = s * v;
    let k2 = s * (v + k1 * cr(0.5 * h));
    let k3 = s * (v + k2 * cr(0.5 * h));
    let k4 = s * (v + k3 * cr(h));
    v + (k1 + k2 * cr(2.0) + k3 * cr(2.0) + k4) * cr(h / 6.0)
}

/// Integrates the Lindblad master equation with fixed-step RK4 from the
/// given collective-basis state, sampling `control.sample_count` states
/// uniformly on [0, t_end].
///
/// The state is re-Hermitized after every step; the trace is monitored and
/// its drift reported, never silently renormalized. A second pass at twice
/// the step provides a Richardson error estimate.
pub fn integrate_lindblad(
    rho0: &CollectiveDensityMatrix,
    t_end: f64,
    rates: &RateSet,
    omega0: f64,
    control: &StepControl,
) -> Result<Trajectory> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::domain(format!(
            "integration horizon must be positive, got {t_end}"
        )));
    }
    if !(control.gamma_dt > 0.0) {
        return Err(Error::domain("step control γ·dt must be positive".to_string()));
    }
    if control.sample_count < 2 {
        return Err(Error::domain("at least two samples are required".to_string()));
    }
    let (g, cross, shift) = validated_rates(rates)?;
    // Fastest rate appearing in the generator; γ·dt = gamma_dt when γ
    // dominates, with protection when coherent scales exceed it.
    let scale = g.max(cross.abs()).max(shift.abs()).max(omega0.abs());
    let dt_target = if scale > 0.0 {
        control.gamma_dt / scale
    } else {
        // Null generator: a single step per sample interval is exact.
        t_end
    };
    if !(dt_target > 0.0) || dt_target < 1e-300 {
        return Err(Error::Integration {
            t: 0.0,
            reason: format!("step size underflow (dt = {dt_target:.3e})"),
        });
    }

    let s = lindblad_superoperator(rates, omega0)?;
    let n_samples = control.sample_count;
    let sample_dt = t_end / (n_samples - 1) as f64;
    let steps_per_interval = (sample_dt / dt_target).ceil().max(1.0) as usize;
    let h = sample_dt / steps_per_interval as f64;

    let run = |h: f64, steps_per_interval: usize, collect: bool| -> Result<(Vec<StateVec>, f64)> {
        let mut v = matrix_to_vec(&dicke_basis_change(rho0));
        let trace0 = vec_trace(&v).re;
        let mut drift: f64 = 0.0;
        let mut samples = Vec::with_capacity(if collect { n_samples } else { 1 });
        if collect {
            samples.push(v);
        }
        for interval in 0..(n_samples - 1) {
            for _ in 0..steps_per_interval {
                v = rk4_step(&s, &v, h);
                hermitize_vec(&mut v);
                let tr_err = (vec_trace(&v).re - trace0).abs();
                drift = drift.max(tr_err);
                if tr_err > TRACE_DRIFT_ABORT {
                    return Err(Error::Integration {
                        t: (interval + 1) as f64 * sample_dt,
                        reason: format!("trace drifted by {tr_err:.3e}"),
                    });
                }
            }
            if collect {
                samples.push(v);
            }
        }
        if !collect {
            samples.push(v);
        }
        Ok((samples, drift))
    };

    let (samples, drift) = run(h, steps_per_interval, true)?;
    // Richardson estimate: same horizon at double step (half the count,
    // rounded up, keeps sample boundaries aligned).
    let coarse_steps = steps_per_interval.div_ceil(2);
    let coarse_h = sample_dt / coarse_steps as f64;
    let (coarse_final, _) = run(coarse_h, coarse_steps, false)?;
    let fine_final = vec_to_matrix(samples.last().expect("samples nonempty"));
    let coarse_final = vec_to_matrix(&coarse_final[0]);
    let mut est: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            est = est.max((fine_final[(i, j)] - coarse_final[(i, j)]).norm());
        }
    }
    est /= 15.0;

    let mut times = Vec::with_capacity(n_samples);
    let mut states = Vec::with_capacity(n_samples);
    for (idx, v) in samples.iter().enumerate() {
        let t = idx as f64 * sample_dt;
        let state =
            CollectiveDensityMatrix::new_unchecked(product_to_collective(&vec_to_matrix(v)));
        state.check_physical(TRAJECTORY_EIG_FLOOR).map_err(|e| Error::Integration {
            t,
            reason: e.to_string(),
        })?;
        times.push(t);
        states.push(state);
    }
    Ok(Trajectory {
        times,
        states,
        max_trace_drift: drift,
        step_error_estimate: est,
    })
}
