// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Condensate and qubit parameters, Bogoliubov excitations on a dark
//! soliton, soliton-bound impurity states, and the impurity–phonon
//! coupling amplitude.
//!
//! Each dark soliton traps an impurity whose two lowest bound states form a
//! qubit with gap `ω0 = ħ(2ν−1)/(2mξ²)`; the Bogoliubov phonons of the
//! surrounding condensate form the dissipative reservoir. All routines
//! accept either natural-unit or SI parameter sets: internally everything
//! is reduced to the dimensionless variables `κ = kξ`, `y = (x−x_i)/ξ`,
//! `E = ε/μ`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::adaptive_simpson_complex;

/// Lower wavenumber cutoff, in units of `1/ξ`, used by integrals that must
/// exclude the singular `k = 0` mode.
pub const KAPPA_MIN: f64 = 1e-6;

/// Half-width, in units of `ξ`, of the spatial quadrature window for
/// coupling matrix elements; `sech²(40) ≈ 1e-34` is far below tolerance.
pub const SPATIAL_WINDOW: f64 = 40.0;

/// Absolute tolerance of the dimensionless coupling quadrature.
pub const COUPLING_QUAD_TOL: f64 = 1e-10;

/// Bulk condensate parameters plus the impurity–condensate coupling.
///
/// `hbar` is explicit so natural-unit (`ħ = m = 1`) and SI parameter sets
/// are both expressible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateParams {
    /// Reduced Planck constant (action units).
    pub hbar: f64,
    /// Condensate atom mass.
    pub atom_mass: f64,
    /// Linear density n0 (atoms per length).
    pub linear_density: f64,
    /// Atom–atom repulsion strength g (energy·length).
    pub interaction_g: f64,
    /// Impurity–atom coupling χ (energy·length); zero disables the qubit–
    /// phonon coupling entirely.
    pub coupling_chi: f64,
}

impl CondensateParams {
    /// Validated constructor.
    pub fn new(
        hbar: f64,
        atom_mass: f64,
        linear_density: f64,
        interaction_g: f64,
        coupling_chi: f64,
    ) -> Result<Self> {
        let p = CondensateParams {
            hbar,
            atom_mass,
            linear_density,
            interaction_g,
            coupling_chi,
        };
        p.validate()?;
        Ok(p)
    }

    /// Natural-unit parameter set (`ħ = m = n0 = g = 1`, so `ξ = μ = 1`)
    /// with χ chosen to realize the requested bound-state parameter ν.
    pub fn natural(nu: f64) -> Result<Self> {
        let chi = chi_for_bound_parameter(nu, 1.0)?;
        CondensateParams::new(1.0, 1.0, 1.0, 1.0, chi)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("hbar", self.hbar),
            ("atom_mass", self.atom_mass),
            ("linear_density", self.linear_density),
            ("interaction_g", self.interaction_g),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.coupling_chi >= 0.0) || !self.coupling_chi.is_finite() {
            return Err(Error::domain(format!(
                "coupling_chi must be non-negative, got {}",
                self.coupling_chi
            )));
        }
        Ok(())
    }

    /// Healing length `ξ = ħ/√(m n0 g)`.
    pub fn healing_length(&self) -> f64 {
        self.hbar / (self.atom_mass * self.linear_density * self.interaction_g).sqrt()
    }

    /// Chemical potential `μ = g n0`.
    pub fn chemical_potential(&self) -> f64 {
        self.interaction_g * self.linear_density
    }

    /// Dimensionless atoms-per-healing-length `n0 ξ`.
    pub fn density_per_healing_length(&self) -> f64 {
        self.linear_density * self.healing_length()
    }

    /// Bound-state parameter ν derived from χ/g.
    pub fn bound_parameter(&self) -> Result<f64> {
        bound_state_parameter(self.coupling_chi, self.interaction_g)
    }

    /// Equivalent natural-unit parameter set: same ν and same `n0 ξ`, with
    /// `ξ = μ = ħ = m = 1`. All dimensionless physics (mode shapes, rate
    /// ratios) is invariant under this reduction.
    pub fn to_natural(&self) -> Result<CondensateParams> {
        let n0xi = self.density_per_healing_length();
        let g = 1.0 / n0xi;
        let chi = (self.coupling_chi / self.interaction_g) * g;
        CondensateParams::new(1.0, 1.0, n0xi, g, chi)
    }
}

/// Which of the two qubits a per-qubit quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QubitIndex {
    /// The qubit centered at `x1 = −d/2`.
    First,
    /// The qubit centered at `x2 = +d/2`.
    Second,
}

/// The two dark-soliton qubits: separation, centers, bound-state parameter
/// and the common gap frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPair {
    /// Center-to-center separation d (length units).
    pub separation: f64,
    /// Bound-state parameter ν (dimensionless), derived from χ/g.
    pub nu: f64,
    /// Gap angular frequency ω0 = ħ(2ν−1)/(2mξ²); positive by construction.
    pub gap: f64,
}

impl QubitPair {
    /// Builds the pair for a given separation, deriving ν and ω0 from the
    /// condensate parameters. Fails when the derived gap is not positive
    /// (ν ≤ 1/2 supports no two-level qubit).
    pub fn new(separation: f64, params: &CondensateParams) -> Result<Self> {
        if !(separation > 0.0) || !separation.is_finite() {
            return Err(Error::domain(format!(
                "separation must be positive, got {separation}"
            )));
        }
        let nu = params.bound_parameter()?;
        let gap = qubit_gap(nu, params.atom_mass, params.healing_length(), params.hbar)?;
        if !(gap > 0.0) {
            return Err(Error::domain(format!(
                "gap frequency must be positive for a qubit; ν = {nu} gives ω0 = {gap}"
            )));
        }
        Ok(QubitPair {
            separation,
            nu,
            gap,
        })
    }

    /// Center position of the requested qubit (`x1 = −d/2`, `x2 = +d/2`).
    pub fn center(&self, which: QubitIndex) -> f64 {
        match which {
            QubitIndex::First => -0.5 * self.separation,
            QubitIndex::Second => 0.5 * self.separation,
        }
    }
}

/// Healing length `ξ = ħ/√(m n0 g)` with domain validation.
pub fn healing_length(params: &CondensateParams) -> Result<f64> {
    params.validate()?;
    Ok(params.healing_length())
}

/// Bound-state parameter `ν = −1 + √(1 + 4χ/g)` controlling how many
/// impurity states the soliton binds.
pub fn bound_state_parameter(chi: f64, g: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::domain(format!("interaction g must be positive, got {g}")));
    }
    if !(chi >= 0.0) {
        return Err(Error::domain(format!("coupling χ must be non-negative, got {chi}")));
    }
    Ok(-1.0 + (1.0 + 4.0 * chi / g).sqrt())
}

/// Inverse of [`bound_state_parameter`]: the χ realizing a requested ν.
pub fn chi_for_bound_parameter(nu: f64, g: f64) -> Result<f64> {
    if !(g > 0.0) {
        return Err(Error::domain(format!("interaction g must be positive, got {g}")));
    }
    if !(nu >= 0.0) {
        return Err(Error::domain(format!("ν must be non-negative, got {nu}")));
    }
    Ok(g * nu * (nu + 2.0) / 4.0)
}

/// True exactly when ν lies in the two-bound-state window `0.33 ≤ ν < 0.80`
/// where the soliton traps a well-defined two-level system.
pub fn qubit_regime(nu: f64) -> bool {
    (0.33..0.80).contains(&nu)
}

/// Qubit gap angular frequency `ω0 = ħ(2ν−1)/(2mξ²)`.
///
/// The value is negative for ν < 1/2; callers that need a qubit must check
/// the sign (see [`QubitPair::new`]).
pub fn qubit_gap(nu: f64, mass: f64, xi: f64, hbar: f64) -> Result<f64> {
    if !(xi > 0.0) || !(mass > 0.0) || !(hbar > 0.0) {
        return Err(Error::domain(
            "qubit_gap requires positive ξ, m, ħ".to_string(),
        ));
    }
    Ok(hbar * (2.0 * nu - 1.0) / (2.0 * mass * xi * xi))
}

/// Bogoliubov dispersion `ε_k = μ ξ √(k²(ξ²k² + 2))` (energy units).
pub fn bogoliubov_dispersion(k: f64, params: &CondensateParams) -> f64 {
    let xi = params.healing_length();
    let mu = params.chemical_potential();
    let kappa2 = (k * xi) * (k * xi);
    mu * (kappa2 * (kappa2 + 2.0)).sqrt()
}

/// Dimensionless dispersion `E(κ) = ε/μ = |κ|√(κ² + 2)`.
pub fn dispersion_natural(kappa: f64) -> f64 {
    (kappa * kappa * (kappa * kappa + 2.0)).sqrt()
}

/// Dimensionless group slope `dE/dκ = (2κ² + 2)/√(κ² + 2)` for κ > 0.
pub fn dispersion_slope_natural(kappa: f64) -> f64 {
    (2.0 * kappa * kappa + 2.0) / (kappa * kappa + 2.0).sqrt()
}

/// The positive wavenumber resonant with ω0: `ε_{k0} = ħω0`, inverted in
/// closed form as `(ξk0)² = −1 + √(1 + (ħω0/μ)²)`, evaluated in the
/// algebraically equivalent form `w²/(1 + √(1 + w²))` that stays accurate
/// as w → 0 (the naive form loses all digits to cancellation there).
pub fn resonant_wavenumber(omega0: f64, params: &CondensateParams) -> Result<f64> {
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(Error::NoResonance { omega: omega0 });
    }
    let w = params.hbar * omega0 / params.chemical_potential();
    let kappa0 = w / (1.0 + (1.0 + w * w).sqrt()).sqrt();
    Ok(kappa0 / params.healing_length())
}

fn mode_prefactor(k: f64, params: &CondensateParams) -> Result<(f64, f64, f64)> {
    if k == 0.0 {
        return Err(Error::domain(
            "k = 0 Bogoliubov mode is singular (ε_k = 0)".to_string(),
        ));
    }
    let xi = params.healing_length();
    let kappa = k * xi;
    let energy = dispersion_natural(kappa); // ε/μ > 0 for k ≠ 0
    let amp = (1.0 / (4.0 * PI * xi)).sqrt() / energy;
    Ok((kappa, energy, amp))
}

/// Bogoliubov mode amplitude `u_k(x)` around a soliton centered at `center`:
/// `e^{ik(x−x_i)} √(1/4πξ) (μ/ε_k) [(κ² + 2ε/μ)(κ/2 + i tanh y) + κ sech²y]`.
pub fn mode_u(k: f64, x: f64, center: f64, params: &CondensateParams) -> Result<Complex64> {
    let (kappa, energy, amp) = mode_prefactor(k, params)?;
    let y = (x - center) / params.healing_length();
    let phase = Complex64::new(0.0, kappa * y).exp();
    let bracket = Complex64::new(0.5 * kappa, y.tanh()) * (kappa * kappa + 2.0 * energy)
        + kappa / (y.cosh() * y.cosh());
    Ok(phase * amp * bracket)
}

/// Bogoliubov mode amplitude `v_k(x)`:
/// `e^{−ik(x−x_i)} √(1/4πξ) (μ/ε_k) [(κ² − 2ε/μ)(κ/2 + i tanh y) + κ sech²y]`.
pub fn mode_v(k: f64, x: f64, center: f64, params: &CondensateParams) -> Result<Complex64> {
    let (kappa, energy, amp) = mode_prefactor(k, params)?;
    let y = (x - center) / params.healing_length();
    let phase = Complex64::new(0.0, -kappa * y).exp();
    let bracket = Complex64::new(0.5 * kappa, y.tanh()) * (kappa * kappa - 2.0 * energy)
        + kappa / (y.cosh() * y.cosh());
    Ok(phase * amp * bracket)
}

/// Far-field phonon density `|u|² − |v|²` of the printed mode amplitudes,
/// in closed form: `(1/4πξ) · 2κ(κ² + 4)/√(κ² + 2)` for κ > 0.
///
/// Note this is κ-dependent: the printed amplitudes do not carry a
/// κ-independent continuum normalization, so all absolute rate scales are
/// routed through the calibrated prefactor in the rates layer.
pub fn far_field_density(k: f64, params: &CondensateParams) -> Result<f64> {
    if k == 0.0 {
        return Err(Error::domain("k = 0 mode is singular".to_string()));
    }
    let xi = params.healing_length();
    let kappa = (k * xi).abs();
    Ok(2.0 * kappa * (kappa * kappa + 4.0)
        / ((kappa * kappa + 2.0).sqrt() * 4.0 * PI * xi))
}

/// Impurity bound state `φ_n` inside the soliton at `center`:
/// `φ0 = sech(y)/√(2ξ)`, `φ1 = i√3 tanh(y) φ0`.
pub fn impurity_state(n: usize, x: f64, center: f64, xi: f64) -> Result<Complex64> {
    if !(xi > 0.0) {
        return Err(Error::domain(format!("ξ must be positive, got {xi}")));
    }
    let y = (x - center) / xi;
    let ground = 1.0 / (y.cosh() * (2.0 * xi).sqrt());
    match n {
        0 => Ok(Complex64::new(ground, 0.0)),
        1 => Ok(Complex64::new(0.0, 3.0_f64.sqrt() * y.tanh() * ground)),
        _ => Err(Error::domain(format!(
            "impurity level n = {n} outside the two-level truncation"
        ))),
    }
}

/// Interband qubit–phonon coupling `g^{(i)}(k)`: the matrix element
/// `√n0 χ ∫ dx φ1*(x) φ0(x) tanh((x−x_i)/ξ) u_k(x)` evaluated by adaptive
/// quadrature, times the plane-wave registration phase `e^{i k x_i}` that
/// carries the relative phase between the two qubit sites.
pub fn coupling_g(
    k: f64,
    which: QubitIndex,
    params: &CondensateParams,
    pair: &QubitPair,
) -> Result<Complex64> {
    if k == 0.0 {
        return Err(Error::domain(
            "k = 0 Bogoliubov mode is singular (ε_k = 0)".to_string(),
        ));
    }
    let xi = params.healing_length();
    let kappa = k * xi;
    let local = coupling_local_natural(kappa)?;
    let scale = params.coupling_chi * (params.linear_density / xi).sqrt();
    let center = pair.center(which);
    let phase = Complex64::new(0.0, k * center).exp();
    Ok(local * scale * phase)
}

/// Dimensionless local coupling integral
/// `∫ dy φ1*(y) φ0(y) tanh(y) u_κ(y)` evaluated in natural units
/// (ξ = μ = 1); multiply by `χ √(n0/ξ)` for the physical matrix element.
pub fn coupling_local_natural(kappa: f64) -> Result<Complex64> {
    if kappa == 0.0 {
        return Err(Error::domain(
            "k = 0 Bogoliubov mode is singular (ε_k = 0)".to_string(),
        ));
    }
    // Unit-free parameter set: ξ = μ = 1; χ and n0 scale out of the
    // integral entirely, so any positive values serve.
    let natural = CondensateParams {
        hbar: 1.0,
        atom_mass: 1.0,
        linear_density: 1.0,
        interaction_g: 1.0,
        coupling_chi: 0.0,
    };
    adaptive_simpson_complex(
        |y| {
            let phi1 = impurity_state(1, y, 0.0, 1.0).expect("two-level index");
            let phi0 = impurity_state(0, y, 0.0, 1.0).expect("two-level index");
            let u = mode_u(kappa, y, 0.0, &natural).expect("k validated nonzero");
            phi1.conj() * phi0 * y.tanh() * u
        },
        -SPATIAL_WINDOW,
        SPATIAL_WINDOW,
        COUPLING_QUAD_TOL,
    )
}

/// Closed-form magnitude structure of the local coupling integral,
/// `G(κ)` with `coupling_local_natural(κ) = −i √(3/16π) G(κ)`:
/// `G = πκ²P/(120 E sinh(πκ/2))`,
/// `P = 16 − 20κ² − 6κ⁴ − 10Eκ² − 40E`.
///
/// Derived analytically from the Fourier transforms of sech-family
/// envelopes; serves as the independent oracle for the quadrature path.
pub fn coupling_shape_closed_form(kappa: f64) -> f64 {
    let e = dispersion_natural(kappa);
    let k2 = kappa * kappa;
    let p = 16.0 - 20.0 * k2 - 6.0 * k2 * k2 - 10.0 * e * k2 - 40.0 * e;
    PI * k2 * p / (120.0 * e * (PI * kappa / 2.0).sinh())
}
