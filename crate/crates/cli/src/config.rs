// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration: declarative TOML (or JSON) files resolved into
//! validated physical parameters. All internal computation runs in the
//! scenario's own unit system; natural units (ħ = m = ξ = μ = 1) are the
//! default and SI enters only through `mode = "si"`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use soliq_core::physics::{chi_for_bound_parameter, CondensateParams, QubitPair};
use soliq_core::rates::{RateKernel, RateOptions, RateSet};

use crate::error::{CliError, Result};

/// Reduced Planck constant in SI units (J·s).
pub const HBAR_SI: f64 = 1.054571817e-34;

/// Parsed scenario file. Every block except `condensate` is optional so
/// one format serves all subcommands; each command validates the blocks it
/// needs. Unknown keys are rejected to catch typos early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Config schema version; defaults to 1 and only 1 is accepted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<u32>,
    pub condensate: CondensateConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<RatesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<EstimateConfig>,
}

/// Unit system of the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    /// ħ = m = 1 with the interaction normalized so ξ = μ = 1.
    Natural,
    /// SI throughout: mass in kg, density in 1/m, energies via
    /// `chemical_potential_hz` (μ/2πħ).
    Si,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondensateConfig {
    pub mode: UnitMode,
    /// Atom mass (kg in SI mode; defaults to 1 in natural mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Linear density n0 (1/m in SI mode; in natural mode this is the
    /// dimensionless atoms-per-healing-length, default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Atom–atom repulsion g. Give at most one of {interaction_g,
    /// chemical_potential, chemical_potential_hz}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interaction_g: Option<f64>,
    /// Chemical potential μ in natural-mode energy units.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chemical_potential: Option<f64>,
    /// Chemical potential as a frequency μ/2πħ in Hz (SI mode only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chemical_potential_hz: Option<f64>,
    /// Impurity–atom coupling χ. Give exactly one of {coupling_chi,
    /// bound_parameter}.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_chi: Option<f64>,
    /// Soliton bound-state parameter ν ∈ (1/2, 1) determining χ/g.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_parameter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    /// Qubit separation d in units of the healing length ξ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
    /// Separation grid (for rate sweeps), in units of ξ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: InitialKind,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialKind {
    /// √α|e⟩ + √(1−α)|g⟩.
    Entangled,
    /// (1/3)·diag(α, 2, 0, 1−α) in the collective basis.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RatesConfig {
    /// Zero the collective rates (Γ = η = 0), keeping the kernel's γ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub force_independent: Option<bool>,
    /// Gaussian resonance-window width σ in units of 1/ξ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonance_width: Option<f64>,
    /// Dimensionless prefactor of the spontaneous rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_prefactor: Option<f64>,
    /// Reservoir-mode cutoff in units of 1/ξ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<f64>,
    /// Fine integration step of the window kernel in units of 1/ξ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    /// Direct rate injection: bypasses the condensate kernel entirely.
    /// `gamma_override` must come with the other two (which default to 0).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collective_override: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Horizon in units of 1/γ (default 10).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_end: Option<f64>,
    /// Number of uniform samples on [0, t_end] (default 201).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Integrator step γ·dt (default 1e-4).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_dt: Option<f64>,
    /// Evolve in the lab frame (free phases at the qubit gap) instead of
    /// the rotating frame (default false).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lab_frame: Option<bool>,
    /// Maximum allowed element-wise deviation between the closed-form and
    /// integrated trajectories (default 1e-6).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_tol: Option<f64>,
}

impl RunConfig {
    pub fn t_end(&self) -> f64 {
        self.t_end.unwrap_or(10.0)
    }
    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(201)
    }
    pub fn gamma_dt(&self) -> f64 {
        self.gamma_dt.unwrap_or(1e-4)
    }
    pub fn lab_frame(&self) -> bool {
        self.lab_frame.unwrap_or(false)
    }
    pub fn oracle_tol(&self) -> f64 {
        self.oracle_tol.unwrap_or(1e-6)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Filename prefix for artifacts (default: the subcommand name).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    /// Target qubit gap ω0/2π in Hz; μ is fitted to realize it (default 500).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_gap_hz: Option<f64>,
    /// Near-qubit scenario: separation in ξ (default 1.2) and α (default 0.5).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_separation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_alpha: Option<f64>,
    /// Far scenario: separation in ξ (default 5.0) and α (default 0.9).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub far_separation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub far_alpha: Option<f64>,
    /// Event-detection horizon in units of 1/γ (default 12).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    /// Samples for the event series (default 1201).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl EstimateConfig {
    pub fn target_gap_hz(&self) -> f64 {
        self.target_gap_hz.unwrap_or(500.0)
    }
    pub fn near_separation(&self) -> f64 {
        self.near_separation.unwrap_or(1.2)
    }
    pub fn near_alpha(&self) -> f64 {
        self.near_alpha.unwrap_or(0.5)
    }
    pub fn far_separation(&self) -> f64 {
        self.far_separation.unwrap_or(5.0)
    }
    pub fn far_alpha(&self) -> f64 {
        self.far_alpha.unwrap_or(0.9)
    }
    pub fn horizon(&self) -> f64 {
        self.horizon.unwrap_or(12.0)
    }
    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(1201)
    }
}

impl ScenarioConfig {
    /// Loads and validates a scenario file. TOML is tried first; files
    /// that fail TOML parsing (or end in `.json`) are parsed as JSON.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let parsed: ScenarioConfig = if is_json {
            serde_json::from_str(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        } else {
            match toml::from_str(&text) {
                Ok(cfg) => cfg,
                Err(toml_err) => serde_json::from_str(&text).map_err(|_| {
                    CliError::config(format!("{}: {toml_err}", path.display()))
                })?,
            }
        };
        parsed.validate()?;
        Ok(parsed)
    }

    /// Structural validation shared by every subcommand.
    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.schema {
            if v != 1 {
                return Err(CliError::config(format!(
                    "unsupported config schema {v} (expected 1)"
                )));
            }
        }
        self.condensate.validate()?;
        if let Some(pair) = &self.pair {
            pair.validate()?;
        }
        if let Some(initial) = &self.initial {
            initial.validate()?;
        }
        if let Some(rates) = &self.rates {
            rates.validate()?;
        }
        if let Some(run) = &self.run {
            run.validate()?;
        }
        Ok(())
    }
}

impl CondensateConfig {
    fn validate(&self) -> Result<()> {
        // Exactly one of {χ, ν}.
        match (self.coupling_chi, self.bound_parameter) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "condensate: give exactly one of coupling_chi or bound_parameter, not both",
                ))
            }
            (None, None) => {
                return Err(CliError::config(
                    "condensate: give exactly one of coupling_chi or bound_parameter",
                ))
            }
            _ => {}
        }
        // At most one way to set the energy scale.
        let energy_fields = [
            ("interaction_g", self.interaction_g.is_some()),
            ("chemical_potential", self.chemical_potential.is_some()),
            ("chemical_potential_hz", self.chemical_potential_hz.is_some()),
        ];
        let given: Vec<&str> = energy_fields
            .iter()
            .filter(|(_, s)| *s)
            .map(|(n, _)| *n)
            .collect();
        if given.len() > 1 {
            return Err(CliError::config(format!(
                "condensate: give exactly one of interaction_g or a chemical potential (got {})",
                given.join(", ")
            )));
        }
        match self.mode {
            UnitMode::Natural => {
                if self.chemical_potential_hz.is_some() {
                    return Err(CliError::config(
                        "condensate: chemical_potential_hz is an SI-mode field; use \
                         chemical_potential in natural mode",
                    ));
                }
            }
            UnitMode::Si => {
                if self.chemical_potential.is_some() {
                    return Err(CliError::config(
                        "condensate: use chemical_potential_hz (Hz) in SI mode",
                    ));
                }
                if self.mass.is_none() || self.density.is_none() {
                    return Err(CliError::config(
                        "condensate: SI mode requires mass (kg) and density (1/m)",
                    ));
                }
                if given.is_empty() {
                    return Err(CliError::config(
                        "condensate: SI mode requires interaction_g or chemical_potential_hz",
                    ));
                }
            }
        }
        for (name, v) in [
            ("mass", self.mass),
            ("density", self.density),
            ("interaction_g", self.interaction_g),
            ("chemical_potential", self.chemical_potential),
            ("chemical_potential_hz", self.chemical_potential_hz),
            ("coupling_chi", self.coupling_chi),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(CliError::config(format!(
                        "condensate: {name} must be positive and finite, got {v}"
                    )));
                }
            }
        }
        if let Some(nu) = self.bound_parameter {
            if !(nu > 0.5 && nu < 1.0) {
                return Err(CliError::config(format!(
                    "condensate: bound_parameter must lie in (1/2, 1) for a two-level qubit, \
                     got {nu}"
                )));
            }
        }
        Ok(())
    }

    /// Resolves the block into validated physical parameters in the
    /// scenario's unit system.
    pub fn resolve(&self) -> Result<CondensateParams> {
        let (hbar, mass, density) = match self.mode {
            UnitMode::Natural => (1.0, self.mass.unwrap_or(1.0), self.density.unwrap_or(1.0)),
            UnitMode::Si => (HBAR_SI, self.mass.unwrap(), self.density.unwrap()),
        };
        let interaction_g = match (self.mode, self.interaction_g) {
            (_, Some(g)) => g,
            (UnitMode::Natural, None) => {
                // μ = g·n0; default μ = 1 keeps ξ = μ = 1.
                self.chemical_potential.unwrap_or(1.0) / density
            }
            (UnitMode::Si, None) => {
                let mu = std::f64::consts::TAU * hbar * self.chemical_potential_hz.unwrap();
                mu / density
            }
        };
        let chi = match (self.coupling_chi, self.bound_parameter) {
            (Some(chi), None) => chi,
            (None, Some(nu)) => chi_for_bound_parameter(nu, interaction_g)
                .map_err(|e| CliError::config(e.to_string()))?,
            _ => unreachable!("validated exactly-one-of"),
        };
        CondensateParams::new(hbar, mass, density, interaction_g, chi)
            .map_err(|e| CliError::config(e.to_string()))
    }
}

impl PairConfig {
    fn validate(&self) -> Result<()> {
        if let Some(d) = self.separation {
            if !(d > 0.0) || !d.is_finite() {
                return Err(CliError::config(format!(
                    "pair: separation must be positive, got {d}"
                )));
            }
        }
        if let Some(grid) = &self.grid {
            if !(grid.start > 0.0) || !(grid.stop > grid.start) || grid.points < 2 {
                return Err(CliError::config(
                    "pair.grid: need 0 < start < stop and at least 2 points",
                ));
            }
        }
        Ok(())
    }

    pub fn require_separation(&self) -> Result<f64> {
        self.separation
            .ok_or_else(|| CliError::config("pair: separation (in units of ξ) is required"))
    }

    pub fn require_grid(&self) -> Result<&GridConfig> {
        self.grid
            .as_ref()
            .ok_or_else(|| CliError::config("pair.grid: a separation grid is required"))
    }
}

impl InitialConfig {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(CliError::config(format!(
                "initial: alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

impl RatesConfig {
    fn validate(&self) -> Result<()> {
        let has_override = self.gamma_override.is_some();
        if (self.collective_override.is_some() || self.shift_override.is_some()) && !has_override {
            return Err(CliError::config(
                "rates: collective_override/shift_override require gamma_override",
            ));
        }
        if has_override && self.force_independent == Some(true) {
            return Err(CliError::config(
                "rates: force_independent and explicit overrides are mutually exclusive",
            ));
        }
        if let Some(g) = self.gamma_override {
            if !(g > 0.0) || !g.is_finite() {
                return Err(CliError::config(format!(
                    "rates: gamma_override must be positive, got {g}"
                )));
            }
        }
        Ok(())
    }

    pub fn force_independent(&self) -> bool {
        self.force_independent.unwrap_or(false)
    }

    /// Kernel options with scenario overrides applied.
    pub fn kernel_options(&self) -> Result<RateOptions> {
        let defaults = RateOptions::default();
        let opts = RateOptions {
            resonance_width: self.resonance_width.unwrap_or(defaults.resonance_width),
            rate_prefactor: self.rate_prefactor.unwrap_or(defaults.rate_prefactor),
            k_max: self.k_max.unwrap_or(defaults.k_max),
            grid_step: self.grid_step.unwrap_or(defaults.grid_step),
        };
        opts.validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        Ok(opts)
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if !(self.t_end() > 0.0) {
            return Err(CliError::config("run: t_end must be positive"));
        }
        if self.samples() < 2 {
            return Err(CliError::config("run: at least two samples are required"));
        }
        if !(self.gamma_dt() > 0.0) {
            return Err(CliError::config("run: gamma_dt must be positive"));
        }
        if !(self.oracle_tol() > 0.0) {
            return Err(CliError::config("run: oracle_tol must be positive"));
        }
        Ok(())
    }
}

/// A scenario resolved to the physical objects the commands consume.
pub struct ResolvedScenario {
    pub pair: QubitPair,
    /// Healing length in the scenario's length units.
    pub xi: f64,
    /// Separation in units of ξ.
    pub separation_xi: f64,
    /// Rates at the pair separation (after force_independent/overrides).
    pub rates: RateSet,
    /// The kernel, when the rates came from the condensate (absent for
    /// direct overrides).
    pub kernel: Option<RateKernel>,
}

/// Builds parameters, pair, and rates for a single-separation scenario.
pub fn resolve_single(config: &ScenarioConfig) -> Result<ResolvedScenario> {
    let params = config.condensate.resolve()?;
    let xi = params.healing_length();
    let pair_cfg = config
        .pair
        .as_ref()
        .ok_or_else(|| CliError::config("a [pair] block is required"))?;
    let separation_xi = pair_cfg.require_separation()?;
    let pair = QubitPair::new(separation_xi * xi, &params)
        .map_err(|e| CliError::config(e.to_string()))?;

    let rates_cfg = config.rates.clone().unwrap_or_default();
    let (rates, kernel) = if let Some(gamma) = rates_cfg.gamma_override {
        let rates = RateSet::from_values(
            gamma,
            rates_cfg.collective_override.unwrap_or(0.0),
            rates_cfg.shift_override.unwrap_or(0.0),
        )
        .map_err(|e| CliError::config(e.to_string()))?;
        (rates, None)
    } else {
        let opts = rates_cfg.kernel_options()?;
        let kernel = RateKernel::new(&params, &pair, &opts)
            .map_err(|e| CliError::config(e.to_string()))?;
        let mut rates = kernel.rate_set(separation_xi * xi)?;
        if rates_cfg.force_independent() {
            rates = RateSet::from_values(rates.gamma, 0.0, 0.0)?;
        }
        (rates, Some(kernel))
    };
    Ok(ResolvedScenario {
        pair,
        xi,
        separation_xi,
        rates,
        kernel,
    })
}
