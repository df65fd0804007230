// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Error type shared by all library modules.

use thiserror::Error;

/// Errors produced by the physics, rates, dynamics and entanglement layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input parameter lies outside its physical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested frequency lies outside the phonon band, so no
    /// resonant wavenumber exists.
    #[error("no resonant phonon mode for frequency {omega}")]
    NoResonance { omega: f64 },

    /// A quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    /// A matrix expected to be a valid density matrix is not.
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    /// The damping matrix built from the supplied rates is not positive
    /// semidefinite, so the generator is not completely positive.
    #[error("rates violate positivity: gamma={gamma}, cross={cross}")]
    NonPositiveRates { gamma: f64, cross: f64 },

    /// The integrator detected a violated invariant (trace drift,
    /// positivity loss) beyond its tolerance.
    #[error("integration failed at t={t}: {reason}")]
    Integration { t: f64, reason: String },

    /// A numerical routine produced a result outside its guaranteed range.
    #[error("numerical error: {0}")]
    Numerical(String),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a domain-violation error.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
