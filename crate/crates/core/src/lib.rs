// Copyright 2026 Soliq Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dissipative entanglement dynamics of two dark-soliton qubits sharing a
//! Bogoliubov-phonon reservoir in a quasi-1D Bose–Einstein condensate.
//!
//! The crate is organised bottom-up:
//!
//! * [`quad`] — deterministic quadrature primitives (adaptive Simpson,
//!   principal-value integration by symmetric pairing).
//! * [`linalg`] — small complex-matrix helpers (Hermitian eigensystems,
//!   PSD square roots, basis changes).
//! * [`physics`] — condensate and qubit parameters, Bogoliubov dispersion
//!   and mode functions, soliton bound states, and the qubit–phonon
//!   coupling amplitude.
//! * [`rates`] — spontaneous and collective decay rates and the coherent
//!   dipole-like shift as functions of qubit separation.
//! * [`dynamics`] — the collective-basis density matrix, exact closed-form
//!   propagation, and a Lindblad master-equation integrator.
//! * [`entanglement`] — Wootters concurrence, closed-form concurrence
//!   bounds, sudden-death/revival time estimates and event detection.
//!
//! Internally all physics is computed in natural units (lengths in units of
//! the healing length, energies in units of the chemical potential); the
//! parameter types carry the conversions to and from SI.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod physics;
pub mod quad;
pub mod rates;

pub use error::{Error, Result};
