//! Two-qutrit quantum Rabi model toolkit.
//!
//! The crate builds the full two-qutrit/one-mode Hamiltonian and its
//! symmetry-reduced blocks, carries every closed-form eigensolution the
//! symmetric parameter regimes admit, and runs the two headline scans:
//! the ground-state level-crossing phase diagram over (Ω/γ, λ²/γω) and
//! the superradiant quantum-phase-transition sweep over the control
//! parameter g = λ/√(ωγ).
//!
//! Layout:
//! * [`ops`] — spin-1/Pauli/boson operators, displacement and squeeze
//!   unitaries, tensor products;
//! * [`model`] — parameters, presets, full and effective Hamiltonians;
//! * [`symmetry`] — the constant of motion K = cos(πΣᵗᵒᵗᶻ), sector bases,
//!   projections;
//! * [`spectra`] — dense and banded Hermitian eigensolvers, convergence
//!   control;
//! * [`analytic`] — closed-form eigenpairs, crossing lines, triple points,
//!   QPT ground states and order parameters;
//! * [`observables`] — reduced density matrices, negativity,
//!   magnetizations, photon statistics;
//! * [`scan`] — grid scans, CSV/JSON output, critical-point estimation;
//! * [`validate`] — the acceptance suite driven by `qutrit-rabi validate`
//!   and the integration tests.

pub mod analytic;
pub mod error;
pub mod model;
pub mod observables;
pub mod ops;
pub mod scan;
pub mod spectra;
pub mod symmetry;
pub mod validate;

pub use error::{Error, Result};
pub use model::{ModelParams, Phase, QptParams};
pub use ops::{QMatrix, StateVector, Truncation};
