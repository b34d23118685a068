//! Quantum Rayleigh collision model.
//!
//! A target qubit `S` is struck at Poisson-distributed times by pairs of
//! locally thermal qubits that may share classical correlations, discord or
//! entanglement. The crate provides the exact collision channels, the
//! closed-form coarse-grained dynamics and its Lindblad form, heat and
//! coherence currents with their Onsager coefficients, and independent
//! brute-force checks (RK4 integration, stochastic trajectories,
//! Kramers-Moyal moments).
//!
//! Units: `hbar = k_B = 1`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod collision;
pub mod dynamics;
pub mod error;
pub mod fpcheck;
pub mod measures;
pub mod qmath;
pub mod states;
pub mod thermo;

pub use error::{Error, Result};
pub use qmath::{CMatrix, DensityMatrix, HermitianOperator, C64};
pub use states::{BathParams, ProjectileKind, QubitSpec, Scenario};
