//! Dense numerical engine for digital quantum simulation of spin chains and
//! spin-boson systems.
//!
//! The crate provides:
//!
//! - [`hilbert`]: complex operator/state algebra over N qubits plus an
//!   optional truncated bosonic mode (dense storage throughout);
//! - [`gates`]: the gate set (Z/X/Y rotations, c-phase, ZZ, ZZZ, collective
//!   phase gates) and the decomposition identities relating them;
//! - [`hamiltonians`]: builders for the transverse-field Ising chain, the
//!   Ising chain coupled to a bosonic mode, and the three-body extension;
//! - [`trotter`]: first-order product formulas, their error terms, and the
//!   digital gate schedules realizing them;
//! - [`lindblad`]: a fixed-step RK4 master-equation integrator with resonator
//!   photon loss;
//! - [`metrics`]: state fidelities and overlap series;
//! - [`experiment`]: config-driven experiment runner emitting CSV and a JSON
//!   summary.
//!
//! Conventions: qubit 1 is the most significant tensor factor and the bosonic
//! mode (when present) the least significant; `|0>_z` is the +1 eigenstate of
//! `sigma_z`, listed first, and `sigma_plus` raises the ground state into it.
//! Angular frequencies are in rad/us and times in us; dimensionless phase
//! grids are used where an experiment's axis is a phase.

pub mod error;
pub mod experiment;
pub mod gates;
pub mod hamiltonians;
pub mod hilbert;
pub mod lindblad;
pub mod metrics;
pub mod tol;
pub mod trotter;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
