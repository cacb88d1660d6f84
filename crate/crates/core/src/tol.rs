//! Pinned numerical tolerances.
//!
//! Every threshold enforced at runtime lives here; test-only tolerances stay
//! with their tests.

/// Hermiticity check, relative to the matrix Frobenius norm.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Unitarity check on `U†U - I`, relative to sqrt(dim).
pub const UNITARY_TOL: f64 = 1e-10;

/// State norm / density-matrix trace after construction or unitary maps.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// `fidelity_trace` discards the imaginary residue only below this.
pub const TRACE_FIDELITY_IMAG_TOL: f64 = 1e-10;

/// Master-equation abort threshold on |tr(rho) - 1|.
pub const TRACE_ABORT_LIMIT: f64 = 1e-6;

/// Reported (non-aborting) trace-drift budget over a full open-system run.
pub const TRACE_DRIFT_BUDGET: f64 = 1e-8;

/// Smallest admissible density-matrix eigenvalue during a run.
pub const POSITIVITY_FLOOR: f64 = -1e-6;

/// Purity may exceed 1 only by this much.
pub const PURITY_CEILING: f64 = 1.0 + 1e-8;

/// Maximum admissible population of the top Fock level (truncation monitor).
pub const TOP_FOCK_LIMIT: f64 = 1e-6;
