//! Error type shared across the crate.

use crate::hilbert::SpaceShape;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("site {site} out of range for {n_qubits} qubit(s)")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("duplicate site {0} in gate target list")]
    DuplicateSite(usize),

    #[error("operation needs a bosonic mode with fock_dim >= 2, shape has fock_dim = {0}")]
    NoBosonicMode(usize),

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: SpaceShape, right: SpaceShape },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix deviates from Hermitian by {deviation:.3e} (tolerance {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("gate {kind} takes {expected}, got {got} site(s)")]
    GateArity {
        kind: &'static str,
        expected: &'static str,
        got: usize,
    },

    #[error("collective gate needs at least two sites, got {0}")]
    TooFewSites(usize),

    #[error("gate text line {line}: {reason}")]
    GateParse { line: usize, reason: String },

    #[error("({j}, {k}) is not an adjacent pair with 1 <= j < k <= n")]
    NonAdjacentPair { j: usize, k: usize },

    #[error("chain needs at least {min} spins, got {got}")]
    ChainTooShort { min: usize, got: usize },

    #[error("term list must not be empty")]
    EmptyTermList,

    #[error("Trotter plan needs at least one step")]
    ZeroSteps,

    #[error("tail bound is defined for k >= 3, got k = {0}")]
    TailOrderTooLow(usize),

    #[error(
        "trace drifted to {drift:.3e} (limit {limit:.1e}) at t = {time}; \
         reduce the integrator step"
    )]
    TraceDrift { drift: f64, limit: f64, time: f64 },

    #[error(
        "top Fock level holds population {population:.3e} (limit {limit:.1e}) at t = {time}; \
         raise fock_dim"
    )]
    FockOverflow {
        population: f64,
        limit: f64,
        time: f64,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("linear algebra backend: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors raised by config parsing/validation rather than numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidConfig(_) | Error::Json(_) | Error::GateParse { .. }
        )
    }

    /// True for mid-run numerical aborts (step-size or truncation diagnostics).
    pub fn is_numerical_abort(&self) -> bool {
        matches!(self, Error::TraceDrift { .. } | Error::FockOverflow { .. })
    }
}
