//! Fidelity and overlap measures.
//!
//! For pure states the fidelity is `|<psi1|psi2>|^2`; for density matrices it
//! is the plain overlap `tr(rho_I rho_T)` (not the Uhlmann fidelity — that is
//! deliberate, the overlap is what the experiments report).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, PureState};
use crate::tol;

/// `|<psi1|psi2>|^2`.
pub fn fidelity_pure(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    Ok(psi1.inner(psi2)?.norm_sqr())
}

/// `tr(rho_i rho_t)`, real up to a discarded residue below 1e-10.
pub fn fidelity_trace(rho_i: &DensityMatrix, rho_t: &DensityMatrix) -> Result<f64> {
    rho_i.shape().check_same(&rho_t.shape())?;
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for (a, b) in rho_i.entries().t().iter().zip(rho_t.entries().iter()) {
        // tr(AB) = sum_ij A_ij B_ji; A read transposed pairs A_ji with B_ji
        acc += a * b;
    }
    debug_assert!(
        acc.im.abs() <= tol::TRACE_FIDELITY_IMAG_TOL * acc.norm().max(1.0),
        "tr(rho_i rho_t) has imaginary residue {}",
        acc.im
    );
    Ok(acc.re)
}

/// Overlap of every state of a pure trajectory with the fixed initial state.
pub fn overlap_with_initial_pure(
    trajectory: &[PureState],
    initial: &PureState,
) -> Result<Vec<f64>> {
    trajectory
        .iter()
        .map(|psi| fidelity_pure(psi, initial))
        .collect()
}

/// Overlap of every state of a density-matrix trajectory with the initial one.
pub fn overlap_with_initial_trace(
    trajectory: &[DensityMatrix],
    initial: &DensityMatrix,
) -> Result<Vec<f64>> {
    trajectory
        .iter()
        .map(|rho| fidelity_trace(rho, initial))
        .collect()
}

/// One named column of fidelity values on the shared grid.
#[derive(Debug, Clone, Serialize)]
pub struct FidelityColumn {
    pub label: String,
    pub values: Vec<f64>,
}

/// Fidelity curves over a phase or time grid, one column per Trotter step
/// count plus the inset overlap column.
#[derive(Debug, Clone, Serialize)]
pub struct FidelityReport {
    /// Header name of the grid column ("theta" or "time_us").
    pub x_label: String,
    pub x: Vec<f64>,
    pub columns: Vec<FidelityColumn>,
}

impl FidelityReport {
    pub fn new(x_label: impl Into<String>, x: Vec<f64>) -> Self {
        Self {
            x_label: x_label.into(),
            x,
            columns: Vec::new(),
        }
    }

    /// Add a column; values must sit in [0, 1 + 1e-9] and match the grid.
    pub fn push_column(&mut self, label: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let label = label.into();
        if values.len() != self.x.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                got: values.len(),
            });
        }
        if let Some(&bad) = values
            .iter()
            .find(|v| !v.is_finite() || **v < -1e-12 || **v > 1.0 + 1e-9)
        {
            return Err(Error::InvalidConfig(format!(
                "fidelity column `{label}` holds out-of-range value {bad}"
            )));
        }
        self.columns.push(FidelityColumn { label, values });
        Ok(())
    }

    pub fn column(&self, label: &str) -> Option<&FidelityColumn> {
        self.columns.iter().find(|c| c.label == label)
    }

    /// CSV with a header row; floats use the shortest round-trip form, so
    /// output is byte-stable across runs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.x_label);
        for c in &self.columns {
            out.push(',');
            out.push_str(&c.label);
        }
        out.push('\n');
        for (k, x) in self.x.iter().enumerate() {
            out.push_str(&format!("{x}"));
            for c in &self.columns {
                out.push_str(&format!(",{}", c.values[k]));
            }
            out.push('\n');
        }
        out
    }
}
