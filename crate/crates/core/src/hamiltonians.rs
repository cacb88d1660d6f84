//! Model Hamiltonian builders.
//!
//! Each builder returns a Hermitian operator, or a [`TermList`] carrying the
//! natural term split used by the product formulas:
//!
//! ```text
//! H_itf      = J sum_<jk> sz_j sz_k + B sum_j sx_j
//! H_itc      = w a†a + sum_j (W/2) sz_j - J sum_<jk> sz_j sz_k
//!              + g sum_j (a s+_j + a† s-_j)
//! H_1        = w1 a†a + sum_j (W1/2) sz_j + g sum_j (a s+_j + a† s-_j)
//! H(j,k)     = w' a†a + sum_j (W'/2) sz_j - J sz_j sz_k
//! H_2        = sum_<jk> H(j,k),   w2 = (N-1) w',  W2 = (N-1) W'
//! H_extended = J sum_<jk> sz sz + G sum_<jkl> sz sz sz + B sum_j sx_j
//! ```
//!
//! Nearest-neighbor sums are over the open chain: N-1 pairs, N-2 triples.
//! Note the sign split: the bare Ising chain carries `+J`, the mode-coupled
//! chain `-J`, both as written in their defining forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    ladder, number_operator, pauli, spin_ladder, LadderKind, Operator, PauliAxis, SpaceShape,
    SpinLadderKind,
};

/// Named physical parameters, angular frequencies in rad/us, time in us.
///
/// Only the fields an experiment needs have to be set; the rest default to 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParams {
    /// Nearest-neighbor spin-spin coupling J.
    pub j: f64,
    /// Transverse field B.
    pub b: f64,
    /// Three-body coupling G.
    pub g_three: f64,
    /// Mode frequency w of the combined spin-boson model.
    pub omega: f64,
    /// Spin splitting W of the combined spin-boson model.
    pub omega_spin: f64,
    /// Spin-mode coupling g.
    pub g: f64,
    /// Mode frequency w1 of the bare spin-mode block.
    pub omega_1: f64,
    /// Spin splitting W1 of the bare spin-mode block.
    pub omega_spin_1: f64,
    /// Mode frequency w2 of the assembled pair block, w2 = (N-1) w'.
    pub omega_2: f64,
    /// Spin splitting W2 of the assembled pair block, W2 = (N-1) W'.
    pub omega_spin_2: f64,
    /// Resonator decay rate kappa >= 0.
    pub kappa: f64,
}

impl ModelParams {
    /// Per-pair detuned-frame frequencies (w', W') recovered from (w2, W2).
    pub fn primed(&self, n_qubits: usize) -> (f64, f64) {
        let denom = (n_qubits - 1) as f64;
        (self.omega_2 / denom, self.omega_spin_2 / denom)
    }
}

/// One labeled summand of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct Term {
    pub label: String,
    pub op: Operator,
}

/// Ordered Hamiltonian term split; list order is the application order of the
/// per-term exponentials in a product formula.
#[derive(Debug, Clone)]
pub struct TermList {
    terms: Vec<Term>,
}

impl TermList {
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyTermList);
        }
        let shape = terms[0].op.shape();
        for t in &terms[1..] {
            shape.check_same(&t.op.shape())?;
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn shape(&self) -> SpaceShape {
        self.terms[0].op.shape()
    }

    /// Elementwise sum of all terms.
    pub fn sum(&self) -> Operator {
        let mut acc = self.terms[0].op.clone();
        for t in &self.terms[1..] {
            acc = &acc + &t.op;
        }
        acc
    }
}

fn check_chain(n: usize, min: usize, shape: SpaceShape) -> Result<()> {
    if n < min {
        return Err(Error::ChainTooShort { min, got: n });
    }
    if shape.n_qubits() != n {
        return Err(Error::InvalidConfig(format!(
            "shape has {} qubits, expected {}",
            shape.n_qubits(),
            n
        )));
    }
    Ok(())
}

/// Open-chain nearest-neighbor `coupling * sum sz_j sz_{j+1}`.
fn zz_chain(n: usize, coupling: f64, shape: SpaceShape) -> Result<Operator> {
    let mut acc = Operator::zeros(shape);
    for j in 1..n {
        let zz = &pauli(PauliAxis::Z, j, shape)? * &pauli(PauliAxis::Z, j + 1, shape)?;
        acc = &acc + &(coupling * &zz);
    }
    Ok(acc)
}

fn x_field(n: usize, b: f64, shape: SpaceShape) -> Result<Operator> {
    let mut acc = Operator::zeros(shape);
    for j in 1..=n {
        acc = &acc + &(b * &pauli(PauliAxis::X, j, shape)?);
    }
    Ok(acc)
}

fn spin_energy(n: usize, omega_spin: f64, shape: SpaceShape) -> Result<Operator> {
    let mut acc = Operator::zeros(shape);
    for j in 1..=n {
        acc = &acc + &((omega_spin / 2.0) * &pauli(PauliAxis::Z, j, shape)?);
    }
    Ok(acc)
}

/// Excitation-conserving spin-mode coupling `g sum_j (a s+_j + a† s-_j)`.
fn tavis_cummings(n: usize, g: f64, shape: SpaceShape) -> Result<Operator> {
    let a = ladder(LadderKind::Lower, shape)?;
    let ad = ladder(LadderKind::Raise, shape)?;
    let mut acc = Operator::zeros(shape);
    for j in 1..=n {
        let up = &a * &spin_ladder(SpinLadderKind::Plus, j, shape)?;
        let down = &ad * &spin_ladder(SpinLadderKind::Minus, j, shape)?;
        acc = &acc + &(g * &(&up + &down));
    }
    Ok(acc)
}

/// Transverse-field Ising chain, split as [zz, x].
pub fn build_ising_tf(n: usize, j: f64, b: f64, shape: SpaceShape) -> Result<TermList> {
    check_chain(n, 2, shape)?;
    if shape.has_mode() {
        return Err(Error::InvalidConfig(
            "the bare Ising chain takes a mode-free shape".into(),
        ));
    }
    TermList::from_terms(vec![
        Term {
            label: "zz".into(),
            op: zz_chain(n, j, shape)?,
        },
        Term {
            label: "x".into(),
            op: x_field(n, b, shape)?,
        },
    ])
}

/// Ising chain coupled to one mode, split as
/// [mode energy, spin energies, spin-spin (minus sign), spin-mode coupling].
pub fn build_itc(n: usize, params: &ModelParams, shape: SpaceShape) -> Result<TermList> {
    check_chain(n, 1, shape)?;
    if shape.fock_dim() < 2 {
        return Err(Error::NoBosonicMode(shape.fock_dim()));
    }
    TermList::from_terms(vec![
        Term {
            label: "mode".into(),
            op: params.omega * &number_operator(shape)?,
        },
        Term {
            label: "spin".into(),
            op: spin_energy(n, params.omega_spin, shape)?,
        },
        Term {
            label: "zz".into(),
            op: zz_chain(n, -params.j, shape)?,
        },
        Term {
            label: "coupling".into(),
            op: tavis_cummings(n, params.g, shape)?,
        },
    ])
}

/// Bare spin-mode block `H_1` (the coupled chain with J = 0).
pub fn build_h1(
    n: usize,
    omega_1: f64,
    omega_spin_1: f64,
    g: f64,
    shape: SpaceShape,
) -> Result<Operator> {
    check_chain(n, 1, shape)?;
    if shape.fock_dim() < 2 {
        return Err(Error::NoBosonicMode(shape.fock_dim()));
    }
    let mode = omega_1 * &number_operator(shape)?;
    let spins = spin_energy(n, omega_spin_1, shape)?;
    let coupling = tavis_cummings(n, g, shape)?;
    Ok(&(&mode + &spins) + &coupling)
}

/// Detuned-frame pair block `H(j,k)`; requires an adjacent pair `k = j + 1`.
///
/// The spin-energy sum runs over all spins, which is what makes
/// `sum_<jk> H(j,k)` reproduce `(N-1)`-scaled frequencies.
pub fn build_hjk(
    j_site: usize,
    k_site: usize,
    omega_prime: f64,
    omega_spin_prime: f64,
    j_coupling: f64,
    shape: SpaceShape,
) -> Result<Operator> {
    let n = shape.n_qubits();
    if j_site == 0 || k_site != j_site + 1 || k_site > n {
        return Err(Error::NonAdjacentPair {
            j: j_site,
            k: k_site,
        });
    }
    if shape.fock_dim() < 2 {
        return Err(Error::NoBosonicMode(shape.fock_dim()));
    }
    let mode = omega_prime * &number_operator(shape)?;
    let spins = spin_energy(n, omega_spin_prime, shape)?;
    let zz = &pauli(PauliAxis::Z, j_site, shape)? * &pauli(PauliAxis::Z, k_site, shape)?;
    Ok(&(&mode + &spins) - &(j_coupling * &zz))
}

/// Assembled pair block `H_2 = sum_<jk> H(j,k)`.
///
/// All `H(j,k)` are diagonal, so `exp(-i t H_2)` factors exactly into the
/// ordered product of the pair-block exponentials.
pub fn build_h2(
    n: usize,
    omega_prime: f64,
    omega_spin_prime: f64,
    j_coupling: f64,
    shape: SpaceShape,
) -> Result<Operator> {
    check_chain(n, 2, shape)?;
    let mut acc = Operator::zeros(shape);
    for j in 1..n {
        acc = &acc + &build_hjk(j, j + 1, omega_prime, omega_spin_prime, j_coupling, shape)?;
    }
    Ok(acc)
}

/// Ising chain with three-body terms, split as [zz, zzz, x].
pub fn build_extended_ising(
    n: usize,
    j: f64,
    g_three: f64,
    b: f64,
    shape: SpaceShape,
) -> Result<TermList> {
    check_chain(n, 3, shape)?;
    if shape.has_mode() {
        return Err(Error::InvalidConfig(
            "the extended Ising chain takes a mode-free shape".into(),
        ));
    }
    let mut zzz = Operator::zeros(shape);
    for j_site in 1..=n - 2 {
        let triple = &(&pauli(PauliAxis::Z, j_site, shape)?
            * &pauli(PauliAxis::Z, j_site + 1, shape)?)
            * &pauli(PauliAxis::Z, j_site + 2, shape)?;
        zzz = &zzz + &(g_three * &triple);
    }
    TermList::from_terms(vec![
        Term {
            label: "zz".into(),
            op: zz_chain(n, j, shape)?,
        },
        Term {
            label: "zzz".into(),
            op: zzz,
        },
        Term {
            label: "x".into(),
            op: x_field(n, b, shape)?,
        },
    ])
}
