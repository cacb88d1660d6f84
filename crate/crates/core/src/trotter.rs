//! First-order product formulas over term lists, their error terms, and the
//! digital gate schedules realizing them.
//!
//! The total time t is divided into s intervals; one step applies every term
//! exponential once, in term-list order (the first term acts first on the
//! state). The leading error is `|sum_{i<j} [H_i, H_j]| t^2 / (2s)` and the
//! order-k tail is bounded by `s (|H| t / s)^k / k!`.

use crate::error::{Error, Result};
use crate::gates::{push_zzz, Gate, GateKind, GateSequence, ZzzMode};
use crate::hamiltonians::TermList;
use crate::hilbert::{expm_hermitian, Operator, SpaceShape};
use crate::tol;

/// A first-order digital evolution plan.
#[derive(Debug, Clone)]
pub struct TrotterPlan {
    terms: TermList,
    total_time: f64,
    steps: usize,
}

impl TrotterPlan {
    pub fn new(terms: TermList, total_time: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::ZeroSteps);
        }
        if !total_time.is_finite() {
            return Err(Error::NonFinite {
                what: "total time",
                value: total_time,
            });
        }
        for t in terms.terms() {
            let dev = t.op.hermitian_deviation();
            let tol = tol::HERMITIAN_TOL * t.op.norm_fro().max(1.0);
            if dev > tol {
                return Err(Error::NotHermitian {
                    deviation: dev,
                    tol: tol::HERMITIAN_TOL,
                });
            }
        }
        Ok(Self {
            terms,
            total_time,
            steps,
        })
    }

    pub fn terms(&self) -> &TermList {
        &self.terms
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// `(prod_j exp(-i H_j t/s))^s`, terms applied in list order.
pub fn trotter_unitary(plan: &TrotterPlan) -> Result<Operator> {
    let tau = plan.total_time / plan.steps as f64;
    let mut step = Operator::identity(plan.terms.shape());
    for term in plan.terms.terms() {
        // each new factor acts after the ones already applied
        step = &expm_hermitian(&term.op, tau)? * &step;
    }
    let mut u = Operator::identity(plan.terms.shape());
    for _ in 0..plan.steps {
        u = &step * &u;
    }
    Ok(u)
}

/// Leading digital error term `|sum_{i<j} [H_i, H_j]| t^2 / (2 s)`
/// in the spectral norm.
pub fn trotter_error_first_order(terms: &TermList, t: f64, s: usize) -> f64 {
    assert!(s >= 1, "need at least one step");
    let list = terms.terms();
    let mut acc = Operator::zeros(terms.shape());
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            acc = &acc + &list[i].op.commutator(&list[j].op);
        }
    }
    acc.norm_spectral() * t * t / (2.0 * s as f64)
}

/// Upper bound `s (|H| t / s)^k / k!` on the order-k error contribution.
pub fn trotter_tail_bound(h: &Operator, t: f64, s: usize, k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::TailOrderTooLow(k));
    }
    assert!(s >= 1, "need at least one step");
    let x = h.norm_spectral() * t.abs() / s as f64;
    let mut term = s as f64;
    for i in 1..=k {
        term *= x / i as f64;
    }
    Ok(term)
}

/// Digital schedule for the transverse-field Ising chain: s repetitions of
/// an (N-1)-gate ZZ layer at angle `J t / s` followed by an N-gate X layer
/// at angle `B t / s`.
pub fn digital_sequence_ising(
    n: usize,
    j: f64,
    b: f64,
    t: f64,
    s: usize,
) -> Result<GateSequence> {
    if n < 2 {
        return Err(Error::ChainTooShort { min: 2, got: n });
    }
    if s == 0 {
        return Err(Error::ZeroSteps);
    }
    let theta = j * t / s as f64;
    let phi = b * t / s as f64;
    let mut seq = GateSequence::new(SpaceShape::qubits(n));
    for _ in 0..s {
        for site in 1..n {
            seq.push(Gate::new(GateKind::Zz, vec![site, site + 1], theta))?;
        }
        for site in 1..=n {
            seq.push(Gate::new(GateKind::Xrot, vec![site], phi))?;
        }
    }
    Ok(seq)
}

/// Digital schedule for the three-body extension: per step a ZZ layer, a ZZZ
/// layer realized in the chosen mode, and an X layer.
pub fn digital_sequence_extended(
    n: usize,
    j: f64,
    g_three: f64,
    b: f64,
    t: f64,
    s: usize,
    mode: ZzzMode,
) -> Result<GateSequence> {
    if n < 3 {
        return Err(Error::ChainTooShort { min: 3, got: n });
    }
    if s == 0 {
        return Err(Error::ZeroSteps);
    }
    let theta = j * t / s as f64;
    let beta = g_three * t / s as f64;
    let phi = b * t / s as f64;
    let mut seq = GateSequence::new(SpaceShape::qubits(n));
    for _ in 0..s {
        for site in 1..n {
            seq.push(Gate::new(GateKind::Zz, vec![site, site + 1], theta))?;
        }
        for site in 1..=n - 2 {
            push_zzz(&mut seq, [site, site + 1, site + 2], beta, mode)?;
        }
        for site in 1..=n {
            seq.push(Gate::new(GateKind::Xrot, vec![site], phi))?;
        }
    }
    Ok(seq)
}
