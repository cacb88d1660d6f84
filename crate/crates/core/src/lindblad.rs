//! Open-system integrator for the master equation with resonator photon loss,
//!
//! ```text
//! drho/dt = -i [H_t, rho] + kappa L(a) rho,
//! L(a) rho = (2 a rho a† - a†a rho - rho a†a) / 2,
//! ```
//!
//! where `H_t` is a piecewise-constant Hamiltonian schedule. Integration is
//! fixed-step classical RK4 with `rho <- (rho + rho†)/2` after every step; no
//! adaptive stepping, so runs are bit-reproducible. The default step obeys
//! `|H| dt <= 0.05` and `kappa dt <= 1e-4`.
//!
//! Only the single collapse operator `sqrt(kappa) a` is modeled; qubit
//! decoherence is out of scope (resonator lifetime dominates).

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::hamiltonians::ModelParams;
use crate::hilbert::{DensityMatrix, Operator, SpaceShape};
use crate::tol;

/// Step-size rule: `|H| dt <= MAX_H_DT`.
pub const MAX_H_DT: f64 = 0.05;
/// Step-size rule: `kappa dt <= MAX_KAPPA_DT`.
pub const MAX_KAPPA_DT: f64 = 1e-4;

/// One piecewise-constant slice of the Hamiltonian schedule.
#[derive(Debug, Clone)]
pub struct Segment {
    pub hamiltonian: Operator,
    pub duration: f64,
}

impl Segment {
    pub fn new(hamiltonian: Operator, duration: f64) -> Self {
        Self {
            hamiltonian,
            duration,
        }
    }
}

/// Master-equation right-hand side `-i[H, rho] + kappa L(a) rho`.
///
/// The output is Hermitian and traceless (the generator preserves the trace).
pub fn lindblad_rhs(rho: &DensityMatrix, h: &Operator, kappa: f64) -> Result<Operator> {
    rho.shape().check_same(&h.shape())?;
    if kappa < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "decay rate kappa must be >= 0, got {kappa}"
        )));
    }
    let i = C64::new(0.0, 1.0);
    let hr = h.entries().dot(rho.entries());
    let rh = rho.entries().dot(h.entries());
    let mut out = (&hr - &rh).mapv(|z| -i * z);
    if kappa > 0.0 {
        let a = crate::hilbert::ladder(crate::hilbert::LadderKind::Lower, rho.shape())?;
        let ad = a.dagger();
        let n = &ad * &a;
        let a_rho_ad = a.entries().dot(rho.entries()).dot(ad.entries());
        let n_rho = n.entries().dot(rho.entries());
        let rho_n = rho.entries().dot(n.entries());
        out = out + (a_rho_ad.mapv(|z| 2.0 * z) - n_rho - rho_n).mapv(|z| 0.5 * kappa * z);
    }
    Operator::from_entries(rho.shape(), out)
}

/// Default fixed step for a schedule: the tightest of the `|H| dt` and
/// `kappa dt` rules, capped by the total duration.
pub fn suggested_dt(schedule: &[Segment], kappa: f64) -> f64 {
    let total: f64 = schedule.iter().map(|s| s.duration).sum();
    let mut dt = total.max(f64::MIN_POSITIVE);
    for seg in schedule {
        let norm = seg.hamiltonian.norm_spectral();
        if norm > 0.0 {
            dt = dt.min(MAX_H_DT / norm);
        }
    }
    if kappa > 0.0 {
        dt = dt.min(MAX_KAPPA_DT / kappa);
    }
    dt
}

/// Sampled trajectory of a master-equation run, plus run diagnostics.
#[derive(Debug, Clone)]
pub struct MasterTrajectory {
    /// One state per requested sample time, in order.
    pub samples: Vec<DensityMatrix>,
    /// Final state at the end of the schedule.
    pub final_state: DensityMatrix,
    /// Largest |tr(rho) - 1| seen at any step.
    pub max_trace_drift: f64,
    /// Largest top-Fock-level population seen at any sample or segment end.
    pub max_top_fock: f64,
}

/// Integrate the master equation through a piecewise-constant schedule.
///
/// `dt_max` caps the step; within each segment the step is further tightened
/// to `MAX_H_DT / |H|` (induced infinity norm) and `MAX_KAPPA_DT / kappa`,
/// then rounded down so sub-spans divide evenly. `sample_times` (ascending,
/// within the schedule span) are hit exactly by shortening the final
/// sub-steps; the returned trajectory holds one state per sample. Aborts with
/// [`Error::TraceDrift`] when |tr(rho) - 1| exceeds 1e-6. The top-Fock
/// population is recorded at every sample and segment end; see
/// [`evolve_master_monitored`] for the aborting truncation monitor.
pub fn evolve_master(
    rho0: &DensityMatrix,
    schedule: &[Segment],
    kappa: f64,
    dt_max: f64,
    sample_times: &[f64],
) -> Result<MasterTrajectory> {
    evolve_master_monitored(rho0, schedule, kappa, dt_max, sample_times, None)
}

/// [`evolve_master`] with a truncation monitor: abort with
/// [`Error::FockOverflow`] once the top Fock level holds more than
/// `top_fock_limit` population.
pub fn evolve_master_monitored(
    rho0: &DensityMatrix,
    schedule: &[Segment],
    kappa: f64,
    dt_max: f64,
    sample_times: &[f64],
    top_fock_limit: Option<f64>,
) -> Result<MasterTrajectory> {
    let shape = rho0.shape();
    if kappa < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "decay rate kappa must be >= 0, got {kappa}"
        )));
    }
    if kappa > 0.0 && shape.fock_dim() < 2 {
        return Err(Error::NoBosonicMode(shape.fock_dim()));
    }
    if !(dt_max > 0.0 && dt_max.is_finite()) {
        return Err(Error::NonFinite {
            what: "integrator step",
            value: dt_max,
        });
    }
    let total: f64 = schedule.iter().map(|s| s.duration).sum();
    let eps = 1e-12 * total.max(1.0);
    for (i, w) in sample_times.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::InvalidConfig(format!(
                "sample times must be strictly ascending (index {i})"
            )));
        }
    }
    if sample_times.iter().any(|&t| t < -eps || t > total + eps) {
        return Err(Error::InvalidConfig(
            "sample time outside the schedule span".into(),
        ));
    }
    for seg in schedule {
        shape.check_same(&seg.hamiltonian.shape())?;
        if !(seg.duration > 0.0 && seg.duration.is_finite()) {
            return Err(Error::NonFinite {
                what: "segment duration",
                value: seg.duration,
            });
        }
        let dev = seg.hamiltonian.hermitian_deviation();
        if dev > tol::HERMITIAN_TOL * seg.hamiltonian.norm_fro().max(1.0) {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol::HERMITIAN_TOL,
            });
        }
    }

    let d = shape.total_dim();
    let mut stepper = Rk4Buffers::new(d, shape, kappa);
    let mut rho: Vec<C64> = rho0.entries().iter().cloned().collect();
    let mut out = MasterTrajectory {
        samples: Vec::with_capacity(sample_times.len()),
        final_state: rho0.clone(),
        max_trace_drift: 0.0,
        max_top_fock: 0.0,
    };

    let mut si = 0;
    let mut t = 0.0f64;
    while si < sample_times.len() && sample_times[si] <= eps {
        out.samples.push(rho0.clone());
        si += 1;
    }
    out.max_top_fock = out.max_top_fock.max(rho0.top_fock_population());

    for seg in schedule {
        let seg_end = t + seg.duration;
        let sparse = SparseMat::from_operator(&seg.hamiltonian);
        // per-segment step: the caller's cap tightened by the |H| dt and
        // kappa dt rules for this segment's Hamiltonian
        let mut seg_dt = dt_max;
        let norm = seg.hamiltonian.norm_inf();
        if norm > 0.0 {
            seg_dt = seg_dt.min(MAX_H_DT / norm);
        }
        if kappa > 0.0 {
            seg_dt = seg_dt.min(MAX_KAPPA_DT / kappa);
        }
        loop {
            let (target, is_sample) =
                if si < sample_times.len() && sample_times[si] <= seg_end + eps {
                    (sample_times[si].min(seg_end), true)
                } else {
                    (seg_end, false)
                };
            let span = target - t;
            if span > eps {
                let n_steps = (span / seg_dt).ceil().max(1.0) as usize;
                let dt = span / n_steps as f64;
                for _ in 0..n_steps {
                    stepper.step(&mut rho, &sparse, dt);
                    let drift = (stepper.trace(&rho).re - 1.0).abs();
                    out.max_trace_drift = out.max_trace_drift.max(drift);
                    if drift > tol::TRACE_ABORT_LIMIT {
                        return Err(Error::TraceDrift {
                            drift,
                            limit: tol::TRACE_ABORT_LIMIT,
                            time: t,
                        });
                    }
                }
            }
            t = target;
            let state = DensityMatrix::from_raw(
                shape,
                Array2::from_shape_vec((d, d), rho.clone()).expect("square buffer"),
            );
            let top = state.top_fock_population();
            out.max_top_fock = out.max_top_fock.max(top);
            if let Some(limit) = top_fock_limit {
                if top > limit {
                    return Err(Error::FockOverflow {
                        population: top,
                        limit,
                        time: t,
                    });
                }
            }
            if is_sample {
                out.samples.push(state);
                si += 1;
                if (t - seg_end).abs() <= eps {
                    break;
                }
            } else {
                break;
            }
        }
        t = seg_end;
    }

    out.final_state = DensityMatrix::from_raw(
        shape,
        Array2::from_shape_vec((d, d), rho).expect("square buffer"),
    );
    Ok(out)
}

/// Alternating `[H1 t/s, H2 t/s] x s` schedule for the mode-coupled chain.
///
/// `params` supplies (w1, W1, g) for `H1` and (w2, W2, J) for `H2`, with the
/// per-pair frame frequencies recovered as w' = w2/(N-1), W' = W2/(N-1).
pub fn itc_schedule(
    n: usize,
    params: &ModelParams,
    t: f64,
    s: usize,
    shape: SpaceShape,
) -> Result<Vec<Segment>> {
    if s == 0 {
        return Err(Error::ZeroSteps);
    }
    let h1 = crate::hamiltonians::build_h1(n, params.omega_1, params.omega_spin_1, params.g, shape)?;
    let (omega_p, omega_spin_p) = params.primed(n);
    let h2 = crate::hamiltonians::build_h2(n, omega_p, omega_spin_p, params.j, shape)?;
    let tau = t / s as f64;
    let mut schedule = Vec::with_capacity(2 * s);
    for _ in 0..s {
        schedule.push(Segment::new(h1.clone(), tau));
        schedule.push(Segment::new(h2.clone(), tau));
    }
    Ok(schedule)
}

/// As [`itc_schedule`], but with each `H2` slice expanded into its commuting
/// pair blocks `H(j,k)`, every block running the full `t/s`.
pub fn itc_schedule_expanded(
    n: usize,
    params: &ModelParams,
    t: f64,
    s: usize,
    shape: SpaceShape,
) -> Result<Vec<Segment>> {
    if s == 0 {
        return Err(Error::ZeroSteps);
    }
    let h1 = crate::hamiltonians::build_h1(n, params.omega_1, params.omega_spin_1, params.g, shape)?;
    let (omega_p, omega_spin_p) = params.primed(n);
    let tau = t / s as f64;
    let mut blocks = Vec::with_capacity(n - 1);
    for j in 1..n {
        blocks.push(crate::hamiltonians::build_hjk(
            j,
            j + 1,
            omega_p,
            omega_spin_p,
            params.j,
            shape,
        )?);
    }
    let mut schedule = Vec::with_capacity((1 + blocks.len()) * s);
    for _ in 0..s {
        schedule.push(Segment::new(h1.clone(), tau));
        for b in &blocks {
            schedule.push(Segment::new(b.clone(), tau));
        }
    }
    Ok(schedule)
}

// ---------------------------------------------------------------------------
// fixed-step RK4 kernel
// ---------------------------------------------------------------------------

/// Row-major triplet form of a Hamiltonian, for cheap `H rho` / `rho H`.
struct SparseMat {
    triplets: Vec<(usize, usize, C64)>,
}

impl SparseMat {
    fn from_operator(op: &Operator) -> Self {
        let mut triplets = Vec::new();
        for ((r, c), &v) in op.entries().indexed_iter() {
            if v != C64::new(0.0, 0.0) {
                triplets.push((r, c, v));
            }
        }
        Self { triplets }
    }
}

struct Rk4Buffers {
    d: usize,
    mode_dim: usize,
    kappa: f64,
    /// kappa/2 * (fock level of column j); loss coefficients by column.
    half_loss: Vec<f64>,
    /// sqrt(level(j) + 1), or 0 at the top level; gain coefficients.
    gain: Vec<f64>,
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    stage: Vec<C64>,
    scratch: Vec<C64>,
}

impl Rk4Buffers {
    fn new(d: usize, shape: SpaceShape, kappa: f64) -> Self {
        let mode_dim = shape.mode_dim();
        let half_loss = (0..d)
            .map(|j| 0.5 * kappa * shape.fock_level(j) as f64)
            .collect();
        let gain = (0..d)
            .map(|j| {
                let m = shape.fock_level(j);
                if m + 1 < mode_dim {
                    ((m + 1) as f64).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            d,
            mode_dim,
            kappa,
            half_loss,
            gain,
            k1: vec![C64::new(0.0, 0.0); d * d],
            k2: vec![C64::new(0.0, 0.0); d * d],
            k3: vec![C64::new(0.0, 0.0); d * d],
            k4: vec![C64::new(0.0, 0.0); d * d],
            stage: vec![C64::new(0.0, 0.0); d * d],
            scratch: vec![C64::new(0.0, 0.0); d * d],
        }
    }

    fn trace(&self, rho: &[C64]) -> C64 {
        (0..self.d).map(|i| rho[i * self.d + i]).sum()
    }

    /// `out = -i (H rho - rho H) + kappa (a rho a† - (n rho + rho n)/2)`.
    ///
    /// Both H and rho are Hermitian (up to rounding for RK4 stage inputs), so
    /// `rho H = (H rho)†` and one sparse product serves both commutator sides;
    /// the output is assembled Hermitian from the upper triangle.
    fn rhs(&self, out: &mut [C64], work: &mut [C64], rho: &[C64], h: &SparseMat) {
        let d = self.d;
        // work = H rho: row r accumulates v * row c of rho
        work.fill(C64::new(0.0, 0.0));
        for &(r, c, v) in &h.triplets {
            let src = &rho[c * d..(c + 1) * d];
            let dst = &mut work[r * d..(r + 1) * d];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += v * s;
            }
        }
        let diss = self.kappa > 0.0 && self.mode_dim >= 2;
        if diss {
            for i in 0..d {
                let loss_i = self.half_loss[i];
                let gain_i = self.kappa * self.gain[i];
                for j in i..d {
                    let idx = i * d + j;
                    let diff = work[idx] - work[j * d + i].conj();
                    let mut val = C64::new(diff.im, -diff.re);
                    val -= (loss_i + self.half_loss[j]) * rho[idx];
                    let g = gain_i * self.gain[j];
                    if g != 0.0 {
                        // a rho a† pulls from the (m+1, m+1) shifted entry
                        val += g * rho[(i + 1) * d + j + 1];
                    }
                    out[idx] = val;
                    out[j * d + i] = val.conj();
                }
            }
        } else {
            for i in 0..d {
                for j in i..d {
                    let idx = i * d + j;
                    let diff = work[idx] - work[j * d + i].conj();
                    let val = C64::new(diff.im, -diff.re);
                    out[idx] = val;
                    out[j * d + i] = val.conj();
                }
            }
        }
    }

    fn step(&mut self, rho: &mut [C64], h: &SparseMat, dt: f64) {
        let d = self.d;
        let half = 0.5 * dt;
        let mut k1 = std::mem::take(&mut self.k1);
        let mut k2 = std::mem::take(&mut self.k2);
        let mut k3 = std::mem::take(&mut self.k3);
        let mut k4 = std::mem::take(&mut self.k4);
        let mut stage = std::mem::take(&mut self.stage);
        let mut scratch = std::mem::take(&mut self.scratch);

        self.rhs(&mut k1, &mut scratch, rho, h);
        for i in 0..d * d {
            stage[i] = rho[i] + half * k1[i];
        }
        self.rhs(&mut k2, &mut scratch, &stage, h);
        for i in 0..d * d {
            stage[i] = rho[i] + half * k2[i];
        }
        self.rhs(&mut k3, &mut scratch, &stage, h);
        for i in 0..d * d {
            stage[i] = rho[i] + dt * k3[i];
        }
        self.rhs(&mut k4, &mut scratch, &stage, h);
        // combined update; the state stays exactly Hermitian because every
        // stage is Hermitian and the lower triangle is written as the mirror
        let w = dt / 6.0;
        for i in 0..d {
            for j in i..d {
                let idx = i * d + j;
                let val = rho[idx] + w * (k1[idx] + 2.0 * (k2[idx] + k3[idx]) + k4[idx]);
                rho[idx] = val;
                rho[j * d + i] = val.conj();
            }
        }

        self.k1 = k1;
        self.k2 = k2;
        self.k3 = k3;
        self.k4 = k4;
        self.stage = stage;
        self.scratch = scratch;
    }
}
