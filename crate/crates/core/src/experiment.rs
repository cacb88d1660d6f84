//! Config-driven experiment runner.
//!
//! A JSON [`ExperimentConfig`] selects one of three experiments and the
//! runner produces a [`FidelityReport`] (CSV) plus a machine-readable
//! [`Summary`] (JSON):
//!
//! - `ising_tf`: transverse-field Ising chain, digital (gate schedule) vs
//!   ideal evolution over a dimensionless phase grid `theta = J t`;
//! - `extended_ising`: the three-body extension, same axis, with the ZZZ
//!   layer realized directly, via collective gates, or via two-qubit gates;
//! - `itc`: Ising chain coupled to a lossy mode, digital (alternating
//!   `H1`/`H2` master-equation schedule) vs ideal master-equation evolution
//!   over a physical time grid in us.
//!
//! The pipeline is deterministic: fixed steps, no randomness, and columns are
//! assembled in config order after a join barrier, so re-running a config
//! reproduces CSV output byte for byte.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::gates::{GateSequence, ZzzMode};
use crate::hamiltonians::{build_extended_ising, build_ising_tf, build_itc, ModelParams, TermList};
use crate::hilbert::{apply, expm_hermitian, DensityMatrix, PureState, SpaceShape};
use crate::lindblad::{evolve_master_monitored, itc_schedule, Segment};
use crate::metrics::{fidelity_pure, fidelity_trace, FidelityReport};
use crate::tol;
use crate::trotter::{digital_sequence_extended, digital_sequence_ising};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    IsingTf,
    Itc,
    ExtendedIsing,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::IsingTf => "ising_tf",
            ExperimentKind::Itc => "itc",
            ExperimentKind::ExtendedIsing => "extended_ising",
        }
    }
}

fn default_points() -> usize {
    200
}

/// Phase or time grid: `points` values from 0 to `max` inclusive.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default = "default_points")]
    pub points: usize,
}

/// Initial state: a named preset or explicit `[re, im]` amplitudes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Preset(String),
    Amplitudes(Vec<[f64; 2]>),
}

pub const PRESET_STATE_ALL_ZERO: &str = "all-zero";
pub const PRESET_STATE_PHOTON_SUPERPOSITION: &str = "photon-superposition-first-excited";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentKind,
    pub n_qubits: usize,
    pub params: ModelParams,
    pub grid: GridSpec,
    pub trotter_steps: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
    pub initial_state: InitialState,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zzz_mode: Option<ZzzMode>,
    /// Physical time horizon in us; `itc` only (its grid is a time axis).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_time: Option<f64>,
    /// Output stem; files land at `<stem>.csv`, `<stem>_summary.json`, ...
    pub output: String,
}

impl ExperimentConfig {
    /// Deserialize without validating; callers may apply overrides first.
    pub fn parse_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg = Self::parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.schema_version != SCHEMA_VERSION {
            return fail(format!(
                "schema_version {} unsupported, expected {}",
                self.schema_version, SCHEMA_VERSION
            ));
        }
        if self.output.is_empty() {
            return fail("output stem must not be empty".into());
        }
        if self.grid.points < 2 {
            return fail(format!("grid.points must be >= 2, got {}", self.grid.points));
        }
        if self.trotter_steps.is_empty() {
            return fail("trotter_steps must not be empty".into());
        }
        if self.trotter_steps.iter().any(|&s| s == 0) {
            return fail("trotter_steps entries must be >= 1".into());
        }
        if self.trotter_steps.windows(2).any(|w| w[1] <= w[0]) {
            return fail("trotter_steps must be strictly ascending".into());
        }
        match self.experiment {
            ExperimentKind::IsingTf | ExperimentKind::ExtendedIsing => {
                let min_n = if self.experiment == ExperimentKind::IsingTf { 2 } else { 3 };
                if self.n_qubits < min_n {
                    return fail(format!(
                        "{} needs n_qubits >= {min_n}, got {}",
                        self.experiment.name(),
                        self.n_qubits
                    ));
                }
                match self.grid.max {
                    Some(m) if m > 0.0 && m.is_finite() => {}
                    _ => return fail("grid.max (phase) must be a positive finite number".into()),
                }
                if self.max_time.is_some() {
                    return fail(format!(
                        "{} uses a phase grid; drop max_time",
                        self.experiment.name()
                    ));
                }
                if self.fock_dim.is_some() {
                    return fail(format!(
                        "{} has no bosonic mode; drop fock_dim",
                        self.experiment.name()
                    ));
                }
                if self.params.j == 0.0 {
                    return fail("phase axis theta = J t needs params.j != 0".into());
                }
                if self.experiment == ExperimentKind::IsingTf && self.zzz_mode.is_some() {
                    return fail("zzz_mode only applies to extended_ising".into());
                }
            }
            ExperimentKind::Itc => {
                if self.n_qubits < 2 {
                    return fail("itc needs n_qubits >= 2".into());
                }
                match self.fock_dim {
                    Some(d) if d >= 2 => {}
                    _ => return fail("itc needs fock_dim >= 2".into()),
                }
                match self.max_time {
                    Some(t) if t > 0.0 && t.is_finite() => {}
                    _ => return fail("itc needs a positive finite max_time (us)".into()),
                }
                if self.grid.max.is_some() {
                    return fail("itc uses a time grid; set max_time, not grid.max".into());
                }
                if self.params.kappa < 0.0 {
                    return fail(format!("kappa must be >= 0, got {}", self.params.kappa));
                }
                if self.zzz_mode.is_some() {
                    return fail("zzz_mode only applies to extended_ising".into());
                }
            }
        }
        self.shape().and_then(|shape| self.build_initial(shape).map(|_| ()))?;
        Ok(())
    }

    pub fn shape(&self) -> Result<SpaceShape> {
        Ok(match self.experiment {
            ExperimentKind::IsingTf | ExperimentKind::ExtendedIsing => {
                SpaceShape::qubits(self.n_qubits)
            }
            ExperimentKind::Itc => SpaceShape::with_mode(
                self.n_qubits,
                self.fock_dim
                    .ok_or_else(|| Error::InvalidConfig("itc needs fock_dim".into()))?,
            ),
        })
    }

    /// Grid values: phase (theta = J t) or time in us.
    pub fn grid_values(&self) -> Vec<f64> {
        let max = match self.experiment {
            ExperimentKind::Itc => self.max_time.unwrap_or(0.0),
            _ => self.grid.max.unwrap_or(0.0),
        };
        let p = self.grid.points;
        (0..p).map(|k| max * k as f64 / (p - 1) as f64).collect()
    }

    pub fn x_label(&self) -> &'static str {
        match self.experiment {
            ExperimentKind::Itc => "time_us",
            _ => "theta",
        }
    }

    pub fn build_initial(&self, shape: SpaceShape) -> Result<PureState> {
        match &self.initial_state {
            InitialState::Preset(name) => match name.as_str() {
                PRESET_STATE_ALL_ZERO => PureState::basis_state(shape, 0),
                PRESET_STATE_PHOTON_SUPERPOSITION => {
                    if shape.fock_dim() < 3 {
                        return Err(Error::InvalidConfig(format!(
                            "preset `{name}` needs fock_dim >= 3"
                        )));
                    }
                    // first qubit excited (bit 0), the rest ground (bit 1),
                    // mode in (|1> + |2>)/sqrt(2)
                    let q = (1usize << (shape.n_qubits() - 1)) - 1;
                    let mut amps = ndarray::Array1::zeros(shape.total_dim());
                    let w = num_complex::Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    amps[shape.index_of(q, 1)] = w;
                    amps[shape.index_of(q, 2)] = w;
                    PureState::from_amplitudes(shape, amps)
                }
                other => Err(Error::InvalidConfig(format!(
                    "unknown initial_state preset `{other}`"
                ))),
            },
            InitialState::Amplitudes(raw) => {
                let amps = ndarray::Array1::from_iter(
                    raw.iter()
                        .map(|[re, im]| num_complex::Complex64::new(*re, *im)),
                );
                PureState::from_amplitudes(shape, amps)
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FinalFidelity {
    pub steps: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenSystemChecks {
    pub kappa: f64,
    pub max_trace_drift: f64,
    pub min_eigenvalue: f64,
    pub max_purity: f64,
    pub max_top_fock_population: f64,
    /// Final fidelities against the kappa-free ideal reference.
    pub final_fidelity_closed: Vec<FinalFidelity>,
}

/// Machine-readable run summary.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub experiment: &'static str,
    pub n_qubits: usize,
    pub x_label: &'static str,
    pub x_max: f64,
    pub grid_points: usize,
    pub trotter_steps: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zzz_mode: Option<ZzzMode>,
    /// Digital-vs-ideal fidelity at the last grid point, one entry per s.
    pub final_fidelity: Vec<FinalFidelity>,
    /// True when final fidelity is non-decreasing across the ascending s list.
    pub final_fidelity_nondecreasing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub open_system: Option<OpenSystemChecks>,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub report: FidelityReport,
    pub summary: Summary,
}

impl RunResult {
    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// Run an experiment config to a fidelity report and summary.
pub fn run(config: &ExperimentConfig) -> Result<RunResult> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::IsingTf | ExperimentKind::ExtendedIsing => run_unitary(config),
        ExperimentKind::Itc => run_itc(config),
    }
}

fn monotone_nondecreasing(finals: &[FinalFidelity]) -> bool {
    finals.windows(2).all(|w| w[1].value >= w[0].value - 1e-12)
}

/// Shared driver for the two closed-system (pure state) experiments.
fn run_unitary(config: &ExperimentConfig) -> Result<RunResult> {
    let shape = config.shape()?;
    let n = config.n_qubits;
    let p = &config.params;
    let terms: TermList = match config.experiment {
        ExperimentKind::IsingTf => build_ising_tf(n, p.j, p.b, shape)?,
        ExperimentKind::ExtendedIsing => build_extended_ising(n, p.j, p.g_three, p.b, shape)?,
        ExperimentKind::Itc => unreachable!(),
    };
    let h = terms.sum();
    let psi0 = config.build_initial(shape)?;
    let thetas = config.grid_values();
    let zzz_mode = config.zzz_mode.unwrap_or_default();

    // ideal trajectory over the grid; theta = J t
    let ideal: Vec<PureState> = thetas
        .iter()
        .map(|&th| {
            if th == 0.0 {
                Ok(psi0.clone())
            } else {
                apply(&expm_hermitian(&h, th / p.j)?, &psi0)
            }
        })
        .collect::<Result<_>>()?;

    // one digital sweep per Trotter step count
    let sweeps: Vec<Result<Vec<f64>>> = config
        .trotter_steps
        .par_iter()
        .map(|&s| {
            thetas
                .iter()
                .enumerate()
                .map(|(k, &th)| {
                    let psi_t = if th == 0.0 {
                        psi0.clone()
                    } else {
                        let t = th / p.j;
                        let seq = match config.experiment {
                            ExperimentKind::IsingTf => digital_sequence_ising(n, p.j, p.b, t, s)?,
                            ExperimentKind::ExtendedIsing => {
                                digital_sequence_extended(n, p.j, p.g_three, p.b, t, s, zzz_mode)?
                            }
                            ExperimentKind::Itc => unreachable!(),
                        };
                        apply(&seq.evaluate()?, &psi0)?
                    };
                    fidelity_pure(&ideal[k], &psi_t)
                })
                .collect()
        })
        .collect();

    let mut report = FidelityReport::new(config.x_label(), thetas.clone());
    let mut finals = Vec::new();
    for (i, sweep) in sweeps.into_iter().enumerate() {
        let values = sweep?;
        let s = config.trotter_steps[i];
        finals.push(FinalFidelity {
            steps: s,
            value: *values.last().expect("non-empty grid"),
        });
        report.push_column(format!("fidelity_s{s}"), values)?;
    }
    let inset: Vec<f64> = ideal
        .iter()
        .map(|psi| fidelity_pure(psi, &psi0))
        .collect::<Result<_>>()?;
    report.push_column("overlap_initial", inset)?;

    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        experiment: config.experiment.name(),
        n_qubits: n,
        x_label: config.x_label(),
        x_max: *thetas.last().unwrap(),
        grid_points: thetas.len(),
        trotter_steps: config.trotter_steps.clone(),
        zzz_mode: config.zzz_mode,
        final_fidelity_nondecreasing: monotone_nondecreasing(&finals),
        final_fidelity: finals,
        open_system: None,
    };
    Ok(RunResult { report, summary })
}

/// Master-equation experiment: for every grid time t the digital protocol is
/// re-run from 0 with s alternating H1/H2 slices of length t/s (execution
/// time 2t), then compared against the continuously evolved ideal state.
fn run_itc(config: &ExperimentConfig) -> Result<RunResult> {
    let shape = config.shape()?;
    let n = config.n_qubits;
    let p = config.params;
    let kappa = p.kappa;
    let psi0 = config.build_initial(shape)?;
    let rho0 = DensityMatrix::from_pure(&psi0);
    let times = config.grid_values();
    let t_max = *times.last().unwrap();

    // combined model for the ideal reference
    let itc_params = ModelParams {
        omega: p.omega_1 + p.omega_2,
        omega_spin: p.omega_spin_1 + p.omega_spin_2,
        j: p.j,
        g: p.g,
        ..Default::default()
    };
    let h_itc = build_itc(n, &itc_params, shape)?.sum();
    let ideal_segment = vec![Segment::new(h_itc, t_max)];
    // the integrator applies the |H| dt and kappa dt rules per segment
    let dt_cap = t_max;
    let fock_limit = Some(tol::TOP_FOCK_LIMIT);
    let ideal_damped =
        evolve_master_monitored(&rho0, &ideal_segment, kappa, dt_cap, &times, fock_limit)?;
    let ideal_closed =
        evolve_master_monitored(&rho0, &ideal_segment, 0.0, dt_cap, &times, fock_limit)?;

    struct Cell {
        damped: f64,
        closed: f64,
        drift: f64,
        top_fock: f64,
        min_eig: f64,
        purity: f64,
    }

    let tasks: Vec<(usize, usize)> = (0..config.trotter_steps.len())
        .flat_map(|si| (0..times.len()).map(move |k| (si, k)))
        .collect();
    let cells: Vec<Result<Cell>> = tasks
        .par_iter()
        .map(|&(si, k)| {
            let s = config.trotter_steps[si];
            let t = times[k];
            let rho_t = if t == 0.0 {
                rho0.clone()
            } else {
                let schedule = itc_schedule(n, &p, t, s, shape)?;
                let run =
                    evolve_master_monitored(&rho0, &schedule, kappa, dt_cap, &[], fock_limit)?;
                // diagnostics ride along with the final state
                let state = run.final_state;
                return Ok(Cell {
                    damped: fidelity_trace(&ideal_damped.samples[k], &state)?,
                    closed: fidelity_trace(&ideal_closed.samples[k], &state)?,
                    drift: run.max_trace_drift,
                    top_fock: run.max_top_fock,
                    min_eig: state.min_eigenvalue()?,
                    purity: state.purity(),
                });
            };
            Ok(Cell {
                damped: fidelity_trace(&ideal_damped.samples[k], &rho_t)?,
                closed: fidelity_trace(&ideal_closed.samples[k], &rho_t)?,
                drift: 0.0,
                top_fock: rho_t.top_fock_population(),
                min_eig: rho_t.min_eigenvalue()?,
                purity: rho_t.purity(),
            })
        })
        .collect();

    let mut damped = vec![vec![0.0; times.len()]; config.trotter_steps.len()];
    let mut closed = vec![vec![0.0; times.len()]; config.trotter_steps.len()];
    let mut checks = OpenSystemChecks {
        kappa,
        max_trace_drift: ideal_damped.max_trace_drift.max(ideal_closed.max_trace_drift),
        min_eigenvalue: f64::INFINITY,
        max_purity: 0.0,
        max_top_fock_population: ideal_damped.max_top_fock.max(ideal_closed.max_top_fock),
        final_fidelity_closed: Vec::new(),
    };
    for (&(si, k), cell) in tasks.iter().zip(cells) {
        let cell = cell?;
        damped[si][k] = cell.damped;
        closed[si][k] = cell.closed;
        checks.max_trace_drift = checks.max_trace_drift.max(cell.drift);
        checks.max_top_fock_population = checks.max_top_fock_population.max(cell.top_fock);
        checks.min_eigenvalue = checks.min_eigenvalue.min(cell.min_eig);
        checks.max_purity = checks.max_purity.max(cell.purity);
    }
    for sample in ideal_damped.samples.iter().chain(ideal_closed.samples.iter()) {
        checks.min_eigenvalue = checks.min_eigenvalue.min(sample.min_eigenvalue()?);
        checks.max_purity = checks.max_purity.max(sample.purity());
    }

    let mut report = FidelityReport::new(config.x_label(), times.clone());
    let mut finals = Vec::new();
    for (si, &s) in config.trotter_steps.iter().enumerate() {
        finals.push(FinalFidelity {
            steps: s,
            value: *damped[si].last().unwrap(),
        });
        report.push_column(format!("fidelity_s{s}"), damped[si].clone())?;
    }
    for (si, &s) in config.trotter_steps.iter().enumerate() {
        checks.final_fidelity_closed.push(FinalFidelity {
            steps: s,
            value: *closed[si].last().unwrap(),
        });
        report.push_column(format!("fidelity_closed_s{s}"), closed[si].clone())?;
    }
    let inset = crate::metrics::overlap_with_initial_trace(&ideal_damped.samples, &rho0)?;
    report.push_column("overlap_initial", inset)?;

    let summary = Summary {
        schema_version: SCHEMA_VERSION,
        experiment: config.experiment.name(),
        n_qubits: n,
        x_label: config.x_label(),
        x_max: t_max,
        grid_points: times.len(),
        trotter_steps: config.trotter_steps.clone(),
        zzz_mode: None,
        final_fidelity_nondecreasing: monotone_nondecreasing(&finals),
        final_fidelity: finals,
        open_system: Some(checks),
    };
    Ok(RunResult { report, summary })
}

/// Run a config and write `<stem>.csv` and `<stem>_summary.json`.
pub fn run_to_files(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let result = run(config)?;
    std::fs::create_dir_all(out_dir)?;
    let csv_path = out_dir.join(format!("{}.csv", config.output));
    let summary_path = out_dir.join(format!("{}_summary.json", config.output));
    std::fs::write(&csv_path, result.report.to_csv())?;
    std::fs::write(&summary_path, result.summary_json())?;
    Ok(vec![csv_path, summary_path])
}

// ---------------------------------------------------------------------------
// gate-schedule export
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleCount {
    pub trotter_steps: usize,
    pub zz_per_step: usize,
    pub zzz_logical_per_step: usize,
    pub single_qubit_per_step: usize,
    pub total_gates: usize,
    pub totals_by_kind: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleEmission {
    /// `(file name, text)` pairs, one serialized sequence per step count.
    #[serde(skip)]
    pub files: Vec<(String, String)>,
    pub counts: Vec<ScheduleCount>,
}

/// Export the digital gate schedules of a gate-decomposable experiment.
pub fn emit_gate_schedule(config: &ExperimentConfig) -> Result<ScheduleEmission> {
    config.validate()?;
    if config.experiment == ExperimentKind::Itc {
        return Err(Error::InvalidConfig(
            "itc is driven at the Hamiltonian level; it has no gate schedule".into(),
        ));
    }
    let n = config.n_qubits;
    let p = &config.params;
    let theta_max = config.grid.max.expect("validated");
    let t = theta_max / p.j;
    let zzz_mode = config.zzz_mode.unwrap_or_default();
    let mut files = Vec::new();
    let mut counts = Vec::new();
    for &s in &config.trotter_steps {
        let seq: GateSequence = match config.experiment {
            ExperimentKind::IsingTf => digital_sequence_ising(n, p.j, p.b, t, s)?,
            ExperimentKind::ExtendedIsing => {
                digital_sequence_extended(n, p.j, p.g_three, p.b, t, s, zzz_mode)?
            }
            ExperimentKind::Itc => unreachable!(),
        };
        let mut by_kind: BTreeMap<String, usize> = BTreeMap::new();
        for g in seq.gates() {
            *by_kind.entry(g.kind.token().to_string()).or_insert(0) += 1;
        }
        counts.push(ScheduleCount {
            trotter_steps: s,
            zz_per_step: n - 1,
            zzz_logical_per_step: if config.experiment == ExperimentKind::ExtendedIsing {
                n - 2
            } else {
                0
            },
            single_qubit_per_step: n,
            total_gates: seq.len(),
            totals_by_kind: by_kind,
        });
        files.push((format!("{}_s{s}.gates", config.output), seq.to_text()));
    }
    Ok(ScheduleEmission { files, counts })
}

/// Emit schedules to files plus a `<stem>_schedule.json` count summary.
pub fn emit_schedule_to_files(config: &ExperimentConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let emission = emit_gate_schedule(config)?;
    std::fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for (name, text) in &emission.files {
        let path = out_dir.join(name);
        std::fs::write(&path, text)?;
        paths.push(path);
    }
    let counts_path = out_dir.join(format!("{}_schedule.json", config.output));
    let mut json = serde_json::to_string_pretty(&emission.counts).expect("counts serialize");
    json.push('\n');
    std::fs::write(&counts_path, json)?;
    paths.push(counts_path);
    Ok(paths)
}

// ---------------------------------------------------------------------------
// presets
// ---------------------------------------------------------------------------

pub fn preset_names() -> &'static [&'static str] {
    &["ising-tf", "itc", "extended-ising"]
}

/// Built-in experiment presets.
///
/// `ising-tf` and `extended-ising` sweep a dimensionless phase up to 4;
/// `itc` runs the caption frequencies over a 0.0025 us horizon (chosen so the
/// s = 3..5 digitization is inside its convergent regime; the physical time
/// axis is an artifact choice, see README).
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let cfg = match name {
        "ising-tf" => ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: ExperimentKind::IsingTf,
            n_qubits: 4,
            params: ModelParams {
                j: 2.0,
                b: 1.0,
                ..Default::default()
            },
            grid: GridSpec {
                max: Some(4.0),
                points: 200,
            },
            trotter_steps: vec![6, 8, 10],
            fock_dim: None,
            initial_state: InitialState::Preset(PRESET_STATE_ALL_ZERO.into()),
            zzz_mode: None,
            max_time: None,
            output: "ising_tf".into(),
        },
        "itc" => ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: ExperimentKind::Itc,
            n_qubits: 4,
            params: ModelParams {
                omega_1: TAU * 200.0,
                omega_spin_1: TAU * 180.0,
                g: TAU * 80.0,
                omega_2: TAU * 600.0,
                omega_spin_2: TAU * 18.0,
                j: TAU * 200.0,
                kappa: TAU * 0.01,
                ..Default::default()
            },
            grid: GridSpec {
                max: None,
                points: 40,
            },
            trotter_steps: vec![3, 4, 5],
            fock_dim: Some(8),
            initial_state: InitialState::Preset(PRESET_STATE_PHOTON_SUPERPOSITION.into()),
            zzz_mode: None,
            max_time: Some(0.0025),
            output: "itc".into(),
        },
        "extended-ising" => ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment: ExperimentKind::ExtendedIsing,
            n_qubits: 4,
            params: ModelParams {
                j: TAU * 400.0,
                g_three: TAU * 400.0,
                b: TAU * 200.0,
                ..Default::default()
            },
            grid: GridSpec {
                max: Some(4.0),
                points: 200,
            },
            trotter_steps: vec![7, 9, 11],
            fock_dim: None,
            initial_state: InitialState::Preset(PRESET_STATE_ALL_ZERO.into()),
            zzz_mode: Some(ZzzMode::Direct),
            max_time: None,
            output: "extended_ising".into(),
        },
        _ => return None,
    };
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate_and_dump_round_trip() {
        for name in preset_names() {
            let cfg = preset(name).expect("preset exists");
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            let json = cfg.to_json();
            let back = ExperimentConfig::from_json(&json).unwrap();
            assert_eq!(back.output, cfg.output);
            assert_eq!(back.trotter_steps, cfg.trotter_steps);
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn validation_messages() {
        let mut cfg = preset("ising-tf").unwrap();
        cfg.schema_version = 99;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));

        let mut cfg = preset("ising-tf").unwrap();
        cfg.trotter_steps = vec![6, 6];
        assert!(cfg.validate().is_err());

        let mut cfg = preset("ising-tf").unwrap();
        cfg.max_time = Some(1.0);
        assert!(cfg.validate().is_err());

        let mut cfg = preset("itc").unwrap();
        cfg.grid.max = Some(4.0);
        assert!(cfg.validate().is_err());

        let mut cfg = preset("itc").unwrap();
        cfg.fock_dim = None;
        assert!(cfg.validate().is_err());

        let mut cfg = preset("ising-tf").unwrap();
        cfg.params.j = 0.0;
        assert!(cfg.validate().is_err());

        let mut cfg = preset("ising-tf").unwrap();
        cfg.initial_state = InitialState::Preset("mystery".into());
        assert!(cfg.validate().is_err());

        // unknown fields are rejected at parse time
        let noisy = preset("ising-tf").unwrap().to_json().replace(
            "\"schema_version\": 1",
            "\"schema_version\": 1, \"bogus\": 3",
        );
        assert!(ExperimentConfig::from_json(&noisy).is_err());
    }

    #[test]
    fn grid_is_inclusive_linspace() {
        let cfg = preset("ising-tf").unwrap();
        let g = cfg.grid_values();
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.0);
        assert!((g[199] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn initial_state_presets() {
        let cfg = preset("itc").unwrap();
        let shape = cfg.shape().unwrap();
        let psi = cfg.build_initial(shape).unwrap();
        // (|1> + |2>)/sqrt(2) on the mode, first qubit excited (bit 0)
        let q = 0b0111;
        let w = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes()[shape.index_of(q, 1)].re - w).abs() < 1e-15);
        assert!((psi.amplitudes()[shape.index_of(q, 2)].re - w).abs() < 1e-15);
        assert_eq!(
            psi.amplitudes().iter().filter(|a| a.norm() > 0.0).count(),
            2
        );

        let explicit = ExperimentConfig {
            initial_state: InitialState::Amplitudes(vec![[0.0, 0.0]; 16]),
            ..preset("ising-tf").unwrap()
        };
        assert!(explicit.validate().is_err(), "zero norm must be rejected");
    }

    #[test]
    fn schedule_emission_counts() {
        let mut cfg = preset("ising-tf").unwrap();
        cfg.trotter_steps = vec![1];
        let emission = emit_gate_schedule(&cfg).unwrap();
        assert_eq!(emission.counts.len(), 1);
        let c = &emission.counts[0];
        assert_eq!(c.zz_per_step, 3);
        assert_eq!(c.single_qubit_per_step, 4);
        assert_eq!(c.total_gates, 7);
        assert_eq!(c.totals_by_kind.get("ZZ"), Some(&3));
        assert_eq!(c.totals_by_kind.get("Xrot"), Some(&4));

        let mut cfg = preset("extended-ising").unwrap();
        cfg.trotter_steps = vec![1];
        let c = emit_gate_schedule(&cfg).unwrap().counts.remove(0);
        assert_eq!(
            (c.zz_per_step, c.zzz_logical_per_step, c.single_qubit_per_step),
            (3, 2, 4)
        );
        assert_eq!(c.totals_by_kind.get("ZZZ"), Some(&2));

        // two-qubit realization: same logical count, expanded physical gates
        let mut cfg = preset("extended-ising").unwrap();
        cfg.trotter_steps = vec![1];
        cfg.zzz_mode = Some(ZzzMode::TwoQubit);
        let c = emit_gate_schedule(&cfg).unwrap().counts.remove(0);
        assert_eq!(c.zzz_logical_per_step, 2);
        assert_eq!(c.totals_by_kind.get("ZZZ"), None);
        assert_eq!(c.totals_by_kind.get("ZZ_A"), Some(&2));
        assert_eq!(c.totals_by_kind.get("ZZ_B"), Some(&2));
        // per triple: 1 angle gate + 2 per-pair, over the 3-gate ZZ layer too
        assert_eq!(c.totals_by_kind.get("ZZ"), Some(&(3 + 2)));

        assert!(emit_gate_schedule(&preset("itc").unwrap()).is_err());
    }

    #[test]
    fn schedule_text_parses_back() {
        let mut cfg = preset("extended-ising").unwrap();
        cfg.trotter_steps = vec![2];
        cfg.zzz_mode = Some(ZzzMode::Collective);
        let emission = emit_gate_schedule(&cfg).unwrap();
        let (_, text) = &emission.files[0];
        let seq = GateSequence::parse(text, SpaceShape::qubits(4)).unwrap();
        assert_eq!(seq.len(), emission.counts[0].total_gates);
    }

    /// Small end-to-end run: the pipeline is deterministic and the report
    /// carries one fidelity column per s plus the inset.
    #[test]
    fn small_run_shape_and_determinism() {
        let mut cfg = preset("ising-tf").unwrap();
        cfg.n_qubits = 2;
        cfg.grid.points = 9;
        cfg.trotter_steps = vec![2, 4];
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.report.to_csv(), b.report.to_csv());
        assert_eq!(a.summary_json(), b.summary_json());
        assert_eq!(a.report.columns.len(), 3);
        assert_eq!(a.report.columns[0].label, "fidelity_s2");
        assert_eq!(a.report.columns[2].label, "overlap_initial");
        // fidelity at the origin is exactly 1
        assert_eq!(a.report.columns[0].values[0], 1.0);
        assert_eq!(a.report.columns[1].values[0], 1.0);
        assert!(a.summary.final_fidelity_nondecreasing);
    }

    /// Tiny open-system run through the full pipeline.
    #[test]
    fn small_itc_run() {
        let mut cfg = preset("itc").unwrap();
        cfg.n_qubits = 2;
        // the 3 initial excitations can reach Fock level 3, so keep a margin
        cfg.fock_dim = Some(5);
        cfg.grid.points = 4;
        cfg.trotter_steps = vec![2, 3];
        // scale everything down so the run is quick
        cfg.params = ModelParams {
            omega_1: 2.0,
            omega_spin_1: 1.8,
            g: 0.8,
            omega_2: 6.0,
            omega_spin_2: 0.18,
            j: 2.0,
            kappa: 0.02,
            ..Default::default()
        };
        cfg.max_time = Some(0.8);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.report.to_csv(), b.report.to_csv());
        // columns: damped s2, s3; closed s2, s3; inset
        assert_eq!(a.report.columns.len(), 5);
        // purity of the superposition initial state is 1 up to rounding
        assert!((a.report.columns[0].values[0] - 1.0).abs() < 1e-12);
        let open = a.summary.open_system.as_ref().unwrap();
        assert!(open.max_trace_drift < 1e-8);
        assert!(open.min_eigenvalue > -1e-6);
        assert!(open.max_purity <= 1.0 + 1e-8);
        assert!(open.max_top_fock_population < 1e-6);
    }
}
