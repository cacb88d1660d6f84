//! Experiment runner CLI.
//!
//! ```text
//! dqsim run <config.json>           run an experiment, write CSV + summary
//! dqsim emit-schedule <config.json> export the digital gate schedules
//! dqsim presets list                list built-in experiment presets
//! dqsim presets dump <name>         print a preset config as JSON
//! ```
//!
//! Exit codes: 0 success, 2 config validation error, 3 numerical abort
//! (trace drift or Fock truncation overflow), 1 anything else.
//!
//! The output directory defaults to the working directory and can be set
//! with `--out-dir` or the `DQSIM_OUTPUT_DIR` environment variable.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dqsim::experiment::{self, ExperimentConfig};
use dqsim::gates::ZzzMode;

#[derive(Parser)]
#[command(name = "dqsim", version, about = "Digital quantum simulation experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Output directory (overrides DQSIM_OUTPUT_DIR).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Override the output file stem.
    #[arg(long)]
    output: Option<String>,
    /// Override grid.points.
    #[arg(long)]
    points: Option<usize>,
    /// Override grid.max (phase experiments).
    #[arg(long)]
    grid_max: Option<f64>,
    /// Override max_time in us (itc).
    #[arg(long)]
    max_time: Option<f64>,
    /// Override fock_dim (itc).
    #[arg(long)]
    fock_dim: Option<usize>,
    /// Override the Trotter step list, e.g. `--trotter-steps 3,4,5`.
    #[arg(long, value_delimiter = ',')]
    trotter_steps: Option<Vec<usize>>,
    /// Override the ZZZ realization (extended_ising).
    #[arg(long, value_enum)]
    zzz_mode: Option<ZzzModeArg>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ZzzModeArg {
    Direct,
    Collective,
    TwoQubit,
}

impl From<ZzzModeArg> for ZzzMode {
    fn from(v: ZzzModeArg) -> Self {
        match v {
            ZzzModeArg::Direct => ZzzMode::Direct,
            ZzzModeArg::Collective => ZzzMode::Collective,
            ZzzModeArg::TwoQubit => ZzzMode::TwoQubit,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write CSV plus a JSON summary.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Export the digital gate schedule files for a config.
    EmitSchedule {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Inspect built-in presets.
    Presets {
        #[command(subcommand)]
        which: PresetsCommand,
    },
}

#[derive(Subcommand)]
enum PresetsCommand {
    /// List preset names.
    List,
    /// Print a preset config as JSON.
    Dump { name: String },
}

fn out_dir(overrides: &Overrides) -> PathBuf {
    overrides
        .out_dir
        .clone()
        .or_else(|| std::env::var_os("DQSIM_OUTPUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn load_config(path: &PathBuf, overrides: &Overrides) -> Result<ExperimentConfig, dqsim::Error> {
    let text = std::fs::read_to_string(path)?;
    let mut cfg = ExperimentConfig::parse_json(&text)?;
    if let Some(output) = &overrides.output {
        cfg.output = output.clone();
    }
    if let Some(points) = overrides.points {
        cfg.grid.points = points;
    }
    if let Some(max) = overrides.grid_max {
        cfg.grid.max = Some(max);
    }
    if let Some(t) = overrides.max_time {
        cfg.max_time = Some(t);
    }
    if let Some(d) = overrides.fock_dim {
        cfg.fock_dim = Some(d);
    }
    if let Some(steps) = &overrides.trotter_steps {
        cfg.trotter_steps = steps.clone();
    }
    if let Some(mode) = overrides.zzz_mode {
        cfg.zzz_mode = Some(mode.into());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_for(err: &dqsim::Error) -> ExitCode {
    if err.is_validation() {
        ExitCode::from(2)
    } else if err.is_numerical_abort() {
        ExitCode::from(3)
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            exit_for(&err)
        }
    }
}

fn run(cli: Cli) -> Result<(), dqsim::Error> {
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            let dir = out_dir(&overrides);
            let paths = experiment::run_to_files(&cfg, &dir)?;
            for p in &paths {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::EmitSchedule { config, overrides } => {
            let cfg = load_config(&config, &overrides)?;
            let dir = out_dir(&overrides);
            let paths = experiment::emit_schedule_to_files(&cfg, &dir)?;
            for p in &paths {
                println!("wrote {}", p.display());
            }
            Ok(())
        }
        Command::Presets { which } => {
            match which {
                PresetsCommand::List => {
                    for name in experiment::preset_names() {
                        println!("{name}");
                    }
                }
                PresetsCommand::Dump { name } => {
                    let cfg = experiment::preset(&name).ok_or_else(|| {
                        dqsim::Error::InvalidConfig(format!(
                            "unknown preset `{name}`; see `dqsim presets list`"
                        ))
                    })?;
                    print!("{}", cfg.to_json());
                }
            }
            Ok(())
        }
    }
}
