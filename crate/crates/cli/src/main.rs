//! `qwalk`: band structures, phase diagrams, quench traces and state
//! reconstruction for split-step quantum walks, written as CSV and JSON.

mod angle;
mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qwalk_core::TimeFrame;
use thiserror::Error;

use angle::parse_angle;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Split-step quantum walk topology and quench dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quasienergy band and Bloch vector: band.csv
    Band(BandArgs),
    /// Invariant doublets over the (theta1, theta2) square: phase_diagram.csv
    PhaseDiagram(PhaseDiagramArgs),
    /// Quench trace: pgp.csv, dtop.csv, lambda.csv, critical.json
    Quench(QuenchArgs),
    /// Synthesize count sets for a trajectory state and reconstruct it
    Reconstruct(ReconstructArgs),
    /// List the scenario presets
    Presets,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    /// Named scenario (see `qwalk presets`)
    #[arg(long)]
    pub preset: Option<String>,
    /// First coin angle, e.g. 8pi/9
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angle, conflicts_with = "preset")]
    pub theta1: Option<f64>,
    /// Second coin angle, e.g. -pi/3
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angle, conflicts_with = "preset")]
    pub theta2: Option<f64>,
    /// Time frame: standard, shift1, shift2, shift3, symmetric-a, symmetric-b
    #[arg(long, conflicts_with = "preset")]
    pub frame: Option<TimeFrame>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory
    #[arg(long, env = "QWALK_OUT", default_value = ".")]
    pub out: PathBuf,
}

fn parse_kgrid(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|_| format!("'{s}' is not a grid size"))?;
    if m < 128 || m % 2 == 1 || m > 65536 {
        return Err("grid size must be even and in [128, 65536]".into());
    }
    Ok(m)
}

fn parse_dt(s: &str) -> Result<f64, String> {
    let dt: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !(dt > 0.0 && dt <= 0.5) {
        return Err("time step must lie in (0, 0.5]".into());
    }
    Ok(dt)
}

#[derive(Debug, Args)]
struct BandArgs {
    #[command(flatten)]
    walk: WalkArgs,
    /// Momentum grid size
    #[arg(long, default_value_t = 1024, value_parser = parse_kgrid)]
    kgrid: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct PhaseDiagramArgs {
    /// Cells per axis
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(32..=2048))]
    res: u32,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitBand {
    /// Lower band at (theta, pi)
    Trivial,
    /// Lower band at (pi, theta)
    Nontrivial,
}

#[derive(Debug, Clone, Args)]
pub struct InitArgs {
    /// Flat band the walker starts in
    #[arg(long, value_enum, default_value_t = InitBand::Trivial, conflicts_with = "preset")]
    pub init_band: InitBand,
    /// Free angle of the initial flat band; defaults to the matching post-quench angle
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angle, conflicts_with = "preset")]
    pub init_theta: Option<f64>,
    /// Frame of the initial system; a different frame makes a frame quench
    #[arg(long, conflicts_with = "preset")]
    pub init_frame: Option<TimeFrame>,
}

#[derive(Debug, Args)]
struct QuenchArgs {
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    init: InitArgs,
    /// Walk steps; also the continuous-time horizon
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=10000))]
    steps: u32,
    /// Continuous time step
    #[arg(long, default_value_t = 0.05, value_parser = parse_dt)]
    dt: f64,
    /// Base momentum grid size
    #[arg(long, default_value_t = 1024, value_parser = parse_kgrid)]
    kgrid: usize,
    /// Recorded in the manifest; quench traces are deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    /// Named scenario whose trajectory supplies the true state
    #[arg(long, default_value = "fig1")]
    preset: String,
    /// Trajectory step to reconstruct
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(0..=200))]
    steps: u32,
    /// Shots per measurement setting
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    /// Use outcome probabilities in place of sampled counts
    #[arg(long, conflicts_with = "shots")]
    exact_counts: bool,
    /// Seed for count sampling and annealing
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Band(a) => commands::band(&a.walk, a.kgrid, &a.out),
        Command::PhaseDiagram(a) => commands::phase_diagram(a.res as usize, &a.out),
        Command::Quench(a) => commands::quench(&commands::QuenchConfig {
            walk: a.walk,
            init: a.init,
            steps: a.steps as usize,
            dt: a.dt,
            kgrid: a.kgrid,
            seed: a.seed,
            out: a.out,
        }),
        Command::Reconstruct(a) => commands::reconstruct(&commands::ReconstructConfig {
            preset: a.preset,
            steps: a.steps as usize,
            shots: (!a.exact_counts).then_some(a.shots),
            seed: a.seed,
            out: a.out,
        }),
        Command::Presets => {
            commands::presets();
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
