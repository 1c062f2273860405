mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Result;
use crate::output::RunConfig;

/// Capacity, eigenvalue and closed-range experiments on planar open sets.
#[derive(Debug, Parser)]
#[command(name = "closedrange", version)]
struct Cli {
    /// Worker threads (default: available parallelism); results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; a `.meta.json` sidecar is written next to it. Defaults to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SceneArgs {
    /// Scene JSON file.
    #[arg(long, conflicts_with = "named")]
    pub scene: Option<PathBuf>,
    /// Built-in scene, e.g. `lattice_discs(0.1,1)`.
    #[arg(long)]
    pub named: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Preset {
    SlitShrink,
    ArctanLadder,
    CapacityConvergence,
    Exhaustion,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Logarithmic capacity of the complement clipped to a disc.
    Cap(CapArgs),
    /// First Dirichlet eigenvalue of a rasterized domain.
    Lambda1(Lambda1Args),
    /// Closed-range verdict.
    Classify(ClassifyArgs),
    /// Bergman-space dimension verdict.
    Bergman(BergmanArgs),
    /// Parameter sweeps as CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct CapArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Clip center `x,y`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct Lambda1Args {
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Box `x0,y0,x1,y1`; defaults to the base disc's bounding box.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bx: Option<String>,
    /// Grid steps, coarse to fine; fractions such as `1/32` are accepted.
    #[arg(long, value_delimiter = ',', default_value = "1/32,1/64")]
    pub h: Vec<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_outer: usize,
    /// Writes the finest-grid eigenvector as CSV `(x, y, value)`.
    #[arg(long)]
    pub emit_eigvector: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Capacity cells per clip.
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
    /// Centers per period-cell side.
    #[arg(long, default_value_t = 8)]
    pub density: usize,
    /// Witness shells.
    #[arg(long, default_value_t = 6)]
    pub shells: usize,
    /// Witness samples per cell side.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct BergmanArgs {
    #[command(flatten)]
    pub scene: SceneArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    /// Scene for the `exhaustion` preset (default `lattice_discs(0.1,1)`).
    #[command(flatten)]
    pub scene: SceneArgs,
    /// Grid step of the `slit_shrink` preset.
    #[arg(long, default_value = "1/64")]
    pub h: String,
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let start = Instant::now();
    let (name, scene, params) = match &cli.command {
        Command::Cap(a) => ("cap", &a.scene, serde_json::to_value(a)?),
        Command::Lambda1(a) => ("lambda1", &a.scene, serde_json::to_value(a)?),
        Command::Classify(a) => ("classify", &a.scene, serde_json::to_value(a)?),
        Command::Bergman(a) => ("bergman", &a.scene, serde_json::to_value(a)?),
        Command::Sweep(a) => ("sweep", &a.scene, serde_json::to_value(a)?),
    };
    let config = RunConfig {
        command: name.into(),
        scene: scene
            .scene
            .as_ref()
            .map(|p| p.display().to_string())
            .or_else(|| scene.named.clone()),
        params,
        out: cli.out.clone(),
        seed: cli.seed,
    };
    let text = match &cli.command {
        Command::Cap(a) => commands::cap(&config, a)?,
        Command::Lambda1(a) => commands::lambda1(&config, a)?,
        Command::Classify(a) => commands::classify(&config, a)?,
        Command::Bergman(a) => commands::bergman(&config, a)?,
        Command::Sweep(a) => commands::sweep(a)?,
    };
    output::emit(&config, &text, start.elapsed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
