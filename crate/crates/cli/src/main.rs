mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covclone::optimizer::CurveMode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Optimizer(#[from] covclone::optimizer::OptimizerError),

    #[error(transparent)]
    Channel(#[from] covclone::channels::ChannelError),

    #[error(transparent)]
    Relativity(#[from] covclone::relativity::RelativityError),
}

#[derive(Debug, Parser)]
#[command(name = "covclone", version, about = "Optimal covariant 1->2 photon cloning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity curve over a grid of polar angles.
    Curve(CurveArgs),
    /// Wigner phase of a photon momentum under a Lorentz transformation.
    Wigner(WignerArgs),
    /// Solve for the optimal cloner and apply it to one input state.
    Clone(CloneArgs),
    /// Eavesdropper fidelities for the four-state quadruples.
    Bb84(Bb84Args),
    /// Run the identity, covariance and agreement checks.
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Analytic,
    Sdp,
    Both,
}

impl From<ModeArg> for CurveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Analytic => CurveMode::Analytic,
            ModeArg::Sdp => CurveMode::Sdp,
            ModeArg::Both => CurveMode::Both,
        }
    }
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 1)]
    pub variant: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xi_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_negative_numbers = true)]
    pub xi_max: f64,
    #[arg(long, default_value_t = 41)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Both)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    /// Rotation as `axis,angle` with axis `x`, `y`, `z` or three components.
    #[arg(long, allow_hyphen_values = true)]
    pub rotate: Option<String>,
    /// Boost velocity `vx,vy,vz`, applied after the rotation.
    #[arg(long, allow_hyphen_values = true)]
    pub boost: Option<String>,
    /// Photon momentum `omega,theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CloneArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub xi: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 1)]
    pub variant: usize,
    /// Wigner phase applied to the input before cloning.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta_w: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Bb84Args {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve(a) => commands::curve(&a),
        Command::Wigner(a) => commands::wigner(&a),
        Command::Clone(a) => commands::clone(&a),
        Command::Bb84(a) => commands::bb84(&a),
        Command::Verify => {
            return if verify::run(&mut std::io::stdout().lock()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
