//! Command-line front end: CSV sweeps, the invariant suite and the plasmon
//! loss estimate.

pub mod commands;
pub mod config;
pub mod csv;
pub mod validate;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;

/// Exit status: invariant failure.
pub const EXIT_VALIDATION: u8 = 1;
/// Exit status: bad arguments or parameters.
pub const EXIT_ARGS: u8 = 2;
/// Exit status: a numerical method did not converge.
pub const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Args(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("validation failed")]
    Validation,
    #[error(transparent)]
    Numeric(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Args(_) => EXIT_ARGS,
            CliError::Io(_) | CliError::Validation => EXIT_VALIDATION,
            CliError::Numeric(e) => match e {
                Error::NonConvergence { .. } | Error::RootNotFound(_) | Error::Eigen(_) => EXIT_NONCONVERGENCE,
                _ => EXIT_ARGS,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fisheye", version, about = "Atoms coupled through a mirrored Maxwell fish-eye lens")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Plain-text `key = value` file; flags take precedence over it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Coarser grids.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Add Schrödinger-simulator columns where available.
    #[arg(long, global = true)]
    pub simulate: bool,
    /// Largest mode index kept by the simulator.
    #[arg(long = "l-max", global = true)]
    pub l_max: Option<usize>,
    /// Number of sweep samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suite and print a pass/fail table.
    Validate,
    /// Dipole-dipole shift along the diameter with atom 1 near the mirror.
    DdiSweep(DdiArgs),
    /// Populations and Bell-state overlap of two antipodal atoms over time.
    Dynamics(PhysArgs),
    /// Entanglement error sweeps.
    Fidelity {
        #[command(subcommand)]
        mode: FidelityMode,
    },
    /// Plasmonic realization: effective index and loss estimate.
    Plasmon {
        #[command(subcommand)]
        cmd: PlasmonCmd,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DdiArgs {
    /// Comma-separated lens radii in wavelengths.
    #[arg(long)]
    pub radii: Option<String>,
    /// Disk thickness in wavelengths.
    #[arg(long)]
    pub b: Option<f64>,
    /// Distance of atom 1 from the mirror, in wavelengths.
    #[arg(long)]
    pub offset: Option<f64>,
    /// Points along the diameter.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PhysArgs {
    /// Lens radius in wavelengths.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Set the radius so that `Re nu` equals this value.
    #[arg(long = "nu-center")]
    pub nu_center: Option<f64>,
    /// Loss parameter: imaginary part of the frequency relative to its real part.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Reduced radial position of the antipodal atoms.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Disk thickness in wavelengths.
    #[arg(long)]
    pub b: Option<f64>,
    /// Ratio of atomic frequency to free-space decay rate (simulator only).
    #[arg(long = "omega0-over-gamma0")]
    pub omega0_over_gamma0: Option<f64>,
    /// End of the time grid in units of 1/Gamma0.
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub phys: PhysArgs,
    /// Comma-separated radii (vs-loss).
    #[arg(long)]
    pub radii: Option<String>,
    /// Comma-separated loss values (overrides the log grid in vs-loss).
    #[arg(long)]
    pub alphas: Option<String>,
    /// Comma-separated offsets of `Re nu` from the centre (vs-detuning).
    #[arg(long)]
    pub detunings: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum FidelityMode {
    /// Error against loss at several radii.
    VsLoss(FidelityArgs),
    /// Error against detuning of `Re nu` from a half-integer.
    VsDetuning(FidelityArgs),
    /// Error against radius at half-integer `Re nu`, closed form and approximation.
    VsRadius(FidelityArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StackArgs {
    #[arg(long = "eps-metal-re", allow_hyphen_values = true)]
    pub eps_metal_re: Option<f64>,
    #[arg(long = "eps-metal-im")]
    pub eps_metal_im: Option<f64>,
    #[arg(long = "eps-dielectric")]
    pub eps_dielectric: Option<f64>,
    #[arg(long = "lambda-nm")]
    pub lambda_nm: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum PlasmonCmd {
    /// Effective index against layer height.
    IndexSweep {
        #[command(flatten)]
        stack: StackArgs,
        #[arg(long = "d-max")]
        d_max: Option<f64>,
        #[arg(long = "d-step")]
        d_step: Option<f64>,
    },
    /// Loss budget and fidelity of the plasmonic lens.
    Estimate {
        #[command(flatten)]
        stack: StackArgs,
        #[arg(long)]
        r0: Option<f64>,
        /// Mirror power reflectivity r^2.
        #[arg(long)]
        reflectivity: Option<f64>,
        /// Purcell factor into the plasmon.
        #[arg(long)]
        eta: Option<f64>,
        /// Also report the fidelity with the mirror loss from the bounce-time formula.
        #[arg(long = "recomputed-mirror-loss")]
        recomputed_mirror_loss: bool,
    },
}

/// Parse arguments and run; returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ARGS } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Validation) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
