//! `jacobi-inverse`: the forward map, the solvability conditions, the inverse
//! reconstruction and the spring-chain conversion over JSON files.
//!
//! Exit codes: 0 success, 1 semantic failure (a condition fails, the matrix
//! is not realizable, the Green routes disagree), 2 input error.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};
use jacobi_inverse::{SolveOptions, Tolerance64};

use commands::ConvertMode;

/// Why a command stopped before producing its normal output.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Semantic(String),
}

#[derive(Parser)]
#[command(
    name = "jacobi-inverse",
    version,
    about = "Two-spectra inverse problem for locally perturbed Jacobi matrices"
)]
struct Cli {
    /// Relative tolerance for coincidence tests.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perturb a matrix and print both spectra.
    Forward {
        /// Matrix JSON file, or `-` for stdin.
        matrix: PathBuf,
        #[arg(long)]
        site: usize,
        #[arg(long = "theta-sq")]
        theta_sq: f64,
        #[arg(long = "K", allow_hyphen_values = true)]
        k: f64,
    },
    /// Evaluate the solvability conditions on spectral data.
    Check {
        /// Spectral data JSON file, or `-` for stdin.
        data: PathBuf,
    },
    /// Reconstruct every family of matrix pairs from spectral data.
    ///
    /// A `J` field next to the data is located among the families.
    Invert {
        /// Spectral data JSON file, or `-` for stdin.
        data: PathBuf,
        /// Grid points per split parameter.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Seed for the extra random split parameters.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra random split parameters per family.
        #[arg(long = "random-samples", default_value_t = 0)]
        random_samples: usize,
    },
    /// Convert between spring chains and Jacobi matrices.
    #[command(group(ArgGroup::new("mode").required(true).args(["to_jacobi", "to_system"])))]
    Convert {
        /// Chain JSON file to turn into a matrix.
        #[arg(long = "to-jacobi")]
        to_jacobi: Option<PathBuf>,
        /// Matrix JSON file to turn into a chain with `m_0 = 1`.
        #[arg(long = "to-system", requires = "gamma0")]
        to_system: Option<PathBuf>,
        /// Stiffness of the wall spring at the first mass.
        #[arg(long, allow_hyphen_values = true)]
        gamma0: Option<f64>,
    },
    /// Evaluate the three formulas for G(x, n, n) and compare them.
    Green {
        /// Matrix JSON file, or `-` for stdin.
        matrix: PathBuf,
        #[arg(long)]
        site: usize,
        #[arg(long = "theta-sq")]
        theta_sq: f64,
        #[arg(long = "K", allow_hyphen_values = true)]
        k: f64,
        /// Evaluation points, comma separated or repeated.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<f64>,
    },
}

fn tolerance(rel: Option<f64>) -> Result<Tolerance64, Failure> {
    match rel {
        None => Ok(Tolerance64::default()),
        Some(r) => Tolerance64::default()
            .with_rel_tol(r)
            .ok_or_else(|| Failure::Input(format!("--tol {r} must lie in (0, 1)"))),
    }
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let tol = tolerance(cli.tol)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Forward { matrix, site, theta_sq, k } => commands::forward(&matrix, site, theta_sq, k, &tol, out),
        Command::Check { data } => commands::check(&data, &tol, out),
        Command::Invert { data, samples, seed, random_samples } => {
            let options = SolveOptions { samples_per_dim: samples, seed, random_samples };
            commands::invert(&data, &options, &tol, out)
        }
        Command::Convert { to_jacobi, to_system, gamma0 } => {
            let mode = match (to_jacobi, to_system) {
                (Some(p), _) => ConvertMode::ToJacobi(p),
                (None, Some(p)) => ConvertMode::ToSystem(p, gamma0.expect("required by clap")),
                (None, None) => unreachable!("clap requires one mode"),
            };
            commands::convert(&mode, &tol, out)
        }
        Command::Green { matrix, site, theta_sq, k, lambda } => {
            commands::green(&matrix, site, theta_sq, k, &lambda, &tol, out)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Semantic(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
