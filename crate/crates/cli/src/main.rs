//! `hb`: command-line front end for the hermite-biehler library.
//!
//! Every command reads one JSON document (a file path, or stdin when the path
//! is omitted or `-`) and writes JSON to stdout. Exit status is 0 on success,
//! 2 for invalid input or a violated precondition, 3 for a numerical failure.

mod commands;
mod input;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "hb", version, about = "Hermite-Biehler splits and Jacobi perturbation spectra")]
struct Cli {
    /// Tolerance for the checks the CLI itself performs (inverse residual
    /// gate, verify suite).
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of a perturbed Jacobi matrix and their configuration.
    ///
    /// Input: {"jacobi": {"b": [...], "a": [...]}, "perturbation": {"kind": ..., ...}}
    Spectrum { input: Option<PathBuf> },

    /// Recover the Jacobi matrix and perturbation from a spectrum.
    ///
    /// Input: {"zeros": [[re, im], ...]}
    Inverse {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Multiplicative parameter; required when 0 is an eigenvalue.
        #[arg(long)]
        k: Option<f64>,
        /// Shift of the rank-two problem.
        #[arg(long, allow_negative_numbers = true)]
        xi: Option<f64>,
        /// Ratio `m / a_1` of the rank-two problem; required when xi is an
        /// eigenvalue.
        #[arg(long)]
        ratio: Option<f64>,
        input: Option<PathBuf>,
    },

    /// Split a polynomial into real constituents.
    ///
    /// Without --alpha: `h = p - i l q`. With --alpha: the generalized split
    /// `h = alpha p + (1 - alpha)(z - xi) q` or its around-shift pencil form.
    /// Input: {"coeffs": [[re, im], ...]} (constant first) or {"zeros": [...]}
    Decompose {
        /// `re,im` with im > 0.
        #[arg(long, value_parser = input::parse_complex, allow_hyphen_values = true)]
        alpha: Option<num_complex::Complex64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi: f64,
        input: Option<PathBuf>,
    },

    /// Trace the hodograph `t -> h(t)` and report its phase increment.
    ///
    /// Input: {"coeffs": [...]} or {"zeros": [...]}
    Hodograph {
        /// Write the samples as `t,re,im,phi` rows.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the curve as an SVG polyline.
        #[arg(long)]
        svg: Option<PathBuf>,
        input: Option<PathBuf>,
    },

    /// Run the invariant checks on one perturbed Jacobi matrix.
    ///
    /// Input: same as `spectrum`. Exits 3 if any check fails.
    Verify { input: Option<PathBuf> },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Additive,
    Multiplicative,
    Rank2,
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl From<hermite_biehler::Error> for Failure {
    fn from(e: hermite_biehler::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn run(cli: Cli) -> Result<serde_json::Value, Failure> {
    if !(cli.tol > 0.0) || !cli.tol.is_finite() {
        return Err(Failure::Invalid(format!("--tol must be positive, got {}", cli.tol)));
    }
    let tol = cli.tol;
    match cli.command {
        Command::Spectrum { input } => commands::spectrum(&input::read(input.as_deref())?),
        Command::Inverse {
            kind,
            k,
            xi,
            ratio,
            input,
        } => commands::inverse(&input::read(input.as_deref())?, kind, k, xi, ratio, tol),
        Command::Decompose { alpha, xi, input } => commands::decompose(&input::read(input.as_deref())?, alpha, xi),
        Command::Hodograph { csv, svg, input } => {
            commands::hodograph(&input::read(input.as_deref())?, csv.as_deref(), svg.as_deref())
        }
        Command::Verify { input } => commands::verify(&input::read(input.as_deref())?, tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out).expect("values serialize");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            // a failed check suite is a numerical failure with a full report
            if out.get("passed") == Some(&serde_json::Value::Bool(false)) {
                eprintln!("numerical failure: some checks did not pass");
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            match &f {
                Failure::Invalid(msg) => eprintln!("error: {msg}"),
                Failure::Numerical(msg) => eprintln!("numerical failure: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
