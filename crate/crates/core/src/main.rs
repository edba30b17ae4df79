use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lu_orbit::harness::{self, emit_report, Execution, Format, Payload};
use lu_orbit::numerics::{MatrixJson, TolerancePolicy};
use lu_orbit::stabilizer::{check_group_element, stabilize, MEMBERSHIP_TOL};
use lu_orbit::states::{special_state, DensityMatrix, StateKind};
use lu_orbit::{Error, PartyDims};

const EXIT_OK: u8 = 0;
const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_AMBIGUOUS: u8 = 3;

/// Gap threshold applied with `--strict`.
const STRICT_MIN_GAP: f64 = 1e6;

#[derive(Parser)]
#[command(name = "lu-orbit", version, about = "Local-unitary orbit dimensions of multipartite mixed states")]
struct Cli {
    /// Relative singular-value cutoff (overrides LU_ORBIT_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Exit with code 3 when any singular-value gap falls below 1e6.
    #[arg(long, global = true)]
    strict: bool,

    /// Disable parallel evaluation.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Theorem checks.
    #[command(subcommand)]
    Verify(Verify),
    /// Orbit dimension and stabilizer of a named state.
    OrbitDim {
        #[command(flatten)]
        state: StateArgs,
        /// Write the density matrix as JSON to this path.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Orbit-dimension histogram of random states.
    Survey {
        #[arg(long)]
        dims: PartyDims,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        /// Rank of the sampled states (defaults to full rank).
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check whether a tuple of local unitaries fixes a named state.
    CheckElement {
        #[command(flatten)]
        state: StateArgs,
        /// JSON list of per-party unitaries, each `{"re": [[..]], "im": [[..]]}`.
        #[arg(long)]
        unitaries: PathBuf,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Bipartite witness sweep over 2 <= m <= n.
    Thm1 {
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Multipartite witness candidate plus a full-rank survey.
    Thm2 {
        #[arg(long)]
        dims: PartyDims,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct StateArgs {
    /// witness | maximally-mixed | pure-product | bell-diagonal
    #[arg(long)]
    state: StateKind,
    #[arg(long)]
    dims: PartyDims,
    /// Comma-separated parameters (bell-diagonal probabilities).
    #[arg(long, value_delimiter = ',')]
    params: Vec<f64>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(bytes: &[u8], out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn tolerance(cli: &Cli) -> Result<TolerancePolicy, Error> {
    let base = match cli.tol {
        Some(t) => TolerancePolicy::with_relative_cutoff(t)?,
        None => TolerancePolicy::from_env()?,
    };
    if cli.strict {
        TolerancePolicy::new(base.relative_cutoff(), STRICT_MIN_GAP)
    } else {
        Ok(base)
    }
}

fn verdict(strict: bool, ambiguous: bool, failed: bool) -> u8 {
    if strict && ambiguous {
        EXIT_AMBIGUOUS
    } else if failed {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let tol = tolerance(cli)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };

    match &cli.command {
        Command::Verify(Verify::Thm1 { m_max, n_max, output }) => {
            let rows = harness::verify_theorem1(*m_max, *n_max, &tol, exec)?;
            write_output(&emit_report(Payload::Rows(&rows), output.format)?, output.out.as_deref())?;
            Ok(verdict(
                cli.strict,
                rows.iter().any(|r| r.gap_warning),
                rows.iter().any(|r| !r.pass),
            ))
        }
        Command::Verify(Verify::Thm2 { dims, samples, seed, output }) => {
            let result = harness::verify_theorem2(dims, *samples, *seed, &tol, exec)?;
            write_output(&emit_report(Payload::Theorem2(&result), output.format)?, output.out.as_deref())?;
            let ambiguous = result.survey.gap_warnings > 0
                || (!result.row.candidate_failed && result.row.gap_warning);
            Ok(verdict(cli.strict, ambiguous, !result.pass))
        }
        Command::OrbitDim { state, dump, output } => {
            let rho = build_state(state)?;
            if let Some(path) = dump {
                fs::write(path, rho.to_json()?)?;
            }
            let report = stabilize(rho.matrix(), &state.dims, &tol)?;
            write_output(&emit_report(Payload::Stabilizer(&report), output.format)?, output.out.as_deref())?;
            Ok(verdict(cli.strict, report.gap_warning, false))
        }
        Command::Survey { dims, samples, seed, rank, output } => {
            let rank = rank.unwrap_or_else(|| dims.total());
            let result = harness::survey(dims, *samples, *seed, rank, &tol, exec)?;
            write_output(&emit_report(Payload::Survey(&result), output.format)?, output.out.as_deref())?;
            Ok(verdict(cli.strict, result.gap_warnings > 0, result.bound_violations > 0))
        }
        Command::CheckElement { state, unitaries } => {
            let rho = build_state(state)?;
            let raw = fs::read_to_string(unitaries)?;
            let us = serde_json::from_str::<Vec<MatrixJson>>(&raw)?
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<Result<Vec<_>, _>>()?;
            if us.len() != state.dims.parties() {
                return Err(Error::InvalidArgument(format!(
                    "expected {} unitaries, got {}",
                    state.dims.parties(),
                    us.len()
                )));
            }
            for (u, &d) in us.iter().zip(state.dims.as_slice()) {
                if u.shape() != (d, d) {
                    return Err(Error::DimensionMismatch { expected: d, got: u.nrows().max(u.ncols()) });
                }
            }
            let residual = check_group_element(rho.matrix(), &us)?;
            let member = residual < MEMBERSHIP_TOL;
            let out = serde_json::json!({ "residual": residual, "member": member });
            println!("{out}");
            Ok(if member { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

fn build_state(args: &StateArgs) -> Result<DensityMatrix, Error> {
    special_state(args.state, &args.dims, &args.params)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
