//! `qlift`: file-based front end for the qlift toolkit.

mod commands;
mod error;
mod files;
mod report;
mod runlog;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;
use runlog::RunRecord;

#[derive(Parser, Debug)]
#[command(
    name = "qlift",
    version,
    about = "Liftings, reductions and measures for composite quantum systems"
)]
pub struct Cli {
    /// File the run record is appended to.
    #[arg(
        long,
        global = true,
        env = "QLIFT_RUN_LOG",
        default_value = "qlift-runs.log"
    )]
    pub run_log: PathBuf,

    /// Skip the run log.
    #[arg(long, global = true)]
    pub no_run_log: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write rho (x) D.
    Lift(LiftArgs),
    /// Partial trace over the environment or the system.
    Reduce(ReduceArgs),
    /// Classify a stored lifting.
    Analyze(AnalyzeArgs),
    /// Purification of a state with an environment of the given dimension.
    Purify(PurifyArgs),
    /// Reduced dynamics tr_E(U(t) (rho (x) D) U(t)^+).
    Evolve(EvolveArgs),
    /// Spectral Choquet decomposition, or the non-uniqueness witness.
    Choquet(ChoquetArgs),
    /// Monte-Carlo estimate of tr(A B) from Gaussian samples.
    Estimate(EstimateArgs),
    /// Empirical state (1/N) sum z z^+ from Gaussian samples.
    Empirical(EmpiricalArgs),
    /// Lift a classical measure through a lift table.
    ClassicalLift(ClassicalLiftArgs),
    /// Randomized search for a non-factorizing lifting.
    Nogo(NogoArgs),
}

/// Report destination shared by report-only verbs.
#[derive(Args, Debug, Clone)]
pub struct ReportOut {
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LiftArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the lifting matrix.
    #[arg(long)]
    pub emit_lifting: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Trace out the environment, keep the system.
    Env,
    /// Trace out the system, keep the environment.
    Sys,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// `dS,dE`.
    #[arg(long, value_parser = parse_dims)]
    pub dims: (usize, usize),
    #[arg(long, value_enum, default_value = "env")]
    pub side: Side,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub lifting: PathBuf,
    #[arg(long, value_parser = parse_dims)]
    pub dims: (usize, usize),
    /// Residual threshold for a product verdict.
    #[arg(long, env = "QLIFT_TOL", default_value_t = 1e-8)]
    pub tol: f64,
    /// Write the extracted reference state as a matrix file.
    #[arg(long)]
    pub reference_out: Option<PathBuf>,
    #[command(flatten)]
    pub report: ReportOut,
}

#[derive(Args, Debug)]
pub struct PurifyArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub denv: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[arg(long)]
    pub ham: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the reduced channel matrix.
    #[arg(long)]
    pub emit_channel: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChoquetArgs {
    #[arg(long, required_unless_present = "witness", conflicts_with = "witness")]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub witness: bool,
    /// Projector list file (with `--state`) or report copy (with `--witness`).
    #[arg(long, required_unless_present = "witness")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub obs: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub report: ReportOut,
}

#[derive(Args, Debug)]
pub struct EmpiricalArgs {
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ClassicalLiftArgs {
    #[arg(long)]
    pub upsilon: PathBuf,
    #[arg(long, conflicts_with = "split", required_unless_present = "split")]
    pub table: Option<PathBuf>,
    /// `Q1=i,j,..`: points of `Q` sent to `p1`.
    #[arg(long, value_parser = parse_split, requires_all = ["p1", "p2"])]
    pub split: Option<SplitSet>,
    #[arg(long)]
    pub p1: Option<usize>,
    #[arg(long)]
    pub p2: Option<usize>,
    /// Size of `P` for `--split`; defaults to `max(p1, p2) + 1`.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct NogoArgs {
    #[arg(long)]
    pub ds: usize,
    #[arg(long)]
    pub de: usize,
    #[arg(long)]
    pub trials: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(
        long,
        env = "QLIFT_TOL",
        default_value_t = 1e-8,
        allow_negative_numbers = true
    )]
    pub tol: f64,
    #[command(flatten)]
    pub report: ReportOut,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected dS,dE, got {s:?}"))?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let (a, b) = (p(a)?, p(b)?);
    if a == 0 || b == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok((a, b))
}

/// Points of `Q` given to `--split`.
#[derive(Clone, Debug)]
pub struct SplitSet(pub Vec<usize>);

fn parse_split(s: &str) -> Result<SplitSet, String> {
    let list = s.strip_prefix("Q1=").unwrap_or(s);
    list.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(SplitSet)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let reason = e.to_string();
            let reason = reason
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("{}", CliError::usage(reason));
            return ExitCode::from(error::Kind::Usage.code());
        }
    };

    let mut record = RunRecord {
        argv: std::env::args().collect(),
        ..RunRecord::default()
    };
    let start = Instant::now();
    let outcome = commands::run(&cli.command, &mut record);
    record.wall_time_s = start.elapsed().as_secs_f64();

    let failure = match outcome {
        Ok(out) => {
            print!("{}", out.report.render());
            out.failure
        }
        Err(e) => Some(e),
    };
    record.exit_code = failure.as_ref().map_or(0, |e| e.kind.code());
    if let Some(e) = &failure {
        eprintln!("{e}");
    }
    if !cli.no_run_log {
        if let Err(e) = record.append_to(&cli.run_log) {
            eprintln!("{e}");
            if failure.is_none() {
                return ExitCode::from(e.kind.code());
            }
        }
    }
    ExitCode::from(record.exit_code)
}
