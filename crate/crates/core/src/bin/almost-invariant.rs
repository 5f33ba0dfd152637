use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use almost_invariant::conjecture::{run_experiment, Candidate, ExperimentConfig};
use almost_invariant::io::{self, Certificate, Kind};
use almost_invariant::verify::verify_text;
use almost_invariant::Error;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

const THREADS_VAR: &str = "ALMOST_INVARIANT_THREADS";

/// Invariant approximations of almost-invariant subspaces, operators and subsets over
/// finite fields, with independently checkable certificates.
#[derive(Parser)]
#[command(name = "almost-invariant", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Instance JSON file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Certificate output path; stdout when omitted.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Suppress the summary line on stderr.
    #[arg(long)]
    quiet: bool,
}

#[derive(Args)]
struct ConjectureArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Largest ambient dimension; each trial draws d in 2..=dim.
    #[arg(long, default_value_t = 6)]
    dim: usize,
    #[arg(long, default_value_t = 8)]
    group_cap: usize,
    /// Most vectors swapped into the invariant starting subspace.
    #[arg(long, default_value_t = 1)]
    budget: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated bounds c(r) to flag: any of 2r, r^2, r(r+1)^(r+1).
    #[arg(long, value_delimiter = ',', default_value = "2r,r^2,r(r+1)^(r+1)")]
    candidates: Vec<String>,
    /// Directory receiving report.csv and summary.json.
    #[arg(long, value_name = "DIR", default_value = ".")]
    out_dir: PathBuf,
    #[arg(long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant approximation of a finite collection of subspaces.
    Wagner(RunArgs),
    /// Equivariant approximation of an almost-equivariant operator.
    Operator(RunArgs),
    /// Rational form of an almost Frobenius-stable subspace.
    GaloisSubspace(RunArgs),
    /// Rational approximation of an almost Frobenius-fixed operator.
    GaloisOperator(RunArgs),
    /// Majority set of an almost-invariant subset of a finite G-set.
    SetMajority(RunArgs),
    /// Randomized experiments on the majority subspace.
    Conjecture(ConjectureArgs),
    /// Re-check a certificate against its instance from scratch.
    Verify {
        #[arg(long, value_name = "PATH")]
        cert: PathBuf,
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code() as u8, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 3, message: format!("cannot read {}: {e}", path.display()) })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure { code: 4, message: format!("cannot write {}: {e}", path.display()) })
}

fn threads() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(Failure { code: 3, message: format!("{THREADS_VAR} must be a positive integer, got {v:?}") }),
        },
    }
}

fn emit(cert: &Certificate, out: Option<&Path>, quiet: bool) -> Result<(), Failure> {
    let text = cert.to_json();
    match out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if !quiet {
        eprintln!("{}", cert.summary_line());
    }
    Ok(())
}

fn run_kind(kind: Kind, args: &RunArgs) -> Result<(), Failure> {
    let text = read(&args.input)?;
    let cert = io::run_text(&text, Some(kind), threads()?)?;
    emit(&cert, args.out.as_deref(), args.quiet)
}

fn conjecture(args: &ConjectureArgs) -> Result<(), Failure> {
    let candidates = args.candidates.iter().map(|c| c.parse::<Candidate>()).collect::<Result<Vec<_>, _>>()?;
    let cfg = ExperimentConfig {
        p: args.p,
        n: args.n,
        dim: args.dim,
        group_cap: args.group_cap,
        budget: args.budget,
        trials: args.trials,
        seed: args.seed,
        candidates,
        threads: threads()?,
    };
    let report = run_experiment(&cfg).map_err(|e| match e {
        Error::NotPrime(_) | Error::DegreeTooLarge { .. } => Failure { code: 3, message: e.to_string() },
        other => other.into(),
    })?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Failure { code: 4, message: format!("cannot create {}: {e}", args.out_dir.display()) })?;
    write(&args.out_dir.join("report.csv"), &report.to_csv()?)?;
    write(&args.out_dir.join("summary.json"), &report.summary_json())?;
    if !args.quiet {
        eprintln!("{}", Certificate::Conjecture(report).summary_line());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Wagner(a) => run_kind(Kind::Wagner, a),
        Command::Operator(a) => run_kind(Kind::Operator, a),
        Command::GaloisSubspace(a) => run_kind(Kind::GaloisSubspace, a),
        Command::GaloisOperator(a) => run_kind(Kind::GaloisOperator, a),
        Command::SetMajority(a) => run_kind(Kind::SetMajority, a),
        Command::Conjecture(a) => conjecture(a),
        Command::Verify { cert, input } => {
            let cert = read(cert)?;
            let inst = read(input)?;
            let ok = verify_text(&cert, &inst)
                .map_err(|e| Failure { code: e.exit_code() as u8, message: e.to_string() })?;
            eprintln!("{ok}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
