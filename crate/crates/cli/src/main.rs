mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact solvers for transferable-utility cooperative games.
#[derive(Parser, Debug)]
#[command(name = "tugame", version)]
struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pre-kernel element by iterated class-system solves.
    Prekernel {
        game: PathBuf,
        /// Starting allocation, e.g. 10,0,0,0 (default: equal split).
        #[arg(long)]
        start: Option<String>,
        /// Print every iteration's selection and linear system.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Pre-nucleolus by the pre-kernel solver, the sequential LP, or both.
    Prenucleolus {
        game: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Maximal bilateral transfers towards a kernel element.
    Stearns {
        game: PathBuf,
        #[arg(long)]
        start: String,
        /// Relative stopping tolerance as p/q.
        #[arg(long)]
        tol: String,
        #[arg(long, default_value_t = tugame::stearns::DEFAULT_MAX_STEPS)]
        max_steps: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Least-core value, witness and tight coalitions.
    Leastcore {
        game: PathBuf,
        /// Also enumerate the least-core vertices.
        #[arg(long)]
        vertices: bool,
    },
    /// Core non-emptiness, and membership of an allocation.
    Core {
        game: PathBuf,
        #[arg(long)]
        check: Option<String>,
    },
    /// Monotonicity, superadditivity, convexity and veto players.
    Props { game: PathBuf },
    /// Shapley value.
    Shapley { game: PathBuf },
    /// Balancedness of a coalition collection, e.g. `balanced 3 1,2 1,3 2,3`.
    Balanced {
        n: usize,
        #[arg(required = true)]
        collection: Vec<String>,
    },
    /// Audit of the per-player reduced-game procedure.
    RgpAudit {
        game: PathBuf,
        /// Payoffs used for removed players at every level.
        #[arg(long)]
        supply: Option<String>,
    },
    /// Sequential-LP pre-nucleolus only.
    Oracle { game: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Conjugation,
    LpOracle,
    Both,
}

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
}

const EXIT_USAGE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_NONCONVERGED: u8 = 3;

fn max_players() -> Result<usize, CliError> {
    match std::env::var("TUGAME_MAX_N") {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("TUGAME_MAX_N must be a count, got `{raw}`"))),
        Err(_) => Ok(12),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_target(false)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let started = Instant::now();
    let outcome = max_players().and_then(|max_n| commands::run(cli.command, max_n));
    match outcome {
        Ok(report) => {
            if cli.json {
                println!("{:#}", report.json(started.elapsed()));
            } else {
                print!("{}", report.text());
            }
            if report.nonconverged {
                ExitCode::from(EXIT_NONCONVERGED)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
