use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vfree::{emit_report, emit_timings, run, Command, RunConfig, DEFAULT_RADIUS};

/// Geodesics and the word problem in virtually free groups given as graphs
/// of finite groups.
#[derive(Parser, Debug)]
#[command(name = "vfree", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,

    /// Locality constant; defaults to the construction plan's k'.
    #[arg(long, global = true)]
    k: Option<usize>,

    /// Longest word checked by exhaustive verification [default: max(8, 2k)].
    #[arg(long, global = true)]
    max_len: Option<usize>,

    /// Maximum number of elements held in the ball.
    #[arg(long, global = true, default_value_t = vfree_core::oracle::DEFAULT_BUDGET)]
    budget: usize,

    /// Seed for the random cross-check run by `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the rule list to this file (`rules`).
    #[arg(long, global = true)]
    emit: Option<PathBuf>,

    /// Re-check the whole stack after every push.
    #[arg(long, global = true)]
    paranoid: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Print the construction plan.
    Build { file: PathBuf },
    /// Print the growth sequence of the ball.
    Ball {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: usize,
    },
    /// Exhaustively check that F-avoiding words are geodesic.
    Verify { file: PathBuf },
    /// Least k that passes verification.
    MinimalK { file: PathBuf },
    /// Print the rewriting rules, one `lhs -> rhs` per line.
    Rules { file: PathBuf },
    /// Rewrite a word to a geodesic.
    Reduce {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Decide whether a word is the identity (exit 0 iff it is).
    Wp {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Geodesic length of a word.
    Len {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (input, command) = match cli.command {
        Sub::Build { file } => (file, Command::Build),
        Sub::Ball { file, radius } => (file, Command::Ball { radius }),
        Sub::Verify { file } => (file, Command::Verify),
        Sub::MinimalK { file } => (file, Command::MinimalK),
        Sub::Rules { file } => (file, Command::Rules),
        Sub::Reduce { file, word } => (file, Command::Reduce { word }),
        Sub::Wp { file, word } => (file, Command::Wp { word }),
        Sub::Len { file, word } => (file, Command::Len { word }),
    };
    let config = RunConfig {
        input,
        command,
        k: cli.k,
        max_len: cli.max_len,
        budget: cli.budget,
        seed: cli.seed,
        emit: cli.emit,
        paranoid: cli.paranoid,
    };
    let report = run(&config);
    print!("{}", emit_report(&report));
    eprint!("{}", emit_timings(&report));
    ExitCode::from(report.status.code() as u8)
}
