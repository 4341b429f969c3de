use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use parastd_cli::{parse_problem, run, Command, RunOptions};

/// Generic and comprehensive standard bases of parametric polynomial ideals.
#[derive(Parser)]
#[command(name = "parastd", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generic standard basis over V(Q) with its excluded polynomial h.
    Gsb(Args),
    /// Generic reduced standard basis, truncated for local orders.
    Reduce(Args),
    /// Partition of parameter space with a basis per cell.
    Comprehensive(Args),
    /// Partition by local Hilbert polynomial and Milnor number.
    Hilbert(Args),
    /// Division of --dividend (or the first generator) by the generators.
    Divide(Args),
    /// Specialize at --point and compute a standard basis from scratch.
    Specialize(Args),
    /// Check the generic staircase at sample points.
    Verify(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Args {
    /// Problem file.
    problem: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Truncation degree for series output.
    #[arg(long)]
    trunc: Option<u64>,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Number of random sample points for verify.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Parameter values, e.g. a=2,b=-1/3. Repeatable.
    #[arg(long)]
    point: Vec<String>,
    #[arg(long)]
    dividend: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (command, args) = match cli.command {
        Cmd::Gsb(a) => (Command::Gsb, a),
        Cmd::Reduce(a) => (Command::Reduce, a),
        Cmd::Comprehensive(a) => (Command::Comprehensive, a),
        Cmd::Hilbert(a) => (Command::Hilbert, a),
        Cmd::Divide(a) => (Command::Divide, a),
        Cmd::Specialize(a) => (Command::Specialize, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };
    let text = match std::fs::read_to_string(&args.problem) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error[io]: {}: {e}", args.problem.display());
            return ExitCode::from(1);
        }
    };
    let problem = match parse_problem(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error[{}]: {}: {e}", e.code(), args.problem.display());
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        trunc: args.trunc,
        max_depth: args.max_depth,
        samples: args.samples,
        seed: args.seed,
        points: args.point,
        dividend: args.dividend,
    };
    match run(command, &problem, &opts) {
        Ok(report) => {
            match args.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!("{}", report.json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
