use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use specfact_cli::{exit_code, load, render, run, RenderMode, RunOptions, Task, DEFAULT_PRECISION};

#[derive(Parser)]
#[command(
    name = "specfact",
    version,
    about = "Exact matrix spectral factorization and paraunitary completion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Paraunitary U with F·U analytic in the disk, from a row of φ functions
    #[command(name = "factor-f")]
    FactorF(Common),
    /// Spectral factor S+ of M·M~ for a lower-triangular M
    Spectral(Common),
    /// Paraunitary completion of a unit row
    Complete(Common),
    /// Run the file's computation and compare with its expected values
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON)
    file: PathBuf,
    #[arg(long, value_enum)]
    render: Option<RenderMode>,
    /// Fractional digits for decimal output
    #[arg(long)]
    precision: Option<usize>,
    /// Degree cap for the Bezout multipliers
    #[arg(long)]
    max_degree: Option<usize>,
    /// Fail unless every entry of S+ is a polynomial
    #[arg(long)]
    expect_polynomial: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, args) = match cli.command {
        Command::FactorF(a) => (Task::FactorF, a),
        Command::Spectral(a) => (Task::Spectral, a),
        Command::Complete(a) => (Task::Complete, a),
        Command::Verify(a) => (Task::Verify, a),
    };
    let outcome = load(&args.file).and_then(|problem| {
        let mut opts = RunOptions::from_problem(&problem);
        opts.expect_polynomial |= args.expect_polynomial;
        opts.max_degree = args.max_degree.or(opts.max_degree);
        let report = run(&problem, task, &opts)?;
        let mode = args
            .render
            .or(problem.options.render)
            .unwrap_or(RenderMode::Exact);
        let precision = args
            .precision
            .or(problem.options.precision)
            .unwrap_or(DEFAULT_PRECISION);
        Ok((render(&report, mode, precision), report.passed()))
    });
    match outcome {
        Ok((text, passed)) => {
            print!("{text}");
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
