//! `symroof`: evaluate convex roofs and conversion witnesses on symmetric
//! bipartite states, emit figure datasets and run the verification suites.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use symroof::verify::Suite;

use symroof_cli::figures::{self, FigureName, FigureParams};
use symroof_cli::parse::{self, FamilyName};
use symroof_cli::record::write_file;
use symroof_cli::{commands, exit_code};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  1  verification failure (the failing check id is printed)
  2  domain or argument error, including points in regions without a known roof
  3  I/O error while writing output";

#[derive(Parser)]
#[command(name = "symroof", version, about, after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convex roof of a monotone at a family point, with its minimizing Schmidt vector.
    #[command(after_help = EXIT_CODES)]
    EvalRoof {
        #[arg(long, value_enum)]
        family: FamilyName,
        /// `Tr[ρ W₋]` for werner, oo and pp-werner; `Tr[ρ (Q − Φ_d)]` for pp-iso.
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        /// `Tr[ρ Φ_d]` for iso, oo and pp-iso; `Tr[ρ (W₊ − Q)]` for pp-werner.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Local dimension.
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// vidal:K, renyi:ALPHA, entropy or concurrence:K.
        #[arg(long)]
        monotone: String,
        /// Also write the result as a JSON record.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conversion witness from a pure state to a Werner or isotropic state.
    #[command(after_help = EXIT_CODES)]
    EvalWitness {
        /// Comma-separated Schmidt coefficients of the source state.
        #[arg(long)]
        lambda: String,
        /// werner:A or iso:B.
        #[arg(long)]
        target: String,
        /// Local dimension of an isotropic target (default: length of λ).
        #[arg(long)]
        d: Option<usize>,
        /// Rescale λ to sum 1 instead of rejecting it.
        #[arg(long)]
        normalize: bool,
        /// Seed of the witness solver's random starts.
        #[arg(long, env = "SYMROOF_SEED", default_value_t = 0)]
        seed: u64,
        /// Also write the result as a JSON record.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Writes the dataset of a figure (CSV for curves, JSON for surfaces).
    #[command(after_help = EXIT_CODES)]
    EmitFigure {
        #[arg(value_enum)]
        name: FigureName,
        #[arg(long, default_value_t = 5)]
        d: usize,
        /// Grid points per axis.
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Source Schmidt coefficients (witness-curve).
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        normalize: bool,
        /// Seed of the witness solver (witness-curve).
        #[arg(long, env = "SYMROOF_SEED", default_value_t = 0)]
        seed: u64,
        /// Output file; the dataset goes to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the invariant suite and prints a pass/fail table.
    #[command(after_help = EXIT_CODES)]
    Verify {
        #[arg(value_parser = parse_suite, default_value = "fast")]
        suite: Suite,
        #[arg(long, env = "SYMROOF_SEED", default_value_t = 0)]
        seed: u64,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse()
}

fn command_line() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<()> {
    let echo = command_line();
    match cli.command {
        Command::EvalRoof {
            family,
            a,
            b,
            d,
            monotone,
            out,
        } => {
            let spec = parse::monotone(&monotone)?;
            let point = parse::family_point(family, a, b, d)?;
            let record = commands::eval_roof(&echo, &spec, &point)?;
            if let Some(path) = out {
                write_file(&path, &record.to_json()?)?;
            }
        }
        Command::EvalWitness {
            lambda,
            target,
            d,
            normalize,
            seed,
            out,
        } => {
            let lambda = parse::lambda(&lambda, normalize)?;
            let target = parse::target(&target)?;
            let record = commands::eval_witness(&echo, &lambda, target, d, seed)?;
            if let Some(path) = out {
                write_file(&path, &record.to_json()?)?;
            }
        }
        Command::EmitFigure {
            name,
            d,
            points,
            lambda,
            normalize,
            seed,
            out,
        } => {
            let lambda = lambda.map(|l| parse::lambda(&l, normalize)).transpose()?;
            let params = FigureParams {
                d,
                points,
                lambda,
                seed,
            };
            let record = figures::emit(name, &echo, &params)?;
            let text = record.encode(name.format())?;
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!("wrote {} rows to {}", record.rows(), path.display());
                }
                None => print!("{text}"),
            }
        }
        Command::Verify { suite, seed, out } => {
            commands::verify(&echo, suite, seed, out.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
