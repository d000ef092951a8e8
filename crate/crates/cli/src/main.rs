use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gammoid_cli::commands::{self, oracle_limit, OracleMode};
use gammoid_cli::fuzz::fuzz;
use gammoid_cli::report::Report;
use gammoid_cli::write_atomically;
use strict_gammoid::Verdict;

/// Decide single-element deletions of strict gammoids and contractions of
/// transversal matroids.
#[derive(Parser)]
#[command(name = "gammoid", version)]
struct Cli {
    /// Largest ground set the subset oracles accept [default: $MATROID_MAX_ORACLE_N or 20].
    #[arg(long, global = true)]
    max_n: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    #[arg(long)]
    input: PathBuf,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Check {
    #[command(flatten)]
    io: Io,
    #[arg(long)]
    element: usize,
    /// Exit with 0 on YES and 1 on NO.
    #[arg(long)]
    exit_status: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Is the deletion of one vertex's element still a strict gammoid?
    DeleteCheck(Check),
    /// Is the contraction of one element still transversal?
    ContractCheck(Check),
    /// Add every arc that keeps the matroid, drop arcs out of sinks.
    Maximalize(Io),
    /// Cyclic flats with positive γ, read from the maximal representation.
    ReadFlats(Io),
    /// Digraph to its neighbourhood system, or bipartite to its digraph.
    Dualize(Io),
    /// Subset-enumeration tables and verdicts.
    Oracle {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        mode: OracleMode,
        /// Visit only cyclic subsets.
        #[arg(long)]
        pruned: bool,
        #[arg(long)]
        exit_status: bool,
    },
    /// Compare both deciders with the oracles on a seeded corpus.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        exit_status: bool,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let text = report.to_json();
    match out {
        Some(path) => write_atomically(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let limit = oracle_limit(cli.max_n)?;
    let with_input =
        |io: &Io, f: &dyn Fn(&str) -> Result<Report>| -> Result<(Report, Option<PathBuf>)> {
            let text = read(&io.input)?;
            let report = f(&text).with_context(|| io.input.display().to_string())?;
            Ok((report, io.out.clone()))
        };
    let (report, out, exit_status) = match &cli.command {
        Command::DeleteCheck(c) => {
            let (r, o) = with_input(&c.io, &|t| commands::delete_check(t, c.element, limit))?;
            (r, o, c.exit_status)
        }
        Command::ContractCheck(c) => {
            let (r, o) = with_input(&c.io, &|t| commands::contract_check(t, c.element, limit))?;
            (r, o, c.exit_status)
        }
        Command::Maximalize(io) => {
            let (r, o) = with_input(io, &commands::maximalize_cmd)?;
            (r, o, false)
        }
        Command::ReadFlats(io) => {
            let (r, o) = with_input(io, &commands::read_flats_cmd)?;
            (r, o, false)
        }
        Command::Dualize(io) => {
            let (r, o) = with_input(io, &|t| commands::dualize(t, limit))?;
            (r, o, false)
        }
        Command::Oracle {
            io,
            mode,
            pruned,
            exit_status,
        } => {
            let (r, o) = with_input(io, &|t| commands::oracle(t, *mode, *pruned, limit))?;
            (r, o, *exit_status)
        }
        Command::Fuzz {
            seed,
            count,
            out,
            exit_status,
        } => (fuzz(*seed, *count, limit)?, out.clone(), *exit_status),
    };
    emit(&report, out.as_deref())?;
    Ok(match report.verdict() {
        Some(Verdict::No) if exit_status => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
