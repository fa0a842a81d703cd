//! `meanelem derive|verify|propagate`.

mod commands;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use meanelem_core::{Error, Theory};

#[derive(Parser)]
#[command(
    name = "meanelem",
    version,
    about = "Derive, verify and propagate mean-element theories of a J2-type model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CacheDir {
    /// Theory cache directory.
    #[arg(long, env = "MEANELEM_CACHE", default_value = "theory-cache")]
    cache: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Derive a theory and write its series to the cache.
    Derive {
        /// 1 or 2; both when omitted.
        #[arg(long, value_parser = parse_theory)]
        theory: Option<Theory>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
        order: u8,
        #[command(flatten)]
        cache: CacheDir,
    },
    /// Check cached series against the reference series and the symbolic identities.
    Verify {
        /// 1 or 2; both when omitted, which adds the cross-theory checks.
        #[arg(long, value_parser = parse_theory)]
        theory: Option<Theory>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
        order: u8,
        #[command(flatten)]
        cache: CacheDir,
        /// Directory with replacement fixtures (`toy/`, `printed/`).
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Run a scenario: reference, semi-analytic runs and their errors as CSV.
    Propagate {
        /// Scenario file, or the name of a bundled scenario.
        #[arg(long)]
        scenario: String,
        /// Restrict to one theory.
        #[arg(long, value_parser = parse_theory)]
        theory: Option<Theory>,
        /// Override the scenario's theory order.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: Option<u8>,
        /// Add the order m + 2 mean semimajor-axis rate.
        #[arg(long)]
        patched: bool,
        #[command(flatten)]
        cache: CacheDir,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn parse_theory(s: &str) -> Result<Theory, String> {
    s.parse::<u8>()
        .ok()
        .and_then(Theory::from_number)
        .ok_or_else(|| format!("theory must be 1 or 2, got '{s}'"))
}

fn theories(choice: Option<Theory>) -> Vec<Theory> {
    choice.map_or_else(|| vec![Theory::One, Theory::Two], |t| vec![t])
}

/// 0 success, 1 verification mismatch, 2 numerical failure, 3 bad input.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::MissingArtifact(_) | Error::Io(_) => {
            3
        }
        Error::Internal(_) => 1,
        Error::NonPeriodicIntegrand(_)
        | Error::SingularEvaluation { .. }
        | Error::NoConvergence { .. }
        | Error::StepFailure { .. }
        | Error::DegenerateState(_)
        | Error::FrameMismatch { .. } => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Derive {
            theory,
            order,
            cache,
        } => commands::derive(&theories(theory), order.into(), &cache.cache),
        Command::Verify {
            theory,
            order,
            cache,
            fixtures,
        } => commands::verify(
            &theories(theory),
            order.into(),
            &cache.cache,
            fixtures.as_deref(),
        ),
        Command::Propagate {
            scenario,
            theory,
            order,
            patched,
            cache,
            out,
        } => commands::propagate(
            &scenario,
            theory,
            order.map(usize::from),
            patched,
            &cache.cache,
            &out,
        ),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
