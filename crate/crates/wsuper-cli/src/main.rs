//! `wsuper`: run job files and compare reports against golden fixtures.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use wsuper_cli::golden::compare;
use wsuper_cli::{run_job, text, to_canonical_json, Format, JobSpec, SpecError};
use wsuper_core::Exec;

/// Exit code for a malformed job or unreadable input.
const EXIT_SPEC: u8 = 2;
/// Exit code when a task fails or a comparison finds differences.
const EXIT_FAIL: u8 = 3;

#[derive(Parser)]
#[command(name = "wsuper", version, about = "Finite W-superalgebra computations from JSON job files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a job file.
    Run {
        /// Path to the job file.
        #[arg(long)]
        spec: PathBuf,
        /// Primes to use instead of the job's list (repeatable).
        #[arg(long = "p")]
        primes: Vec<u64>,
        /// Output format (defaults to the job's, then JSON).
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run single-threaded.
        #[arg(long)]
        sequential: bool,
    },
    /// Compare a report with a golden fixture.
    Compare {
        /// Report produced by `run`.
        #[arg(long)]
        report: PathBuf,
        /// Golden fixture.
        #[arg(long)]
        fixture: PathBuf,
    },
}

fn read_json(path: &PathBuf) -> Result<serde_json::Value, SpecError> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn run(spec: PathBuf, primes: Vec<u64>, format: Option<Format>, out: Option<PathBuf>, sequential: bool) -> Result<bool, SpecError> {
    let mut job = JobSpec::parse(&std::fs::read_to_string(&spec)?)?;
    if !primes.is_empty() {
        job.primes = primes;
    }
    job.apply_env()?;
    let exec = if sequential { Exec::Sequential } else { Exec::default() };
    let report = run_job(&job, exec)?;
    let body = match format.or(job.format).unwrap_or_default() {
        Format::Json => to_canonical_json(&report),
        Format::Text => text::render(&report),
    };
    match out.or_else(|| job.output.as_ref().map(PathBuf::from)) {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(report["status"] == "ok")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { spec, primes, format, out, sequential } => run(spec, primes, format, out, sequential),
        Command::Compare { report, fixture } => (|| {
            let diffs = compare(&read_json(&report)?, &read_json(&fixture)?);
            for d in &diffs {
                println!("{d}");
            }
            Ok(diffs.is_empty())
        })(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_SPEC)
        }
    }
}
