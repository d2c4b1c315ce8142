//! `gctool`: congruence scans, p-curvature, and classifiers from the shell.

use clap::{Parser, ValueEnum};
use gctool::{parse_job_file, resolve_job, run, Action, OutputMode, Overrides};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ActionArg {
    CheckGauss,
    CheckCartier,
    Pcurvature,
    ClassifyHypergeom,
    Dynzeta,
    Dwork,
}

impl From<ActionArg> for Action {
    fn from(a: ActionArg) -> Action {
        match a {
            ActionArg::CheckGauss => Action::CheckGauss,
            ActionArg::CheckCartier => Action::CheckCartier,
            ActionArg::Pcurvature => Action::Pcurvature,
            ActionArg::ClassifyHypergeom => Action::ClassifyHypergeom,
            ActionArg::Dynzeta => Action::Dynzeta,
            ActionArg::Dwork => Action::Dwork,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Table,
    Json,
    Both,
}

impl From<ModeArg> for OutputMode {
    fn from(m: ModeArg) -> OutputMode {
        match m {
            ModeArg::Table => OutputMode::Table,
            ModeArg::Json => OutputMode::Json,
            ModeArg::Both => OutputMode::Both,
        }
    }
}

/// Verify Gauss/Cartier congruences, compute p-curvatures, and classify
/// hypergeometric instances over cyclotomic fields. One process, one job;
/// all output is deterministic.
#[derive(Parser, Debug)]
#[command(name = "gctool", version)]
struct Cli {
    /// Job file (JSON); flags override its fields
    #[arg(long)]
    job: Option<PathBuf>,

    /// Action to run (alternative to the job file's "action")
    #[arg(value_enum)]
    action: Option<ActionArg>,

    /// Shorthand for the check-gauss action
    #[arg(long)]
    gauss: bool,

    /// Shorthand for the check-cartier action
    #[arg(long)]
    cartier: bool,

    /// Inline sequence spec (JSON object)
    #[arg(long)]
    sequence: Option<String>,

    /// Prime range MIN..MAX, inclusive (default 3..50)
    #[arg(long)]
    primes: Option<String>,

    /// Index/precision bound N (default 10 * p_max)
    #[arg(long)]
    terms: Option<i64>,

    /// Eisenstein scale for p-curvature (positive integer; probed if absent)
    #[arg(long)]
    lambda: Option<String>,

    /// Primes to skip (repeatable)
    #[arg(long)]
    skip: Vec<u64>,

    /// Output mode (default both)
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,

    /// Write the JSON report to this path as well
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, Box<dyn std::error::Error>> {
    let file = match &cli.job {
        Some(p) => Some(parse_job_file(p)?),
        None => None,
    };
    let flags = Overrides {
        action: cli.action.map(Action::from),
        gauss: cli.gauss,
        cartier: cli.cartier,
        sequence: cli.sequence.clone(),
        primes: cli.primes.clone(),
        terms: cli.terms,
        lambda: cli.lambda.clone(),
        skip: cli.skip.clone(),
        mode: cli.mode.map(OutputMode::from),
        json: cli.json.as_ref().map(|p| p.display().to_string()),
    };
    let job = resolve_job(file, &flags)?;
    let outcome = run(&job)?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if matches!(job.mode, OutputMode::Table | OutputMode::Both) {
        for line in &outcome.table {
            println!("{line}");
        }
    }
    let rendered = serde_json::to_string_pretty(&outcome.report)?;
    if matches!(job.mode, OutputMode::Json | OutputMode::Both) {
        println!("{rendered}");
    }
    if let Some(path) = &job.json_path {
        std::fs::write(path, rendered + "\n")?;
    }
    Ok(u8::try_from(outcome.exit).unwrap_or(2))
}
