//! `pel` — batch experiment runner for pattern processes.
//!
//! ```text
//! pel <task> --config <path> [--seed N --samples M --n-max K
//!                             --out <path> --format csv|json --workers W]
//! ```
//!
//! Tasks: `pattern`, `exact-entropy`, `mc-entropy`, `rate`, `bounds`,
//! `growth`, `verify-all`.  Exit codes: 0 on success, 1 when verification
//! criteria fail, 2 on invalid input.  Given the same config, seed, and
//! worker count, every task reproduces its report byte for byte.

mod config;
mod tasks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::{CliError, ExperimentConfig, OutputFormat};
use tasks::TaskOutput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskKind {
    /// Relabel each input line by order of first appearance.
    Pattern,
    /// Exact pattern block entropies and conditional increments.
    ExactEntropy,
    /// Monte Carlo pattern block entropies.
    McEntropy,
    /// Closed-form or bracketed pattern entropy rate.
    Rate,
    /// Conditional-entropy and waiting-time lower bounds.
    Bounds,
    /// Bound curve of the slowly-decaying atom family.
    Growth,
    /// Run the full verification suite.
    VerifyAll,
}

impl TaskKind {
    fn name(self) -> &'static str {
        match self {
            TaskKind::Pattern => "pattern",
            TaskKind::ExactEntropy => "exact-entropy",
            TaskKind::McEntropy => "mc-entropy",
            TaskKind::Rate => "rate",
            TaskKind::Bounds => "bounds",
            TaskKind::Growth => "growth",
            TaskKind::VerifyAll => "verify-all",
        }
    }

    fn default_format(self) -> OutputFormat {
        match self {
            TaskKind::Rate | TaskKind::VerifyAll => OutputFormat::Json,
            _ => OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pel",
    version,
    about = "Pattern-process experiments: patterns, entropies, rates, and bounds"
)]
struct Cli {
    /// Task to run.
    #[arg(value_enum)]
    task: TaskKind,

    /// JSON experiment configuration file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Monte Carlo seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo sample count (overrides the config file).
    #[arg(long)]
    samples: Option<u64>,

    /// Largest block length (overrides the config file).
    #[arg(long)]
    n_max: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Report format; rate and verify-all default to json, the rest to csv.
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Monte Carlo worker count (overrides the config file; default 1).
    #[arg(long)]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pel: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply_overrides(cli.seed, cli.samples, cli.n_max, cli.workers);
    if let Some(declared) = &cfg.task {
        if declared != cli.task.name() {
            return Err(CliError::Invalid(format!(
                "config declares task {declared:?} but the command line asked for {:?}",
                cli.task.name()
            )));
        }
    }
    let format = cli.format.or(cfg.format).unwrap_or_else(|| cli.task.default_format());
    let output: TaskOutput = match cli.task {
        TaskKind::Pattern => tasks::pattern(&cfg, format)?,
        TaskKind::ExactEntropy => tasks::exact_entropy(&cfg, format)?,
        TaskKind::McEntropy => tasks::mc_entropy(&cfg, format)?,
        TaskKind::Rate => tasks::rate(&cfg, format)?,
        TaskKind::Bounds => tasks::bounds(&cfg, format)?,
        TaskKind::Growth => tasks::growth(&cfg, format)?,
        TaskKind::VerifyAll => tasks::verify_all(format)?,
    };
    if let Some(summary) = &output.summary {
        println!("{summary}");
    }
    match cli.out.as_ref().or(cfg.out.as_ref()) {
        Some(path) => std::fs::write(path, &output.body)?,
        None if cli.task != TaskKind::VerifyAll => print!("{}", output.body),
        None => {}
    }
    Ok(output.all_passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_names_match_their_kebab_case_flags() {
        for (kind, name) in [
            (TaskKind::Pattern, "pattern"),
            (TaskKind::ExactEntropy, "exact-entropy"),
            (TaskKind::McEntropy, "mc-entropy"),
            (TaskKind::Rate, "rate"),
            (TaskKind::Bounds, "bounds"),
            (TaskKind::Growth, "growth"),
            (TaskKind::VerifyAll, "verify-all"),
        ] {
            assert_eq!(kind.name(), name);
            assert_eq!(
                kind.to_possible_value().expect("no skipped variants").get_name(),
                name
            );
        }
    }

    #[test]
    fn machine_tasks_default_to_csv_and_verdict_tasks_to_json() {
        assert_eq!(TaskKind::ExactEntropy.default_format(), OutputFormat::Csv);
        assert_eq!(TaskKind::Growth.default_format(), OutputFormat::Csv);
        assert_eq!(TaskKind::Rate.default_format(), OutputFormat::Json);
        assert_eq!(TaskKind::VerifyAll.default_format(), OutputFormat::Json);
    }
}
