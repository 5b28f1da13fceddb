//! One function per task, each turning a validated config into report text.
//!
//! Tasks never print; they hand back a [`TaskOutput`] whose body the binary
//! routes to `--out` or stdout, plus an optional one-line summary that always
//! goes to stdout.  Bodies are deterministic for a fixed config, seed, and
//! worker count, so re-running a config reproduces its report byte for byte.

use std::collections::BTreeSet;
use std::fs;

use serde::Serialize;

use pel_core::acceptance;
use pel_core::bounds::{
    growth_distribution, prop4_lower_bound, theorem5_curve, waiting_time_bound_for_atom,
    GrowthParams,
};
use pel_core::entropy::{
    exact_entropy_profile, mc_pattern_entropy, theoretical_rate, EntropyReport, McEstimate,
    TheoreticalRate,
};
use pel_core::pattern::{pattern_of, Symbol};
use pel_core::process::ProcessSpec;
use pel_core::schema;

use crate::config::{CliError, ExperimentConfig, OutputFormat};

/// What a task hands back to the binary.
pub struct TaskOutput {
    /// One or more lines for stdout, independent of `--out`.
    pub summary: Option<String>,
    /// The report itself.
    pub body: String,
    /// `false` only when verification criteria failed.
    pub all_passed: bool,
}

impl TaskOutput {
    fn body(body: String) -> Self {
        TaskOutput { summary: None, body, all_passed: true }
    }
}

/// Relabel each line of a text file by order of first appearance.
pub fn pattern(cfg: &ExperimentConfig, format: OutputFormat) -> Result<TaskOutput, CliError> {
    let input = cfg.input.as_ref().ok_or_else(|| {
        CliError::Invalid("the pattern task needs \"input\": a text file to relabel".into())
    })?;
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Invalid(format!("cannot read input {}: {e}", input.display())))?;
    let patterns: Vec<Vec<u32>> = text
        .lines()
        .map(|line| {
            let symbols: Vec<Symbol> =
                line.chars().map(|c| Symbol::label(c.to_string())).collect();
            pattern_of(&symbols).labels().to_vec()
        })
        .collect();
    let body = match format {
        OutputFormat::Csv => {
            let mut out = String::from("# pel pattern v1\n");
            for labels in &patterns {
                out.push_str(&join_labels(labels));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => pretty_json(&patterns)?,
    };
    Ok(TaskOutput::body(body))
}

/// Exact block entropies and conditional increments up to `n_max`.
pub fn exact_entropy(cfg: &ExperimentConfig, format: OutputFormat) -> Result<TaskOutput, CliError> {
    let spec = cfg.resolved_spec()?;
    let n_max = cfg
        .n_max
        .ok_or_else(|| CliError::Invalid("the exact-entropy task needs \"n_max\"".into()))?;
    let profile = exact_entropy_profile(&spec, n_max)?;
    let report = EntropyReport::from_exact_profile(&schema::spec_id(&spec), &profile)?;
    Ok(TaskOutput::body(render_entropy_report(&report, format)))
}

/// Monte Carlo block entropies up to `n_max` at an explicit seed.
pub fn mc_entropy(cfg: &ExperimentConfig, format: OutputFormat) -> Result<TaskOutput, CliError> {
    let spec = cfg.resolved_spec()?;
    let n_max = cfg
        .n_max
        .ok_or_else(|| CliError::Invalid("the mc-entropy task needs \"n_max\"".into()))?;
    let samples = cfg
        .samples
        .ok_or_else(|| CliError::Invalid("the mc-entropy task needs \"samples\"".into()))?;
    let seed = cfg.seed.ok_or_else(|| {
        CliError::Invalid("the mc-entropy task needs an explicit \"seed\"".into())
    })?;
    let estimator = cfg.estimator()?;
    let bootstrap = cfg.bootstrap.unwrap_or(50);
    let workers = cfg.workers.unwrap_or(1);
    let estimates: Vec<McEstimate> = (1..=n_max)
        .map(|n| mc_pattern_entropy(&spec, n, samples, seed, workers, estimator, bootstrap))
        .collect::<pel_core::Result<_>>()?;
    let report = EntropyReport::from_mc_estimates(&estimates)?;
    Ok(TaskOutput::body(render_entropy_report(&report, format)))
}

/// The pattern entropy rate, closed-form where one exists and bracketed
/// otherwise, with a rounded one-line summary.
pub fn rate(cfg: &ExperimentConfig, format: OutputFormat) -> Result<TaskOutput, CliError> {
    if format == OutputFormat::Csv {
        return Err(CliError::Invalid("rate reports are JSON only; drop --format csv".into()));
    }
    let spec = cfg.resolved_spec()?;
    let depth = cfg.bracket_depth.unwrap_or(8);
    let report = theoretical_rate(&spec, depth)?;
    let summary = match &report.rate {
        TheoreticalRate::Exact { bits } => {
            format!("entropy rate {bits:.5} bits — {}", report.description)
        }
        TheoreticalRate::DirectWithTilde { pattern_bits, tilde_bits } => format!(
            "pattern rate {pattern_bits:.5} bits, folded rate {tilde_bits:.5} bits — {}",
            report.description
        ),
        TheoreticalRate::Bracket { lower_bits, upper_bits, .. } => format!(
            "entropy rate within [{lower_bits:.5}, {upper_bits:.5}] bits — {}",
            report.description
        ),
    };
    Ok(TaskOutput { summary: Some(summary), body: pretty_json(&report)?, all_passed: true })
}

#[derive(Serialize)]
struct ConditionalBoundRow {
    n: u64,
    bound_bits: f64,
}

#[derive(Serialize)]
struct WaitingTimeRow {
    atom: String,
    bound_bits: f64,
}

/// Lower bounds: the clumped-marginal conditional bound over block lengths
/// for i.i.d. mixtures, or per-atom waiting-time bounds for mixed-kernel
/// chains.
pub fn bounds(cfg: &ExperimentConfig, format: OutputFormat) -> Result<TaskOutput, CliError> {
    let spec = cfg.resolved_spec()?;
    match &spec {
        ProcessSpec::Iid(dist) => {
            let kept: BTreeSet<Symbol> = match &cfg.kept_atoms {
                Some(reprs) => reprs
                    .iter()
                    .cloned()
                    .map(Symbol::try_from)
                    .collect::<pel_core::Result<_>>()?,
                None => dist.atom_set(),
            };
            let n_max = cfg.n_max.unwrap_or(10);
            let rows: Vec<ConditionalBoundRow> = (1..=n_max as u64)
                .map(|n| {
                    Ok(ConditionalBoundRow {
                        n,
                        bound_bits: prop4_lower_bound(dist, &kept, n)?,
                    })
                })
                .collect::<pel_core::Result<_>>()?;
            let body = match format {
                OutputFormat::Csv => {
                    let mut out = String::from("# pel conditional bounds v1\nn,bound_bits\n");
                    for row in &rows {
                        out.push_str(&format!("{},{}\n", row.n, row.bound_bits));
                    }
                    out
                }
                OutputFormat::Json => pretty_json(&rows)?,
            };
            Ok(TaskOutput::body(body))
        }
        ProcessSpec::MixedMarkov(mm) => {
            let rows: Vec<WaitingTimeRow> = mm
                .atom_states()
                .iter()
                .map(|atom| {
                    Ok(WaitingTimeRow {
                        atom: atom.to_string(),
                        bound_bits: waiting_time_bound_for_atom(mm, atom)?,
                    })
                })
                .collect::<pel_core::Result<_>>()?;
            let body = match format {
                OutputFormat::Csv => {
                    let mut out = String::from("# pel waiting-time bounds v1\natom,bound_bits\n");
                    for row in &rows {
                        out.push_str(&format!("{},{}\n", row.atom, row.bound_bits));
                    }
                    out
                }
                OutputFormat::Json => pretty_json(&rows)?,
            };
            Ok(TaskOutput::body(body))
        }
        other => Err(CliError::Invalid(format!(
            "the bounds task needs an i.i.d. mixture or a mixed-kernel chain, got a {} source",
            other.kind()
        ))),
    }
}

/// The slowly-decaying atom family's conditional-entropy bound curve.
pub fn growth(cfg: &ExperimentConfig, format: OutputFormat) -> Result<TaskOutput, CliError> {
    let epsilon = cfg
        .epsilon
        .ok_or_else(|| CliError::Invalid("the growth task needs \"epsilon\" in (0, 1)".into()))?;
    let precision = cfg.precision.unwrap_or(1e-9);
    let params = match cfg.delta {
        Some(delta) => GrowthParams::new(epsilon, delta, precision)?,
        None => growth_distribution(epsilon, precision)?,
    };
    let grid = cfg
        .grid
        .clone()
        .unwrap_or_else(|| vec![1_000, 10_000, 100_000, 1_000_000]);
    let curve = theorem5_curve(&params, &grid)?;
    let body = match format {
        OutputFormat::Csv => curve.to_csv(),
        OutputFormat::Json => pretty_json(&curve)?,
    };
    Ok(TaskOutput::body(body))
}

/// The full verification suite: one stdout line per criterion, JSON body.
pub fn verify_all(format: OutputFormat) -> Result<TaskOutput, CliError> {
    if format == OutputFormat::Csv {
        return Err(CliError::Invalid(
            "verify-all reports are JSON only; drop --format csv".into(),
        ));
    }
    let outcomes = acceptance::run_all();
    let mut lines: Vec<String> = outcomes
        .iter()
        .map(|o| {
            format!(
                "criterion {:>2} {:<28} {} — {}",
                o.id,
                o.name,
                if o.passed { "PASS" } else { "FAIL" },
                o.detail
            )
        })
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    lines.push(format!("verify-all: {passed}/{} criteria passed", outcomes.len()));
    Ok(TaskOutput {
        summary: Some(lines.join("\n")),
        body: pretty_json(&outcomes)?,
        all_passed: passed == outcomes.len(),
    })
}

fn render_entropy_report(report: &EntropyReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => report.to_csv(),
        OutputFormat::Json => {
            let mut body = report.to_json();
            if !body.ends_with('\n') {
                body.push('\n');
            }
            body
        }
    }
}

fn pretty_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut body = serde_json::to_string_pretty(value)?;
    body.push('\n');
    Ok(body)
}

fn join_labels(labels: &[u32]) -> String {
    labels.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_joining_matches_the_line_format() {
        assert_eq!(join_labels(&[1, 2, 1, 3]), "1,2,1,3");
        assert_eq!(join_labels(&[]), "");
    }
}
