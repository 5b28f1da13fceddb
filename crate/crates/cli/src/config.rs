//! Experiment configuration: a JSON file plus command-line overrides.
//!
//! Every flag the binary accepts mirrors a field here and wins on conflict,
//! so a config file can be checked in once and steered from the shell.  Spec
//! references come in three spellings: `"builtin:<name>"` for the bundled
//! sources, a path to a spec JSON file, or the spec object inline.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

use pel_core::entropy::Estimator;
use pel_core::process::ProcessSpec;
use pel_core::schema::{self, SymbolRepr};

/// Errors the command-line layer adds on top of the engine errors.
///
/// Everything here exits with status 2: the request never got far enough to
/// fail a criterion.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The request itself is malformed or incomplete.
    #[error("{0}")]
    Invalid(String),
    /// An engine rejected the request.
    #[error(transparent)]
    Core(#[from] pel_core::Error),
    /// File system trouble.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// Malformed JSON on the way in or out.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Report rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// Fixed, versioned columns behind a `#` header comment.
    Csv,
    /// Pretty-printed JSON.
    Json,
}

/// One experiment, as read from a JSON config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Task name; must agree with the command line when present.
    pub task: Option<String>,
    /// `"builtin:<name>"`, a path to a spec JSON file, or an inline object.
    pub spec: Option<serde_json::Value>,
    /// Text file for the pattern task.
    pub input: Option<PathBuf>,
    /// Largest block length.
    pub n_max: Option<usize>,
    /// Monte Carlo sample count.
    pub samples: Option<u64>,
    /// Monte Carlo seed; always explicit, never wall-clock.
    pub seed: Option<u64>,
    /// `"plugin"` (default) or `"miller-madow"`.
    pub estimator: Option<String>,
    /// Bootstrap replicates behind Monte Carlo standard errors.
    pub bootstrap: Option<usize>,
    /// Depth for entropy-rate brackets.
    pub bracket_depth: Option<usize>,
    /// Decay exponent of the slowly-decaying atom family.
    pub epsilon: Option<f64>,
    /// Exponent split for the growth task's bound curve.
    pub delta: Option<f64>,
    /// Width the normalization-constant enclosure must reach.
    pub precision: Option<f64>,
    /// Block lengths for the growth task's bound curve.
    pub grid: Option<Vec<u64>>,
    /// Kept atom subset for the bounds task (defaults to every atom).
    pub kept_atoms: Option<Vec<SymbolRepr>>,
    /// Monte Carlo worker count (default 1 keeps runs bit-reproducible).
    pub workers: Option<usize>,
    /// Report destination (the `--out` flag wins).
    pub out: Option<PathBuf>,
    /// Report format (the `--format` flag wins).
    pub format: Option<OutputFormat>,
}

impl ExperimentConfig {
    /// Read and validate a config file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::Invalid(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Invalid(format!("config {} does not validate: {e}", path.display()))
        })
    }

    /// Fold command-line flags over the file's values.
    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        samples: Option<u64>,
        n_max: Option<usize>,
        workers: Option<usize>,
    ) {
        if seed.is_some() {
            self.seed = seed;
        }
        if samples.is_some() {
            self.samples = samples;
        }
        if n_max.is_some() {
            self.n_max = n_max;
        }
        if workers.is_some() {
            self.workers = workers;
        }
    }

    /// Resolve the spec reference into a process.
    pub fn resolved_spec(&self) -> Result<ProcessSpec, CliError> {
        let value = self.spec.as_ref().ok_or_else(|| {
            CliError::Invalid(
                "this task needs \"spec\": \"builtin:<name>\", a spec file path, or an inline \
                 spec object"
                    .into(),
            )
        })?;
        match value {
            serde_json::Value::String(s) => {
                if let Some(name) = s.strip_prefix("builtin:") {
                    Ok(pel_core::builtins::builtin(name)?)
                } else {
                    let text = fs::read_to_string(s).map_err(|e| {
                        CliError::Invalid(format!("cannot read spec file {s}: {e}"))
                    })?;
                    Ok(schema::spec_from_json(&text)?)
                }
            }
            serde_json::Value::Object(_) => Ok(schema::spec_from_value(value.clone())?),
            _ => Err(CliError::Invalid(
                "\"spec\" must be a string reference or an inline object".into(),
            )),
        }
    }

    /// Parse the estimator name, defaulting to the plug-in.
    pub fn estimator(&self) -> Result<Estimator, CliError> {
        match self.estimator.as_deref() {
            None | Some("plugin") => Ok(Estimator::Plugin),
            Some("miller-madow") => Ok(Estimator::MillerMadow),
            Some(other) => Err(CliError::Invalid(format!(
                "unknown estimator {other:?}; use \"plugin\" or \"miller-madow\""
            ))),
        }
    }
}
