//! Entropy profiles as serializable reports.
//!
//! A report is a list of per-`n` rows carrying the block entropy `H(Z^n)`,
//! the conditional entropy `H(Z_n|Z^{n−1})`, how they were obtained, and —
//! for estimates — the bootstrap standard error of the *conditional* value
//! (the block value's error lives in the originating estimate struct).
//!
//! Serialization is deterministic: CSV rows use Rust's shortest-roundtrip
//! float formatting and carry no timestamps, so identical inputs produce
//! byte-identical files.

use std::fmt::Write as _;

use crate::entropy::exact::BlockEntropy;
use crate::entropy::mc::McEstimate;
use crate::{Error, Result};

/// One report row.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReportRow {
    /// Block length.
    pub n: usize,
    /// `H(Z^n)` in bits.
    pub h_block_bits: f64,
    /// `H(Z_n|Z^{n−1})` in bits.
    pub h_cond_bits: f64,
    /// `"exact"`, `"mc_plugin"`, or `"mc_miller_madow"`.
    pub method: String,
    /// Bootstrap standard error of `h_cond_bits`; absent for exact rows.
    pub stderr: Option<f64>,
    /// Sample count behind an estimated row; absent for exact rows.
    pub samples: Option<u64>,
    /// Fingerprint of the source.
    pub spec_id: String,
}

/// Validated entropy profile for one source.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EntropyReport {
    rows: Vec<ReportRow>,
}

impl EntropyReport {
    /// Wrap rows, enforcing the profile invariants: one source, strictly
    /// increasing `n`, nonnegative conditionals, `H(Z^1) = 0`, and
    /// nondecreasing block entropies across consecutive exact rows.
    pub fn new(rows: Vec<ReportRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Mismatch("a report needs at least one row".into()));
        }
        for row in &rows {
            if row.spec_id != rows[0].spec_id {
                return Err(Error::Mismatch(format!(
                    "rows mix sources {} and {}",
                    rows[0].spec_id, row.spec_id
                )));
            }
            if row.h_cond_bits < 0.0 {
                return Err(Error::Mismatch(format!(
                    "negative conditional entropy {} at n = {}",
                    row.h_cond_bits, row.n
                )));
            }
            if row.n == 1 && row.h_block_bits != 0.0 {
                return Err(Error::Mismatch(format!(
                    "H at block length 1 must be 0, got {}",
                    row.h_block_bits
                )));
            }
        }
        for pair in rows.windows(2) {
            if pair[1].n <= pair[0].n {
                return Err(Error::Mismatch(format!(
                    "block lengths must increase, got {} then {}",
                    pair[0].n, pair[1].n
                )));
            }
            if pair[0].method == "exact"
                && pair[1].method == "exact"
                && pair[1].h_block_bits < pair[0].h_block_bits - 1e-9
            {
                return Err(Error::Mismatch(format!(
                    "exact block entropy decreased between n = {} and n = {}",
                    pair[0].n, pair[1].n
                )));
            }
        }
        Ok(EntropyReport { rows })
    }

    /// Exact profile rows for one source.
    pub fn from_exact_profile(spec_id: &str, profile: &[BlockEntropy]) -> Result<Self> {
        EntropyReport::new(
            profile
                .iter()
                .map(|b| ReportRow {
                    n: b.n,
                    h_block_bits: b.block_bits,
                    h_cond_bits: b.cond_bits,
                    method: "exact".into(),
                    stderr: None,
                    samples: None,
                    spec_id: spec_id.to_string(),
                })
                .collect(),
        )
    }

    /// Rows from Monte Carlo estimates (one per block length).
    pub fn from_mc_estimates(estimates: &[McEstimate]) -> Result<Self> {
        EntropyReport::new(
            estimates
                .iter()
                .map(|e| ReportRow {
                    n: e.n,
                    h_block_bits: e.block_bits,
                    h_cond_bits: e.cond_bits.max(0.0),
                    method: format!("mc_{}", e.estimator),
                    stderr: if e.cond_stderr.is_nan() { None } else { Some(e.cond_stderr) },
                    samples: Some(e.samples),
                    spec_id: e.spec_id.clone(),
                })
                .collect(),
        )
    }

    /// The rows, block length ascending.
    pub fn rows(&self) -> &[ReportRow] {
        &self.rows
    }

    /// Versioned CSV rendering.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# pel entropy report v1\n");
        out.push_str("n,H_block_bits,H_cond_bits,method,stderr,samples,spec_id\n");
        for row in &self.rows {
            let stderr = row.stderr.map(|s| s.to_string()).unwrap_or_default();
            let samples = row.samples.map(|s| s.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.n,
                row.h_block_bits,
                row.h_cond_bits,
                row.method,
                stderr,
                samples,
                row.spec_id
            )
            .expect("string writes cannot fail");
        }
        out
    }

    /// Pretty JSON rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report rows serialize")
    }
}
