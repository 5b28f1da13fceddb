//! Entropy-rate dispatch: the closed form each source family admits.
//!
//! * i.i.d. mixed sources — the pattern rate equals the entropy of the
//!   folded (tilde) marginal;
//! * finite discrete chains — the pattern rate equals the chain's entropy
//!   rate;
//! * mixed-kernel chains — the rate of the folded chain;
//! * additive-noise and explicit hidden Markov sources — no closed form;
//!   an exact finite-depth bracket is reported instead;
//! * sticky sources — the one family here whose pattern rate *differs* from
//!   its folded rate: the report carries both numbers, since the folded
//!   process is constant (rate 0) while the pattern process keeps one
//!   repeat-or-fresh bit per step.
//!
//! Every report also carries the source's compliance advisories, so a
//! consumer can tell when a folded-rate answer rests on a violated
//! hypothesis.

use crate::process::{compliance_advisories, Advisory, ProcessSpec};
use crate::ratio;
use crate::Result;

use super::hmm::hmm_entropy_bracket;

/// The form a theoretical pattern-entropy-rate answer takes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum TheoreticalRate {
    /// A single exact value in bits per symbol.
    Exact { bits: f64 },
    /// An exact sandwich at finite depth `n`.
    Bracket { n: usize, lower_bits: f64, upper_bits: f64 },
    /// Pattern rate alongside the folded rate, when the two differ.
    DirectWithTilde { pattern_bits: f64, tilde_bits: f64 },
}

/// Rate answer plus provenance for one source.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RateReport {
    /// Fingerprint of the source.
    pub spec_id: String,
    /// Source family tag.
    pub kind: &'static str,
    /// The rate answer.
    pub rate: TheoreticalRate,
    /// Hypothesis notes from the process layer.
    pub advisories: Vec<Advisory>,
    /// One-sentence account of how the number was obtained.
    pub description: String,
}

/// Compute the entropy rate of the pattern process of `spec`.
///
/// `bracket_depth` applies only to the families without a closed form
/// (additive-noise and explicit hidden Markov sources).
pub fn theoretical_rate(spec: &ProcessSpec, bracket_depth: usize) -> Result<RateReport> {
    let advisories = compliance_advisories(spec);
    let spec_id = crate::schema::spec_id(spec);
    let kind = spec.kind();
    let (rate, description) = match spec {
        ProcessSpec::Iid(d) => (
            TheoreticalRate::Exact {
                bits: crate::distribution::tilde_of(d).entropy_bits(),
            },
            "entropy of the folded i.i.d. marginal".to_string(),
        ),
        ProcessSpec::Markov(m) => (
            TheoreticalRate::Exact { bits: m.entropy_rate_bits()? },
            "entropy rate of the discrete chain".to_string(),
        ),
        ProcessSpec::MixedMarkov(mm) => (
            TheoreticalRate::Exact { bits: mm.tilde_markov().entropy_rate_bits()? },
            "entropy rate of the folded chain".to_string(),
        ),
        ProcessSpec::Sticky(s) => (
            TheoreticalRate::DirectWithTilde {
                pattern_bits: ratio::binary_entropy_bits(ratio::to_f64(s.repeat_prob())),
                tilde_bits: 0.0,
            },
            "repeat-or-fresh branch entropy; the folded process is constant and carries none of it"
                .to_string(),
        ),
        ProcessSpec::Noisy(a) => {
            let bracket = hmm_entropy_bracket(&a.tilde_hmm(), bracket_depth)?;
            let last = bracket.last();
            (
                TheoreticalRate::Bracket {
                    n: last.n,
                    lower_bits: last.lower_bits,
                    upper_bits: last.upper_bits,
                },
                format!("exact conditional-entropy bracket of the folded observations at depth {}", last.n),
            )
        }
        ProcessSpec::Hmm(h) => {
            let bracket = hmm_entropy_bracket(h, bracket_depth)?;
            let last = bracket.last();
            (
                TheoreticalRate::Bracket {
                    n: last.n,
                    lower_bits: last.lower_bits,
                    upper_bits: last.upper_bits,
                },
                format!("exact conditional-entropy bracket at depth {}", last.n),
            )
        }
    };
    Ok(RateReport { spec_id, kind, rate, advisories, description })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::process::Severity;
    use approx::assert_abs_diff_eq;

    fn exact_bits(report: &RateReport) -> f64 {
        match report.rate {
            TheoreticalRate::Exact { bits } => bits,
            _ => panic!("expected an exact rate, got {:?}", report.rate),
        }
    }

    #[test]
    fn finite_iid_rate_is_the_marginal_entropy() {
        let report = theoretical_rate(&builtins::ex2_finite_iid(), 8).unwrap();
        assert_abs_diff_eq!(exact_bits(&report), 1.5, epsilon = 1e-12);
        assert_eq!(report.kind, "iid");
    }

    #[test]
    fn pure_continuum_rate_is_zero() {
        let report = theoretical_rate(&builtins::ex3_uniform(), 8).unwrap();
        assert_abs_diff_eq!(exact_bits(&report), 0.0);
    }

    #[test]
    fn mixed_iid_rate_is_log2_3() {
        let report = theoretical_rate(&builtins::ex4_mixed_iid(), 8).unwrap();
        assert_abs_diff_eq!(exact_bits(&report), 3.0f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn mixed_markov_rate_matches_the_folded_chain_closed_form() {
        let report = theoretical_rate(&builtins::ex5_mixed_markov(), 8).unwrap();
        let expected = 7.0 / 4.0 - (3.0 / 8.0) * 3.0f64.log2();
        assert_abs_diff_eq!(exact_bits(&report), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(exact_bits(&report), 1.15564, epsilon = 5e-6);
    }

    #[test]
    fn noisy_rate_is_a_proper_bracket() {
        let report = theoretical_rate(&builtins::ex6_noisy_markov(), 8).unwrap();
        match report.rate {
            TheoreticalRate::Bracket { n, lower_bits, upper_bits } => {
                assert_eq!(n, 8);
                assert!(lower_bits <= upper_bits);
                assert!(lower_bits > 1.0);
                assert!(upper_bits < 1.5);
            }
            other => panic!("expected a bracket, got {other:?}"),
        }
    }

    #[test]
    fn sticky_rate_reports_the_witness_pair() {
        let report = theoretical_rate(&builtins::ex7_sticky(), 8).unwrap();
        match report.rate {
            TheoreticalRate::DirectWithTilde { pattern_bits, tilde_bits } => {
                assert_abs_diff_eq!(pattern_bits, 1.0, epsilon = 1e-12);
                assert_eq!(tilde_bits, 0.0);
            }
            other => panic!("expected the witness pair, got {other:?}"),
        }
        assert!(report
            .advisories
            .iter()
            .any(|a| a.severity == Severity::Violation));
    }

    #[test]
    fn rate_reports_serialize_with_a_form_tag() {
        let report = theoretical_rate(&builtins::ex7_sticky(), 8).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["rate"]["form"], "direct-with-tilde");
        assert!(json["rate"]["pattern_bits"].is_number());
        let exact = theoretical_rate(&builtins::ex2_finite_iid(), 8).unwrap();
        let json = serde_json::to_value(&exact).unwrap();
        assert_eq!(json["rate"]["form"], "exact");
    }
}
