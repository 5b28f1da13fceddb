//! JSON descriptions of symbols, distributions, and process specs.
//!
//! Probabilities are exact rational strings (`"1/3"`, `"0.25"`, `"2"`), never
//! floats.  Symbols map to JSON as follows:
//!
//! * a JSON string is an opaque label (`"a"`, even `"3"` stays a label);
//! * a JSON integer is an exact numeric symbol;
//! * `{"rat": "p/q"}` is a non-integer numeric symbol;
//! * `{"token": "…"}` is a realized continuum token (appears in simulator
//!   output, rarely in hand-written specs).
//!
//! Process specs are objects tagged by `"kind"`:
//!
//! ```json
//! {"kind": "iid", "marginal": {"atoms": [{"label": 0, "prob": "1/3"},
//!                                        {"label": 1, "prob": "1/3"}],
//!                              "continuous_mass": "1/3"}}
//! ```
//!
//! Transition rows are dense rational-string matrices.  For order `m` over
//! `k` states, row index `r` encodes the conditioning tuple `(i_1, …, i_m)`
//! (oldest first) as `r = i_1·k^{m−1} + … + i_m`; for first-order chains the
//! rows simply align with `states`.

use serde::{Deserialize, Serialize};

use crate::distribution::{DiscreteDistribution, MixedDistribution};
use crate::pattern::Symbol;
use crate::process::{
    AdditiveNoiseSpec, HiddenMarkovModel, MarkovModel, MixedMarkovModel, ProcessSpec, StickySpec,
};
use crate::ratio::{self, Rational};
use crate::{Error, Result};

/// JSON form of a [`Symbol`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolRepr {
    /// Exact integer symbol.
    Int(i64),
    /// Opaque label.
    Text(String),
    /// Non-integer exact rational symbol.
    Rat {
        /// The value as `"p/q"`.
        rat: String,
    },
    /// Realized continuum token.
    Token {
        /// Decimal token id.
        token: String,
    },
}

impl From<&Symbol> for SymbolRepr {
    fn from(sym: &Symbol) -> Self {
        match sym {
            Symbol::Label(s) => SymbolRepr::Text(s.clone()),
            Symbol::Num(r) => match small_integer(r) {
                Some(n) => SymbolRepr::Int(n),
                None => SymbolRepr::Rat { rat: ratio::format_rational(r) },
            },
            Symbol::Token(t) => SymbolRepr::Token { token: t.to_string() },
        }
    }
}

impl TryFrom<SymbolRepr> for Symbol {
    type Error = Error;

    fn try_from(repr: SymbolRepr) -> Result<Symbol> {
        Ok(match repr {
            SymbolRepr::Int(n) => Symbol::Num(Rational::from_integer(n.into())),
            SymbolRepr::Text(s) => Symbol::Label(s),
            SymbolRepr::Rat { rat } => Symbol::Num(ratio::parse_rational(&rat)?),
            SymbolRepr::Token { token } => Symbol::Token(
                token
                    .parse::<u128>()
                    .map_err(|e| Error::InvalidConfig(format!("bad token id {token:?}: {e}")))?,
            ),
        })
    }
}

fn small_integer(r: &Rational) -> Option<i64> {
    use num_traits::{One, ToPrimitive};
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// One atom of a distribution: a symbol and its exact probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomRepr {
    /// The atom's symbol.
    pub label: SymbolRepr,
    /// Probability as a rational string.
    pub prob: String,
}

/// JSON form of a mixed distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixedRepr {
    /// Atom list.
    pub atoms: Vec<AtomRepr>,
    /// Total continuous mass as a rational string; omitted means zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous_mass: Option<String>,
    /// Optional explicit stand-in symbol for the folded continuum.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clump_label: Option<SymbolRepr>,
}

impl From<&MixedDistribution> for MixedRepr {
    fn from(dist: &MixedDistribution) -> Self {
        use num_traits::Zero;
        MixedRepr {
            atoms: dist
                .atoms()
                .iter()
                .map(|(sym, p)| AtomRepr {
                    label: sym.into(),
                    prob: ratio::format_rational(p),
                })
                .collect(),
            continuous_mass: if dist.continuous_mass().is_zero() {
                None
            } else {
                Some(ratio::format_rational(dist.continuous_mass()))
            },
            clump_label: Some(dist.clump_label().into()),
        }
    }
}

impl TryFrom<MixedRepr> for MixedDistribution {
    type Error = Error;

    fn try_from(repr: MixedRepr) -> Result<MixedDistribution> {
        let atoms = repr
            .atoms
            .into_iter()
            .map(|a| Ok((Symbol::try_from(a.label)?, ratio::parse_rational(&a.prob)?)))
            .collect::<Result<Vec<_>>>()?;
        let continuous_mass = match repr.continuous_mass {
            Some(s) => ratio::parse_rational(&s)?,
            None => ratio::zero(),
        };
        let clump_label = repr.clump_label.map(Symbol::try_from).transpose()?;
        MixedDistribution::new(atoms, continuous_mass, clump_label)
    }
}

fn discrete_to_atoms(dist: &DiscreteDistribution) -> Vec<AtomRepr> {
    dist.entries()
        .iter()
        .map(|(sym, p)| AtomRepr { label: sym.into(), prob: ratio::format_rational(p) })
        .collect()
}

fn atoms_to_discrete(atoms: Vec<AtomRepr>) -> Result<DiscreteDistribution> {
    DiscreteDistribution::new(
        atoms
            .into_iter()
            .map(|a| Ok((Symbol::try_from(a.label)?, ratio::parse_rational(&a.prob)?)))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// JSON form of a finite Markov chain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkovRepr {
    /// State symbols in index order.
    pub states: Vec<SymbolRepr>,
    /// Chain order; defaults to 1.
    #[serde(default = "default_order")]
    pub order: usize,
    /// Dense transition rows (rational strings) in conditioning-tuple rank
    /// order.
    pub rows: Vec<Vec<String>>,
}

fn default_order() -> usize {
    1
}

impl From<&MarkovModel> for MarkovRepr {
    fn from(model: &MarkovModel) -> Self {
        MarkovRepr {
            states: model.states().iter().map(SymbolRepr::from).collect(),
            order: model.order(),
            rows: (0..model.tuple_space().len())
                .map(|rank| model.row(rank).iter().map(ratio::format_rational).collect())
                .collect(),
        }
    }
}

impl TryFrom<MarkovRepr> for MarkovModel {
    type Error = Error;

    fn try_from(repr: MarkovRepr) -> Result<MarkovModel> {
        let states = repr
            .states
            .into_iter()
            .map(Symbol::try_from)
            .collect::<Result<Vec<_>>>()?;
        let rows = repr
            .rows
            .into_iter()
            .map(|row| row.iter().map(|s| ratio::parse_rational(s)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        MarkovModel::new(states, repr.order, rows)
    }
}

/// JSON form of a [`ProcessSpec`], tagged by `"kind"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProcessSpecRepr {
    /// I.i.d. source.
    Iid {
        /// Single-draw marginal.
        marginal: MixedRepr,
    },
    /// Finite discrete Markov chain.
    Markov {
        /// The chain.
        #[serde(flatten)]
        chain: MarkovRepr,
    },
    /// Mixed-kernel Markov source.
    MixedMarkov {
        /// Shared atom set `S` in index order.
        atom_states: Vec<SymbolRepr>,
        /// Stand-in symbol for the folded continuum.
        clump_label: SymbolRepr,
        /// Chain order; defaults to 1.
        #[serde(default = "default_order")]
        order: usize,
        /// Kernels for atom tuples in rank order.
        atom_rows: Vec<MixedRepr>,
        /// Kernel shared by every tuple containing a continuum coordinate.
        shared_row: MixedRepr,
    },
    /// Numeric chain plus i.i.d. additive noise.
    Noisy {
        /// Hidden numeric chain.
        base: MarkovRepr,
        /// Noise marginal, numeric atoms.
        noise: MixedRepr,
        /// Reserved observation symbol for continuum noise; defaults to
        /// `"n_o"`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        noise_label: Option<SymbolRepr>,
    },
    /// Sticky renewal source.
    Sticky {
        /// Probability of repeating the previous value, in `[0, 1)`.
        repeat_prob: String,
    },
    /// Finite hidden Markov model.
    Hmm {
        /// Hidden chain.
        chain: MarkovRepr,
        /// One emission law per state, in state-index order.
        emissions: Vec<Vec<AtomRepr>>,
    },
}

impl From<&ProcessSpec> for ProcessSpecRepr {
    fn from(spec: &ProcessSpec) -> Self {
        match spec {
            ProcessSpec::Iid(d) => ProcessSpecRepr::Iid { marginal: d.into() },
            ProcessSpec::Markov(m) => ProcessSpecRepr::Markov { chain: m.into() },
            ProcessSpec::MixedMarkov(mm) => ProcessSpecRepr::MixedMarkov {
                atom_states: mm.atom_states().iter().map(SymbolRepr::from).collect(),
                clump_label: mm.clump_label().into(),
                order: mm.order(),
                atom_rows: mm.atom_kernels().iter().map(MixedRepr::from).collect(),
                shared_row: mm.shared_kernel().into(),
            },
            ProcessSpec::Noisy(a) => ProcessSpecRepr::Noisy {
                base: a.base().into(),
                noise: a.noise().into(),
                noise_label: Some(a.noise_label().into()),
            },
            ProcessSpec::Sticky(s) => ProcessSpecRepr::Sticky {
                repeat_prob: ratio::format_rational(s.repeat_prob()),
            },
            ProcessSpec::Hmm(h) => ProcessSpecRepr::Hmm {
                chain: h.chain().into(),
                emissions: (0..h.chain().states().len())
                    .map(|i| discrete_to_atoms(h.emission(i)))
                    .collect(),
            },
        }
    }
}

impl TryFrom<ProcessSpecRepr> for ProcessSpec {
    type Error = Error;

    fn try_from(repr: ProcessSpecRepr) -> Result<ProcessSpec> {
        Ok(match repr {
            ProcessSpecRepr::Iid { marginal } => ProcessSpec::Iid(marginal.try_into()?),
            ProcessSpecRepr::Markov { chain } => ProcessSpec::Markov(chain.try_into()?),
            ProcessSpecRepr::MixedMarkov {
                atom_states,
                clump_label,
                order,
                atom_rows,
                shared_row,
            } => ProcessSpec::MixedMarkov(MixedMarkovModel::new(
                atom_states
                    .into_iter()
                    .map(Symbol::try_from)
                    .collect::<Result<Vec<_>>>()?,
                clump_label.try_into()?,
                order,
                atom_rows
                    .into_iter()
                    .map(MixedDistribution::try_from)
                    .collect::<Result<Vec<_>>>()?,
                shared_row.try_into()?,
            )?),
            ProcessSpecRepr::Noisy { base, noise, noise_label } => {
                ProcessSpec::Noisy(AdditiveNoiseSpec::new(
                    base.try_into()?,
                    noise.try_into()?,
                    noise_label.map(Symbol::try_from).transpose()?,
                )?)
            }
            ProcessSpecRepr::Sticky { repeat_prob } => {
                ProcessSpec::Sticky(StickySpec::new(ratio::parse_rational(&repeat_prob)?)?)
            }
            ProcessSpecRepr::Hmm { chain, emissions } => {
                ProcessSpec::Hmm(HiddenMarkovModel::new(
                    chain.try_into()?,
                    emissions
                        .into_iter()
                        .map(atoms_to_discrete)
                        .collect::<Result<Vec<_>>>()?,
                )?)
            }
        })
    }
}

/// Serialize a spec to pretty JSON.
pub fn spec_to_json(spec: &ProcessSpec) -> String {
    serde_json::to_string_pretty(&ProcessSpecRepr::from(spec)).expect("spec reprs serialize")
}

/// Parse a spec from JSON text.
pub fn spec_from_json(text: &str) -> Result<ProcessSpec> {
    let repr: ProcessSpecRepr = serde_json::from_str(text)?;
    repr.try_into()
}

/// Parse a spec from an already-parsed JSON value.
pub fn spec_from_value(value: serde_json::Value) -> Result<ProcessSpec> {
    let repr: ProcessSpecRepr = serde_json::from_value(value)?;
    repr.try_into()
}

/// Stable 64-bit structural fingerprint of a spec.
///
/// FNV-1a over the compact canonical JSON, so ids are reproducible across
/// runs, platforms, and toolchains.
pub fn spec_fingerprint(spec: &ProcessSpec) -> u64 {
    let json =
        serde_json::to_string(&ProcessSpecRepr::from(spec)).expect("spec reprs serialize");
    fnv1a64(json.as_bytes())
}

/// Hex form of [`spec_fingerprint`], used as the `spec_id` report column.
pub fn spec_id(spec: &ProcessSpec) -> String {
    format!("{:016x}", spec_fingerprint(spec))
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn every_builtin_roundtrips_through_json() {
        for name in builtins::BUILTIN_NAMES {
            let spec = builtins::builtin(name).unwrap();
            let json = spec_to_json(&spec);
            let back = spec_from_json(&json).unwrap();
            assert_eq!(spec, back, "roundtrip failed for {name}");
        }
    }

    #[test]
    fn symbols_keep_their_kind_through_json() {
        let symbols = [
            Symbol::label("a"),
            Symbol::label("3"),
            Symbol::int(3),
            Symbol::num(-1, 2),
            Symbol::Token(1 << 70),
        ];
        for sym in symbols {
            let repr = SymbolRepr::from(&sym);
            let json = serde_json::to_string(&repr).unwrap();
            let back: SymbolRepr = serde_json::from_str(&json).unwrap();
            assert_eq!(Symbol::try_from(back).unwrap(), sym, "through {json}");
        }
    }

    #[test]
    fn numeric_label_and_integer_symbol_stay_distinct() {
        let label = serde_json::to_string(&SymbolRepr::from(&Symbol::label("3"))).unwrap();
        let num = serde_json::to_string(&SymbolRepr::from(&Symbol::int(3))).unwrap();
        assert_eq!(label, "\"3\"");
        assert_eq!(num, "3");
    }

    #[test]
    fn hand_written_spec_parses() {
        let text = r#"{
            "kind": "iid",
            "marginal": {
                "atoms": [
                    {"label": 0, "prob": "1/3"},
                    {"label": 1, "prob": "1/3"}
                ],
                "continuous_mass": "1/3"
            }
        }"#;
        let spec = spec_from_json(text).unwrap();
        assert_eq!(spec, builtins::ex4_mixed_iid());
    }

    #[test]
    fn missing_continuous_mass_means_discrete() {
        let text = r#"{
            "kind": "iid",
            "marginal": {"atoms": [{"label": "a", "prob": "1/2"},
                                   {"label": "b", "prob": "1/2"}]}
        }"#;
        match spec_from_json(text).unwrap() {
            ProcessSpec::Iid(d) => assert!(d.continuous_mass() == &ratio::zero()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn bad_probability_string_is_rejected() {
        let text = r#"{
            "kind": "sticky",
            "repeat_prob": "half"
        }"#;
        assert!(spec_from_json(text).is_err());
        let text = r#"{"kind": "sticky", "repeat_prob": "3/2"}"#;
        assert!(spec_from_json(text).is_err());
    }

    #[test]
    fn fingerprints_separate_different_specs_and_not_identical_ones() {
        let a = builtins::ex4_mixed_iid();
        let b = builtins::ex5_mixed_markov();
        assert_ne!(spec_fingerprint(&a), spec_fingerprint(&b));
        assert_eq!(spec_fingerprint(&a), spec_fingerprint(&builtins::ex4_mixed_iid()));
        assert_eq!(spec_id(&a).len(), 16);
    }

    #[test]
    fn markov_spec_with_flattened_chain_fields_parses() {
        let text = r#"{
            "kind": "markov",
            "states": [1, 2],
            "rows": [["3/4", "1/4"], ["1/4", "3/4"]]
        }"#;
        match spec_from_json(text).unwrap() {
            ProcessSpec::Markov(m) => {
                assert_eq!(m.order(), 1);
                assert_eq!(m.states().len(), 2);
            }
            _ => unreachable!(),
        }
    }
}
