//! Marginal distributions that mix discrete atoms with a continuous
//! component, and the clumping operator that folds continuous mass into a
//! reserved symbol.
//!
//! A mixed distribution is `f = Σ_a p_a δ_a + c·(density)` with exact
//! rational `p_a` and `c` summing to one.  Only the atom locations and the
//! total continuous mass matter for pattern questions — two continuous draws
//! almost surely differ and almost surely miss every atom — so the density's
//! shape is deliberately not represented.
//!
//! Clumping by a subset `B` of the atoms keeps each atom in `B` and sends all
//! remaining mass to the reserved label `x_o`:
//!
//! ```text
//! Φ_B[f](x) = 1_B(x)·f(x) + f(Bᶜ)·δ_{x_o}(x)
//! ```
//!
//! Clumping by the full atom set yields the *tilde* marginal — the law of the
//! source with every non-atom draw replaced by `x_o`.

use std::collections::BTreeSet;

use num_traits::Zero;
use rand::Rng;

use crate::pattern::Symbol;
use crate::ratio::{self, Rational};
use crate::rng::SourceRng;
use crate::{Error, Result};

/// Discrete law over finitely many symbols, with exact probabilities.
///
/// Entries are sorted by nonincreasing probability (ties broken by symbol
/// order), zero-mass entries are dropped, and the probabilities sum to one
/// exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteDistribution {
    entries: Vec<(Symbol, Rational)>,
}

impl DiscreteDistribution {
    /// Validate and normalize the entry order.
    pub fn new(entries: Vec<(Symbol, Rational)>) -> Result<Self> {
        let mut kept = Vec::with_capacity(entries.len());
        let mut total = ratio::zero();
        let mut seen = BTreeSet::new();
        for (sym, p) in entries {
            if !ratio::is_probability(&p) {
                return Err(Error::InvalidDistribution(format!(
                    "probability {} of {sym} is outside [0, 1]",
                    ratio::format_rational(&p)
                )));
            }
            if !seen.insert(sym.clone()) {
                return Err(Error::InvalidDistribution(format!("duplicate symbol {sym}")));
            }
            total += &p;
            if !p.is_zero() {
                kept.push((sym, p));
            }
        }
        if total != ratio::one() {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}, not 1",
                ratio::format_rational(&total)
            )));
        }
        sort_by_prob(&mut kept);
        Ok(DiscreteDistribution { entries: kept })
    }

    /// Point mass at one symbol.
    pub fn point_mass(sym: Symbol) -> Self {
        DiscreteDistribution { entries: vec![(sym, ratio::one())] }
    }

    /// The `(symbol, probability)` entries, highest probability first.
    pub fn entries(&self) -> &[(Symbol, Rational)] {
        &self.entries
    }

    /// Probability of one symbol (zero when absent).
    pub fn prob(&self, sym: &Symbol) -> Rational {
        self.entries
            .iter()
            .find(|(s, _)| s == sym)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(ratio::zero)
    }

    /// Support size.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// True when the support is empty (possible only before validation).
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Shannon entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        ratio::entropy_bits(self.entries.iter().map(|(_, p)| p))
    }
}

/// Mixed discrete/continuous marginal: exact atoms plus a continuous mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedDistribution {
    atoms: Vec<(Symbol, Rational)>,
    continuous_mass: Rational,
    clump_label: Symbol,
}

impl MixedDistribution {
    /// Validate atoms and continuous mass; probabilities must be positive and
    /// sum to one exactly.
    ///
    /// `clump_label` is the reserved symbol receiving non-atom mass under
    /// clumping; when `None`, the first of `x_o`, `x_o_1`, `x_o_2`, … that
    /// avoids the atom labels is chosen.
    pub fn new(
        atoms: Vec<(Symbol, Rational)>,
        continuous_mass: Rational,
        clump_label: Option<Symbol>,
    ) -> Result<Self> {
        let mut total = continuous_mass.clone();
        let mut seen = BTreeSet::new();
        for (sym, p) in &atoms {
            if !ratio::is_probability(p) || p.is_zero() {
                return Err(Error::InvalidDistribution(format!(
                    "atom {sym} has probability {}, need 0 < p ≤ 1",
                    ratio::format_rational(p)
                )));
            }
            if !seen.insert(sym.clone()) {
                return Err(Error::InvalidDistribution(format!("duplicate atom {sym}")));
            }
            total += p;
        }
        if !ratio::is_probability(&continuous_mass) {
            return Err(Error::InvalidDistribution(format!(
                "continuous mass {} is outside [0, 1]",
                ratio::format_rational(&continuous_mass)
            )));
        }
        if total != ratio::one() {
            return Err(Error::InvalidDistribution(format!(
                "atom probabilities plus continuous mass sum to {}, not 1",
                ratio::format_rational(&total)
            )));
        }
        let clump_label = match clump_label {
            Some(sym) => {
                if seen.contains(&sym) {
                    return Err(Error::InvalidDistribution(format!(
                        "clump label {sym} collides with an atom"
                    )));
                }
                sym
            }
            None => {
                let mut candidate = Symbol::label("x_o");
                let mut k = 0;
                while seen.contains(&candidate) {
                    k += 1;
                    candidate = Symbol::label(format!("x_o_{k}"));
                }
                candidate
            }
        };
        let mut atoms = atoms;
        sort_by_prob(&mut atoms);
        Ok(MixedDistribution { atoms, continuous_mass, clump_label })
    }

    /// Purely discrete law (continuous mass zero).
    pub fn discrete(atoms: Vec<(Symbol, Rational)>) -> Result<Self> {
        MixedDistribution::new(atoms, ratio::zero(), None)
    }

    /// The `(atom, probability)` pairs, highest probability first.
    pub fn atoms(&self) -> &[(Symbol, Rational)] {
        &self.atoms
    }

    /// Total continuous mass `c`.
    pub fn continuous_mass(&self) -> &Rational {
        &self.continuous_mass
    }

    /// The reserved clump symbol `x_o`.
    pub fn clump_label(&self) -> &Symbol {
        &self.clump_label
    }

    /// Atom locations as a set.
    pub fn atom_set(&self) -> BTreeSet<Symbol> {
        self.atoms.iter().map(|(s, _)| s.clone()).collect()
    }

    /// Probability of one atom (zero when absent).
    pub fn atom_prob(&self, sym: &Symbol) -> Rational {
        self.atoms
            .iter()
            .find(|(s, _)| s == sym)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(ratio::zero)
    }

    /// True when every atom is a numeric symbol (required for additive
    /// noise).
    pub fn all_atoms_numeric(&self) -> bool {
        self.atoms.iter().all(|(s, _)| matches!(s, Symbol::Num(_)))
    }
}

fn sort_by_prob(entries: &mut [(Symbol, Rational)]) {
    entries.sort_by(|(sa, pa), (sb, pb)| pb.cmp(pa).then_with(|| sa.cmp(sb)));
}

/// Clump `dist` by the atom subset `B`: keep atoms of `B`, fold everything
/// else into the reserved clump symbol.
///
/// Fails when `B` contains a non-atom.  The clump symbol is dropped when it
/// would carry zero mass, so clumping by the whole atom set of a purely
/// discrete law returns that law.
pub fn clump(dist: &MixedDistribution, b: &BTreeSet<Symbol>) -> Result<DiscreteDistribution> {
    let atom_set = dist.atom_set();
    if let Some(stranger) = b.iter().find(|sym| !atom_set.contains(*sym)) {
        return Err(Error::InvalidDistribution(format!(
            "clump set contains {stranger}, which is not an atom"
        )));
    }
    let mut entries = Vec::with_capacity(b.len() + 1);
    let mut kept_mass = ratio::zero();
    for (sym, p) in dist.atoms() {
        if b.contains(sym) {
            kept_mass += p;
            entries.push((sym.clone(), p.clone()));
        }
    }
    let rest = ratio::one() - kept_mass;
    if !rest.is_zero() {
        entries.push((dist.clump_label().clone(), rest));
    }
    DiscreteDistribution::new(entries)
}

/// The tilde marginal: clump by the full atom set, so exactly the continuous
/// mass lands on the clump symbol.
pub fn tilde_of(dist: &MixedDistribution) -> DiscreteDistribution {
    clump(dist, &dist.atom_set()).expect("full atom set is always a valid clump set")
}

/// Sampler for a mixed distribution.
///
/// Atom probabilities become a cumulative `f64` table; the residual tail is
/// the continuous component, realized as a fresh token per draw.
#[derive(Debug, Clone)]
pub struct MixedSampler {
    symbols: Vec<Symbol>,
    cumulative: Vec<f64>,
    has_continuum: bool,
}

impl MixedSampler {
    /// Build the cumulative table once; sampling is then O(log atoms).
    pub fn new(dist: &MixedDistribution) -> Self {
        let mut cumulative = Vec::with_capacity(dist.atoms().len());
        let mut acc = 0.0;
        let mut symbols = Vec::with_capacity(dist.atoms().len());
        for (sym, p) in dist.atoms() {
            acc += ratio::to_f64(p);
            cumulative.push(acc);
            symbols.push(sym.clone());
        }
        MixedSampler { symbols, cumulative, has_continuum: !dist.continuous_mass().is_zero() }
    }

    /// Draw one symbol: an atom, or a fresh continuum token.  When the
    /// distribution has no continuous part, the last atom absorbs any
    /// floating-point shortfall of the cumulative table.
    pub fn sample(&self, src: &mut SourceRng) -> Symbol {
        let u: f64 = src.rng.gen();
        let mut idx = self.cumulative.partition_point(|&c| c <= u);
        if !self.has_continuum {
            idx = idx.min(self.symbols.len() - 1);
        }
        match self.symbols.get(idx) {
            Some(sym) => sym.clone(),
            None => src.tokens.fresh(),
        }
    }
}

/// Sampler for a discrete distribution.
#[derive(Debug, Clone)]
pub struct DiscreteSampler {
    symbols: Vec<Symbol>,
    cumulative: Vec<f64>,
}

impl DiscreteSampler {
    /// Build the cumulative table.
    pub fn new(dist: &DiscreteDistribution) -> Self {
        let mut cumulative = Vec::with_capacity(dist.len());
        let mut acc = 0.0;
        let mut symbols = Vec::with_capacity(dist.len());
        for (sym, p) in dist.entries() {
            acc += ratio::to_f64(p);
            cumulative.push(acc);
            symbols.push(sym.clone());
        }
        DiscreteSampler { symbols, cumulative }
    }

    /// Draw one symbol.  The last entry absorbs any floating-point shortfall.
    pub fn sample(&self, src: &mut SourceRng) -> Symbol {
        let u: f64 = src.rng.gen();
        let idx = self.cumulative.partition_point(|&c| c <= u).min(self.symbols.len() - 1);
        self.symbols[idx].clone()
    }

    /// Draw the index of a symbol instead of cloning it.
    pub fn sample_index(&self, src: &mut SourceRng) -> usize {
        let u: f64 = src.rng.gen();
        self.cumulative.partition_point(|&c| c <= u).min(self.symbols.len() - 1)
    }

    /// Symbols in table order.
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }
}
