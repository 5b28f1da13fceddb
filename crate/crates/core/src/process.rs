//! Generative source models and their seeded simulation.
//!
//! Six families are supported:
//!
//! * [`ProcessSpec::Iid`] — i.i.d. draws from a mixed marginal;
//! * [`ProcessSpec::Markov`] — finite discrete Markov chains of order `m`,
//!   with exact-rational transition rows and an exact stationary law;
//! * [`ProcessSpec::MixedMarkov`] — Markov sources whose kernels mix a shared
//!   atom set `S` with a continuous part; every kernel exposes the same atom
//!   support, and all states off the atom set share one kernel, so the
//!   *tilde* chain (continuum folded into `x_o`) is an ordinary finite chain;
//! * [`ProcessSpec::Noisy`] — a finite numeric chain plus i.i.d. additive
//!   noise with finitely many atoms; the tilde observation process is a
//!   hidden Markov model;
//! * [`ProcessSpec::Sticky`] — a renewal source that repeats its previous
//!   (almost surely continuous) value with probability ρ and otherwise draws
//!   fresh; its non-atom symbols *do* recur, which is exactly what the
//!   repeatability hypothesis of the tilde reduction forbids;
//! * [`ProcessSpec::Hmm`] — explicit finite hidden Markov models, also the
//!   closed form of `tilde(Noisy)`.
//!
//! Simulation always starts from the stationary law, uses one ChaCha
//! substream per worker, and realizes continuum draws as run-unique tokens.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::Rng;

use crate::distribution::{DiscreteDistribution, MixedDistribution, MixedSampler};
use crate::pattern::Symbol;
use crate::ratio::{self, Rational};
use crate::rng::{run_workers, SourceRng};
use crate::{Error, Result};

/// Guard on the lifted state count `k^m` of an order-`m` chain.
const MAX_TUPLE_STATES: u128 = 1_000_000;

/// Dense index arithmetic for length-`m` tuples over `k` states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleSpace {
    k: usize,
    m: usize,
}

impl TupleSpace {
    /// Tuple space of `k` states and tuple length `m`, guarded against blowup.
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k == 0 || m == 0 {
            return Err(Error::InvalidSpec("need at least one state and order ≥ 1".into()));
        }
        let count = (k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        if count > MAX_TUPLE_STATES {
            return Err(Error::InvalidSpec(format!(
                "{k}^{m} lifted states exceed the {MAX_TUPLE_STATES} cap"
            )));
        }
        Ok(TupleSpace { k, m })
    }

    /// Number of tuples `k^m`.
    pub fn len(&self) -> usize {
        self.k.pow(self.m as u32)
    }

    /// Never empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Rank of a tuple of state indices (row-major, first coordinate most
    /// significant).
    pub fn rank(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.m);
        tuple.iter().fold(0, |acc, &i| acc * self.k + i)
    }

    /// Tuple of state indices for a rank.
    pub fn unrank(&self, mut rank: usize) -> Vec<usize> {
        let mut tuple = vec![0; self.m];
        for slot in tuple.iter_mut().rev() {
            *slot = rank % self.k;
            rank /= self.k;
        }
        tuple
    }

    /// Rank after appending state `j` and dropping the oldest coordinate.
    pub fn shift(&self, rank: usize, j: usize) -> usize {
        (rank % self.k.pow((self.m - 1) as u32)) * self.k + j
    }
}

/// Finite discrete Markov chain of order `m` with exact transition rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovModel {
    states: Vec<Symbol>,
    order: usize,
    space: TupleSpace,
    /// `rows[rank]` is the next-state law given the last `m` states, dense
    /// over `states`.
    rows: Vec<Vec<Rational>>,
}

impl MarkovModel {
    /// First-order chain from a dense transition matrix aligned with
    /// `states`.
    pub fn first_order(states: Vec<Symbol>, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        MarkovModel::new(states, 1, matrix)
    }

    /// Order-`m` chain; `rows[rank]` follows [`TupleSpace`] rank order.
    pub fn new(states: Vec<Symbol>, order: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let k = states.len();
        let space = TupleSpace::new(k, order)?;
        if states.iter().collect::<BTreeSet<_>>().len() != k {
            return Err(Error::InvalidSpec("duplicate states".into()));
        }
        if rows.len() != space.len() {
            return Err(Error::InvalidSpec(format!(
                "expected {} transition rows (one per state tuple), got {}",
                space.len(),
                rows.len()
            )));
        }
        for (rank, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidSpec(format!(
                    "row {rank} has {} entries, expected {k}",
                    row.len()
                )));
            }
            let mut total = ratio::zero();
            for p in row {
                if !ratio::is_probability(p) {
                    return Err(Error::InvalidSpec(format!(
                        "row {rank} contains probability {} outside [0, 1]",
                        ratio::format_rational(p)
                    )));
                }
                total += p;
            }
            if total != ratio::one() {
                return Err(Error::InvalidSpec(format!(
                    "row {rank} sums to {}, not 1",
                    ratio::format_rational(&total)
                )));
            }
        }
        Ok(MarkovModel { states, order, space, rows })
    }

    /// State symbols in index order.
    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    /// Chain order `m`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Tuple index arithmetic for the lifted chain.
    pub fn tuple_space(&self) -> TupleSpace {
        self.space
    }

    /// Dense next-state law for a tuple rank.
    pub fn row(&self, rank: usize) -> &[Rational] {
        &self.rows[rank]
    }

    /// Index of a state symbol.
    pub fn state_index(&self, sym: &Symbol) -> Option<usize> {
        self.states.iter().position(|s| s == sym)
    }

    /// Exact stationary law of the lifted chain over state tuples.
    ///
    /// Requires a unique closed communicating class; tuples outside it get
    /// probability zero.  Reducible structures (two closed classes, e.g. the
    /// identity matrix) are rejected.
    pub fn stationary_tuples(&self) -> Result<Vec<Rational>> {
        let n = self.space.len();
        let mut adjacency = vec![Vec::new(); n];
        for rank in 0..n {
            for (j, p) in self.rows[rank].iter().enumerate() {
                if !p.is_zero() {
                    adjacency[rank].push(self.space.shift(rank, j));
                }
            }
        }
        let components = strongly_connected_components(&adjacency);
        let mut component_of = vec![0usize; n];
        for (c, members) in components.iter().enumerate() {
            for &v in members {
                component_of[v] = c;
            }
        }
        let mut closed: Vec<usize> = Vec::new();
        for (c, members) in components.iter().enumerate() {
            let escapes = members
                .iter()
                .any(|&v| adjacency[v].iter().any(|&w| component_of[w] != c));
            if !escapes {
                closed.push(c);
            }
        }
        if closed.len() != 1 {
            return Err(Error::NonErgodic(format!(
                "{} closed communicating classes (need exactly one)",
                closed.len()
            )));
        }
        let class: Vec<usize> = {
            let mut v = components[closed[0]].clone();
            v.sort_unstable();
            v
        };
        let pos: BTreeMap<usize, usize> =
            class.iter().enumerate().map(|(i, &rank)| (rank, i)).collect();
        let size = class.len();
        // Solve μ (Pᶜ − I) = 0 with Σ μ = 1 on the closed class: build
        // A = Pᶜᵀ − I, replace the last balance equation by normalization.
        let mut a = vec![vec![ratio::zero(); size]; size];
        for (col, &rank) in class.iter().enumerate() {
            for (j, p) in self.rows[rank].iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                let next = self.space.shift(rank, j);
                let row = pos[&next];
                a[row][col] += p;
            }
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= ratio::one();
        }
        let mut b = vec![ratio::zero(); size];
        for cell in a[size - 1].iter_mut() {
            *cell = ratio::one();
        }
        b[size - 1] = ratio::one();
        let mu_class = solve_linear_exact(a, b).ok_or_else(|| {
            Error::NonErgodic("stationary system is singular on its closed class".into())
        })?;
        if mu_class.iter().any(|p| p < &ratio::zero()) {
            return Err(Error::NonErgodic("stationary solution has negative mass".into()));
        }
        let mut mu = vec![ratio::zero(); n];
        for (i, &rank) in class.iter().enumerate() {
            mu[rank] = mu_class[i].clone();
        }
        Ok(mu)
    }

    /// Exact single-symbol stationary marginal.
    pub fn stationary_distribution(&self) -> Result<DiscreteDistribution> {
        let mu = self.stationary_tuples()?;
        let mut per_state = vec![ratio::zero(); self.states.len()];
        for (rank, p) in mu.iter().enumerate() {
            if !p.is_zero() {
                let tuple = self.space.unrank(rank);
                per_state[tuple[self.order - 1]] += p;
            }
        }
        DiscreteDistribution::new(
            self.states.iter().cloned().zip(per_state).collect(),
        )
    }

    /// Entropy rate `H(X_{m+1} | X^m)` in bits: stationary-weighted row
    /// entropies of the lifted chain.
    pub fn entropy_rate_bits(&self) -> Result<f64> {
        let mu = self.stationary_tuples()?;
        let mut rate = 0.0;
        for (rank, weight) in mu.iter().enumerate() {
            if weight.is_zero() {
                continue;
            }
            rate += ratio::to_f64(weight) * ratio::entropy_bits(self.rows[rank].iter());
        }
        Ok(rate)
    }
}

/// Markov source whose kernels mix a shared atom set with continuous mass.
///
/// Kernels are indexed by the last `m` states, where each coordinate is
/// either an atom of `S` or the stand-in `x_o` for "some continuum value".
/// Every kernel's atom support equals `S`, and all tuples containing `x_o`
/// share a single kernel, so the pattern behaviour depends on the continuum
/// only through its total mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedMarkovModel {
    atom_states: Vec<Symbol>,
    clump_label: Symbol,
    order: usize,
    atom_space: TupleSpace,
    /// Kernels for tuples over `S`, in [`TupleSpace`] rank order.
    atom_rows: Vec<MixedDistribution>,
    /// Kernel for every tuple with at least one continuum coordinate.
    shared_row: MixedDistribution,
}

impl MixedMarkovModel {
    /// Validate kernels: shared atom support, shared clump label, one kernel
    /// for all continuum-containing tuples.
    pub fn new(
        atom_states: Vec<Symbol>,
        clump_label: Symbol,
        order: usize,
        atom_rows: Vec<MixedDistribution>,
        shared_row: MixedDistribution,
    ) -> Result<Self> {
        let k = atom_states.len();
        if k == 0 {
            return Err(Error::InvalidSpec("atom set S must be nonempty".into()));
        }
        let atom_space = TupleSpace::new(k, order)?;
        let atom_set: BTreeSet<Symbol> = atom_states.iter().cloned().collect();
        if atom_set.len() != k {
            return Err(Error::InvalidSpec("duplicate atoms in S".into()));
        }
        if atom_set.contains(&clump_label) {
            return Err(Error::InvalidSpec("clump label collides with an atom state".into()));
        }
        if atom_rows.len() != atom_space.len() {
            return Err(Error::InvalidSpec(format!(
                "expected {} atom-tuple kernels, got {}",
                atom_space.len(),
                atom_rows.len()
            )));
        }
        let normalize = |row: MixedDistribution, what: &str| -> Result<MixedDistribution> {
            if row.atom_set() != atom_set {
                return Err(Error::InvalidSpec(format!(
                    "{what} kernel's atom support differs from S"
                )));
            }
            MixedDistribution::new(
                row.atoms().to_vec(),
                row.continuous_mass().clone(),
                Some(clump_label.clone()),
            )
        };
        let atom_rows = atom_rows
            .into_iter()
            .enumerate()
            .map(|(rank, row)| normalize(row, &format!("tuple {rank}")))
            .collect::<Result<Vec<_>>>()?;
        let shared_row = normalize(shared_row, "shared continuum")?;
        Ok(MixedMarkovModel { atom_states, clump_label, order, atom_space, atom_rows, shared_row })
    }

    /// The shared atom set `S` in index order.
    pub fn atom_states(&self) -> &[Symbol] {
        &self.atom_states
    }

    /// The reserved continuum stand-in `x_o`.
    pub fn clump_label(&self) -> &Symbol {
        &self.clump_label
    }

    /// Chain order `m`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Kernels for atom tuples followed by the shared continuum kernel.
    pub fn kernels(&self) -> impl Iterator<Item = &MixedDistribution> {
        self.atom_rows.iter().chain(std::iter::once(&self.shared_row))
    }

    /// Kernels for atom tuples, in rank order.
    pub fn atom_kernels(&self) -> &[MixedDistribution] {
        &self.atom_rows
    }

    /// The kernel shared by every continuum-containing tuple.
    pub fn shared_kernel(&self) -> &MixedDistribution {
        &self.shared_row
    }

    /// The tilde chain: a finite Markov model over `S ∪ {x_o}` where each
    /// kernel is clumped by `S` (continuous mass lands on `x_o`).
    pub fn tilde_markov(&self) -> MarkovModel {
        let k = self.atom_states.len();
        let mut states = self.atom_states.clone();
        states.push(self.clump_label.clone());
        let full_space = TupleSpace::new(k + 1, self.order).expect("atom space already fits");
        let dense = |row: &MixedDistribution| -> Vec<Rational> {
            let mut out = Vec::with_capacity(k + 1);
            for s in &self.atom_states {
                out.push(row.atom_prob(s));
            }
            out.push(row.continuous_mass().clone());
            out
        };
        let mut rows = Vec::with_capacity(full_space.len());
        for rank in 0..full_space.len() {
            let tuple = full_space.unrank(rank);
            let row = if tuple.iter().all(|&i| i < k) {
                &self.atom_rows[self.atom_space.rank(&tuple)]
            } else {
                &self.shared_row
            };
            rows.push(dense(row));
        }
        MarkovModel::new(states, self.order, rows)
            .expect("clumped kernels are valid transition rows")
    }
}

/// A finite numeric Markov source observed through i.i.d. additive noise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveNoiseSpec {
    base: MarkovModel,
    noise: MixedDistribution,
    noise_label: Symbol,
}

impl AdditiveNoiseSpec {
    /// Validate that the base alphabet and noise atoms are numeric, and that
    /// the reserved non-atom observation label avoids every possible sum.
    pub fn new(
        base: MarkovModel,
        noise: MixedDistribution,
        noise_label: Option<Symbol>,
    ) -> Result<Self> {
        if !base.states().iter().all(|s| matches!(s, Symbol::Num(_))) {
            return Err(Error::InvalidSpec("additive noise needs numeric chain states".into()));
        }
        if !noise.all_atoms_numeric() {
            return Err(Error::InvalidSpec("additive noise needs numeric noise atoms".into()));
        }
        let noise_label = noise_label.unwrap_or_else(|| Symbol::label("n_o"));
        let spec = AdditiveNoiseSpec { base, noise, noise_label };
        if spec.observation_atoms().contains(&spec.noise_label) {
            return Err(Error::InvalidSpec(
                "reserved noise label collides with an observable sum".into(),
            ));
        }
        Ok(spec)
    }

    /// The hidden numeric chain.
    pub fn base(&self) -> &MarkovModel {
        &self.base
    }

    /// The noise marginal.
    pub fn noise(&self) -> &MixedDistribution {
        &self.noise
    }

    /// The reserved observation symbol for continuum noise draws.
    pub fn noise_label(&self) -> &Symbol {
        &self.noise_label
    }

    /// `S_Y`: every exactly-observable sum `x + n` of a chain state and a
    /// noise atom.
    pub fn observation_atoms(&self) -> BTreeSet<Symbol> {
        let mut set = BTreeSet::new();
        for x in self.base.states() {
            for (n, _) in self.noise.atoms() {
                set.insert(add_numeric(x, n));
            }
        }
        set
    }

    /// The tilde observation process: a hidden Markov model emitting `x + n`
    /// for each noise atom and the reserved label for continuum noise.
    pub fn tilde_hmm(&self) -> HiddenMarkovModel {
        let emissions = self
            .base
            .states()
            .iter()
            .map(|x| {
                let mut mass: BTreeMap<Symbol, Rational> = BTreeMap::new();
                for (n, p) in self.noise.atoms() {
                    *mass.entry(add_numeric(x, n)).or_insert_with(ratio::zero) += p;
                }
                if !self.noise.continuous_mass().is_zero() {
                    mass.insert(self.noise_label.clone(), self.noise.continuous_mass().clone());
                }
                DiscreteDistribution::new(mass.into_iter().collect())
                    .expect("noise masses sum to one")
            })
            .collect();
        HiddenMarkovModel::new(self.base.clone(), emissions)
            .expect("one emission row per chain state")
    }
}

fn add_numeric(a: &Symbol, b: &Symbol) -> Symbol {
    match (a, b) {
        (Symbol::Num(x), Symbol::Num(y)) => Symbol::Num(x + y),
        _ => unreachable!("additive noise validated numeric symbols"),
    }
}

/// Renewal source: repeat the previous value with probability ρ, otherwise
/// draw fresh from a continuous law.
///
/// Its marginal has no atoms, yet symbols recur: the canonical witness that
/// folding the continuum into one symbol can destroy pattern information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StickySpec {
    repeat_prob: Rational,
}

impl StickySpec {
    /// ρ must lie in `[0, 1)`.
    pub fn new(repeat_prob: Rational) -> Result<Self> {
        if !ratio::is_probability(&repeat_prob) || repeat_prob == ratio::one() {
            return Err(Error::OutOfRange(format!(
                "repeat probability {} not in [0, 1)",
                ratio::format_rational(&repeat_prob)
            )));
        }
        Ok(StickySpec { repeat_prob })
    }

    /// The repeat probability ρ.
    pub fn repeat_prob(&self) -> &Rational {
        &self.repeat_prob
    }
}

/// Finite hidden Markov model: a discrete chain observed through per-state
/// emission laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenMarkovModel {
    chain: MarkovModel,
    /// One emission law per chain state, in state-index order.
    emissions: Vec<DiscreteDistribution>,
}

impl HiddenMarkovModel {
    /// Validate one emission row per state.
    pub fn new(chain: MarkovModel, emissions: Vec<DiscreteDistribution>) -> Result<Self> {
        if emissions.len() != chain.states().len() {
            return Err(Error::InvalidSpec(format!(
                "{} emission rows for {} states",
                emissions.len(),
                chain.states().len()
            )));
        }
        Ok(HiddenMarkovModel { chain, emissions })
    }

    /// The hidden chain.
    pub fn chain(&self) -> &MarkovModel {
        &self.chain
    }

    /// Emission law of state `i`.
    pub fn emission(&self, i: usize) -> &DiscreteDistribution {
        &self.emissions[i]
    }

    /// All observation symbols, in deterministic order.
    pub fn observation_alphabet(&self) -> Vec<Symbol> {
        let mut set = BTreeSet::new();
        for e in &self.emissions {
            for (sym, _) in e.entries() {
                set.insert(sym.clone());
            }
        }
        set.into_iter().collect()
    }
}

/// A generative source, tagged by family.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessSpec {
    /// I.i.d. draws from a mixed marginal.
    Iid(MixedDistribution),
    /// Finite discrete Markov chain.
    Markov(MarkovModel),
    /// Mixed-kernel Markov source with shared atom support.
    MixedMarkov(MixedMarkovModel),
    /// Numeric chain plus i.i.d. additive noise.
    Noisy(AdditiveNoiseSpec),
    /// Sticky renewal source.
    Sticky(StickySpec),
    /// Explicit finite hidden Markov model.
    Hmm(HiddenMarkovModel),
}

impl ProcessSpec {
    /// Family tag, as used by JSON schemas and reports.
    pub fn kind(&self) -> &'static str {
        match self {
            ProcessSpec::Iid(_) => "iid",
            ProcessSpec::Markov(_) => "markov",
            ProcessSpec::MixedMarkov(_) => "mixed-markov",
            ProcessSpec::Noisy(_) => "noisy",
            ProcessSpec::Sticky(_) => "sticky",
            ProcessSpec::Hmm(_) => "hmm",
        }
    }

    /// True when every emitted symbol comes from a finite discrete alphabet.
    pub fn is_discrete(&self) -> bool {
        match self {
            ProcessSpec::Iid(d) => d.continuous_mass().is_zero(),
            ProcessSpec::Markov(_) | ProcessSpec::Hmm(_) => true,
            ProcessSpec::MixedMarkov(_) | ProcessSpec::Sticky(_) => false,
            ProcessSpec::Noisy(a) => a.noise().continuous_mass().is_zero(),
        }
    }

    /// Stable structural fingerprint (used to see that two laws or reports
    /// describe the same source).
    pub fn fingerprint(&self) -> u64 {
        crate::schema::spec_fingerprint(self)
    }
}

/// The tilde companion of a source: every almost-surely-non-recurring
/// continuum value is replaced by a reserved symbol, leaving a finite
/// discrete source.
pub fn tilde_process(spec: &ProcessSpec) -> ProcessSpec {
    match spec {
        ProcessSpec::Iid(d) => {
            let tilde = crate::distribution::tilde_of(d);
            ProcessSpec::Iid(
                MixedDistribution::new(tilde.entries().to_vec(), ratio::zero(), None)
                    .expect("tilde marginal is a valid distribution"),
            )
        }
        ProcessSpec::Markov(m) => ProcessSpec::Markov(m.clone()),
        ProcessSpec::MixedMarkov(mm) => ProcessSpec::Markov(mm.tilde_markov()),
        ProcessSpec::Noisy(a) => ProcessSpec::Hmm(a.tilde_hmm()),
        ProcessSpec::Sticky(_) => ProcessSpec::Iid(
            MixedDistribution::new(
                vec![(Symbol::label("x_o"), ratio::one())],
                ratio::zero(),
                None,
            )
            .expect("point mass is a valid distribution"),
        ),
        ProcessSpec::Hmm(h) => ProcessSpec::Hmm(h.clone()),
    }
}

/// Cumulative-table sampler over indices.
#[derive(Debug, Clone)]
struct IndexSampler {
    cumulative: Vec<f64>,
}

impl IndexSampler {
    fn from_rationals<'a>(probs: impl IntoIterator<Item = &'a Rational>) -> Self {
        let mut acc = 0.0;
        let cumulative = probs
            .into_iter()
            .map(|p| {
                acc += ratio::to_f64(p);
                acc
            })
            .collect();
        IndexSampler { cumulative }
    }

    fn sample(&self, src: &mut SourceRng) -> usize {
        let u: f64 = src.rng.gen();
        self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1)
    }
}

enum SimKind {
    Iid(MixedSampler),
    Markov {
        model: MarkovModel,
        initial_tuple: IndexSampler,
        step: Vec<IndexSampler>,
    },
    MixedMarkov {
        model: MixedMarkovModel,
        tilde: MarkovModel,
        initial_tuple: IndexSampler,
        /// One mixed sampler per tilde tuple rank.
        step: Vec<MixedSampler>,
        atom_index: BTreeMap<Symbol, usize>,
    },
    Noisy {
        base: Box<Simulator>,
        /// Cumulative table over noise atoms; falling past the end means a
        /// continuum noise draw.
        noise_atoms: IndexSampler,
        noise_count: usize,
        noise_has_continuum: bool,
        /// `sums[state_index][atom_index]` precomputed exactly.
        sums: BTreeMap<Symbol, Vec<Symbol>>,
    },
    Sticky {
        repeat_prob: f64,
    },
    Hmm {
        chain: Box<Simulator>,
        emit: Vec<crate::distribution::DiscreteSampler>,
        state_index: BTreeMap<Symbol, usize>,
    },
}

/// Reusable seeded simulator for one source.
pub struct Simulator {
    kind: SimKind,
}

impl Simulator {
    /// Build samplers (stationary initial laws included) once per source.
    pub fn new(spec: &ProcessSpec) -> Result<Self> {
        let kind = match spec {
            ProcessSpec::Iid(d) => SimKind::Iid(MixedSampler::new(d)),
            ProcessSpec::Markov(m) => {
                let mu = m.stationary_tuples()?;
                SimKind::Markov {
                    initial_tuple: IndexSampler::from_rationals(mu.iter()),
                    step: (0..m.tuple_space().len())
                        .map(|rank| IndexSampler::from_rationals(m.row(rank).iter()))
                        .collect(),
                    model: m.clone(),
                }
            }
            ProcessSpec::MixedMarkov(mm) => {
                let tilde = mm.tilde_markov();
                let mu = tilde.stationary_tuples()?;
                let k = mm.atom_states().len();
                let full_space = tilde.tuple_space();
                let atom_space = TupleSpace::new(k, mm.order())?;
                let step = (0..full_space.len())
                    .map(|rank| {
                        let tuple = full_space.unrank(rank);
                        let row = if tuple.iter().all(|&i| i < k) {
                            &mm.atom_rows[atom_space.rank(&tuple)]
                        } else {
                            &mm.shared_row
                        };
                        MixedSampler::new(row)
                    })
                    .collect();
                SimKind::MixedMarkov {
                    initial_tuple: IndexSampler::from_rationals(mu.iter()),
                    step,
                    atom_index: mm
                        .atom_states()
                        .iter()
                        .enumerate()
                        .map(|(i, s)| (s.clone(), i))
                        .collect(),
                    model: mm.clone(),
                    tilde,
                }
            }
            ProcessSpec::Noisy(a) => {
                let base = Simulator::new(&ProcessSpec::Markov(a.base().clone()))?;
                let sums = a
                    .base()
                    .states()
                    .iter()
                    .map(|x| {
                        let row =
                            a.noise().atoms().iter().map(|(n, _)| add_numeric(x, n)).collect();
                        (x.clone(), row)
                    })
                    .collect();
                SimKind::Noisy {
                    base: Box::new(base),
                    noise_atoms: IndexSampler::from_rationals(
                        a.noise().atoms().iter().map(|(_, p)| p),
                    ),
                    noise_count: a.noise().atoms().len(),
                    noise_has_continuum: !a.noise().continuous_mass().is_zero(),
                    sums,
                }
            }
            ProcessSpec::Sticky(s) => {
                SimKind::Sticky { repeat_prob: ratio::to_f64(s.repeat_prob()) }
            }
            ProcessSpec::Hmm(h) => {
                let chain = Simulator::new(&ProcessSpec::Markov(h.chain().clone()))?;
                SimKind::Hmm {
                    chain: Box::new(chain),
                    emit: (0..h.chain().states().len())
                        .map(|i| crate::distribution::DiscreteSampler::new(h.emission(i)))
                        .collect(),
                    state_index: h
                        .chain()
                        .states()
                        .iter()
                        .enumerate()
                        .map(|(idx, sym)| (sym.clone(), idx))
                        .collect(),
                }
            }
        };
        Ok(Simulator { kind })
    }

    /// One stationary trajectory of length `n`.
    pub fn run(&self, n: usize, src: &mut SourceRng) -> Vec<Symbol> {
        match &self.kind {
            SimKind::Iid(sampler) => (0..n).map(|_| sampler.sample(src)).collect(),
            SimKind::Markov { model, initial_tuple, step } => {
                let mut out = Vec::with_capacity(n);
                if n == 0 {
                    return out;
                }
                let space = model.tuple_space();
                let mut rank = initial_tuple.sample(src);
                for &i in space.unrank(rank).iter().take(n) {
                    out.push(model.states()[i].clone());
                }
                while out.len() < n {
                    let j = step[rank].sample(src);
                    out.push(model.states()[j].clone());
                    rank = space.shift(rank, j);
                }
                out
            }
            SimKind::MixedMarkov { model, tilde, initial_tuple, step, atom_index } => {
                let mut out = Vec::with_capacity(n);
                if n == 0 {
                    return out;
                }
                let k = model.atom_states().len();
                let space = tilde.tuple_space();
                let mut rank = initial_tuple.sample(src);
                for &i in space.unrank(rank).iter().take(n) {
                    // A continuum coordinate of the initial tuple stands for
                    // an unrepeatable value: realize it as a fresh token.
                    out.push(if i < k {
                        model.atom_states()[i].clone()
                    } else {
                        src.tokens.fresh()
                    });
                }
                while out.len() < n {
                    let sym = step[rank].sample(src);
                    let idx = match &sym {
                        Symbol::Token(_) => k,
                        other => atom_index[other],
                    };
                    out.push(sym);
                    rank = space.shift(rank, idx);
                }
                out
            }
            SimKind::Noisy { base, noise_atoms, noise_count, noise_has_continuum, sums } => {
                let xs = base.run(n, src);
                xs.into_iter()
                    .map(|x| {
                        let u: f64 = src.rng.gen();
                        let mut j = noise_atoms.cumulative.partition_point(|&c| c <= u);
                        if !noise_has_continuum {
                            j = j.min(noise_count - 1);
                        }
                        if j < *noise_count {
                            sums[&x][j].clone()
                        } else {
                            src.tokens.fresh()
                        }
                    })
                    .collect()
            }
            SimKind::Sticky { repeat_prob } => {
                let mut out: Vec<Symbol> = Vec::with_capacity(n);
                for i in 0..n {
                    let repeat = i > 0 && src.rng.gen::<f64>() < *repeat_prob;
                    if repeat {
                        out.push(out[i - 1].clone());
                    } else {
                        out.push(src.tokens.fresh());
                    }
                }
                out
            }
            SimKind::Hmm { chain, emit, state_index } => {
                let xs = chain.run(n, src);
                xs.into_iter().map(|x| emit[state_index[&x]].sample(src)).collect()
            }
        }
    }
}

/// Convenience wrapper: one seeded stationary trajectory.
pub fn simulate(spec: &ProcessSpec, n: usize, seed: u64) -> Result<Vec<Symbol>> {
    let sim = Simulator::new(spec)?;
    let mut src = SourceRng::for_worker(seed, 0);
    Ok(sim.run(n, &mut src))
}

/// Monte Carlo estimate of the probability that a *non-atom* first symbol
/// recurs within the horizon `n`.
///
/// The tilde reduction hinges on this mass being zero; sticky sources are
/// the counterexample (their estimate approaches ρ as `n` grows).
pub fn repeat_mass_estimate(
    spec: &ProcessSpec,
    n: usize,
    trials: usize,
    seed: u64,
    workers: usize,
) -> Result<RepeatMassEstimate> {
    if n < 2 {
        return Err(Error::InvalidParams("repeat-mass horizon needs n ≥ 2".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParams("repeat-mass estimate needs trials ≥ 1".into()));
    }
    let sim = Simulator::new(spec)?;
    let hits: u64 = run_workers(seed, trials, workers, |_, count, src| {
        let mut hits = 0u64;
        for _ in 0..count {
            let seq = sim.run(n, src);
            if matches!(seq[0], Symbol::Token(_)) && seq[1..].contains(&seq[0]) {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum();
    Ok(RepeatMassEstimate { estimate: hits as f64 / trials as f64, trials, horizon: n })
}

/// Result of [`repeat_mass_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RepeatMassEstimate {
    /// Fraction of trials whose non-atom first symbol recurred.
    pub estimate: f64,
    /// Number of simulated trajectories.
    pub trials: usize,
    /// Trajectory length.
    pub horizon: usize,
}

/// How strongly an advisory should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Severity {
    /// Context for interpreting results.
    Info,
    /// A reduction hypothesis is violated; tilde-based answers are wrong.
    Violation,
}

/// A note about which entropy-rate reductions apply to a source.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Advisory {
    /// Stable identifier.
    pub code: &'static str,
    /// Info or violation.
    pub severity: Severity,
    /// Human-readable explanation.
    pub message: String,
}

/// Which reduction (if any) justifies equating the pattern rate with a
/// tilde-process rate, and where that reasoning breaks.
pub fn compliance_advisories(spec: &ProcessSpec) -> Vec<Advisory> {
    match spec {
        ProcessSpec::Iid(d) => vec![Advisory {
            code: "iid-tilde",
            severity: Severity::Info,
            message: format!(
                "i.i.d. source: pattern rate equals the tilde marginal entropy ({} atoms, continuous mass {})",
                d.atoms().len(),
                ratio::format_rational(d.continuous_mass()),
            ),
        }],
        ProcessSpec::Markov(_) | ProcessSpec::Hmm(_) => vec![Advisory {
            code: "discrete-source",
            severity: Severity::Info,
            message: "finite discrete source: pattern rate equals the source entropy rate".into(),
        }],
        ProcessSpec::MixedMarkov(_) => vec![Advisory {
            code: "shared-kernel",
            severity: Severity::Info,
            message: "mixed kernels share one atom support and one off-atom kernel: pattern rate equals the tilde chain rate".into(),
        }],
        ProcessSpec::Noisy(a) => vec![Advisory {
            code: "finite-noise-atoms",
            severity: Severity::Info,
            message: format!(
                "additive noise with {} atoms: pattern rate of the observations equals the tilde observation rate (hidden-Markov bracket)",
                a.noise().atoms().len(),
            ),
        }],
        ProcessSpec::Sticky(s) => vec![Advisory {
            code: "repeat-mass",
            severity: Severity::Violation,
            message: format!(
                "sticky source repeats a non-atom value with probability {}: the recurring-symbol hypothesis fails, so the tilde rate (0) understates the pattern rate",
                ratio::format_rational(s.repeat_prob()),
            ),
        }],
    }
}

/// Iterative Kosaraju strongly-connected components.
fn strongly_connected_components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        // Post-order DFS with an explicit stack.
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adjacency[v].len() {
                let w = adjacency[v][*next];
                *next += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut reverse = vec![Vec::new(); n];
    for (v, outs) in adjacency.iter().enumerate() {
        for &w in outs {
            reverse[w].push(v);
        }
    }
    let mut component = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for &start in order.iter().rev() {
        if component[start] != usize::MAX {
            continue;
        }
        let c = components.len();
        let mut members = Vec::new();
        let mut stack = vec![start];
        component[start] = c;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &reverse[v] {
                if component[w] == usize::MAX {
                    component[w] = c;
                    stack.push(w);
                }
            }
        }
        components.push(members);
    }
    components
}

/// Exact Gaussian elimination for `A x = b`; `None` when singular.
fn solve_linear_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &inv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(
        (0..n)
            .map(|i| &b[i] / &a[i][i])
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;
    use approx::assert_abs_diff_eq;

    fn symmetric_binary_chain() -> MarkovModel {
        MarkovModel::first_order(
            vec![Symbol::int(1), Symbol::int(2)],
            vec![
                vec![ratio(3, 4), ratio(1, 4)],
                vec![ratio(1, 4), ratio(3, 4)],
            ],
        )
        .unwrap()
    }

    /// Floating-point power iteration, as an independent stationary oracle.
    fn power_iteration_stationary(model: &MarkovModel) -> Vec<f64> {
        let n = model.tuple_space().len();
        let mut mu = vec![1.0 / n as f64; n];
        for _ in 0..20_000 {
            let mut next = vec![0.0; n];
            for rank in 0..n {
                for (j, p) in model.row(rank).iter().enumerate() {
                    next[model.tuple_space().shift(rank, j)] += mu[rank] * ratio::to_f64(p);
                }
            }
            mu = next;
        }
        mu
    }

    #[test]
    fn tuple_space_rank_roundtrip() {
        let space = TupleSpace::new(3, 2).unwrap();
        assert_eq!(space.len(), 9);
        for rank in 0..9 {
            assert_eq!(space.rank(&space.unrank(rank)), rank);
        }
        assert_eq!(space.shift(space.rank(&[1, 2]), 0), space.rank(&[2, 0]));
    }

    #[test]
    fn rejects_malformed_transition_rows() {
        let states = vec![Symbol::int(0), Symbol::int(1)];
        assert!(MarkovModel::first_order(
            states.clone(),
            vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 2), ratio(1, 2)]],
        )
        .is_err());
        assert!(MarkovModel::first_order(states.clone(), vec![vec![ratio(1, 1)]]).is_err());
        assert!(MarkovModel::first_order(
            vec![Symbol::int(0), Symbol::int(0)],
            vec![vec![ratio(1, 2), ratio(1, 2)]; 2],
        )
        .is_err());
    }

    #[test]
    fn identity_chain_is_rejected_as_non_ergodic() {
        let model = MarkovModel::first_order(
            vec![Symbol::int(0), Symbol::int(1)],
            vec![
                vec![ratio(1, 1), ratio(0, 1)],
                vec![ratio(0, 1), ratio(1, 1)],
            ],
        )
        .unwrap();
        assert!(matches!(model.stationary_tuples(), Err(Error::NonErgodic(_))));
        assert!(model.entropy_rate_bits().is_err());
    }

    #[test]
    fn chain_with_transient_state_still_has_unique_stationary_law() {
        // State 0 leaks into the closed class {1, 2} and never returns.
        let model = MarkovModel::first_order(
            vec![Symbol::int(0), Symbol::int(1), Symbol::int(2)],
            vec![
                vec![ratio(1, 2), ratio(1, 2), ratio(0, 1)],
                vec![ratio(0, 1), ratio(1, 2), ratio(1, 2)],
                vec![ratio(0, 1), ratio(1, 2), ratio(1, 2)],
            ],
        )
        .unwrap();
        let mu = model.stationary_distribution().unwrap();
        assert_eq!(mu.prob(&Symbol::int(0)), ratio(0, 1));
        assert_eq!(mu.prob(&Symbol::int(1)), ratio(1, 2));
        assert_eq!(mu.prob(&Symbol::int(2)), ratio(1, 2));
    }

    #[test]
    fn stationary_matches_power_iteration_oracle() {
        let model = symmetric_binary_chain();
        let exact = model.stationary_tuples().unwrap();
        let oracle = power_iteration_stationary(&model);
        for (e, o) in exact.iter().zip(oracle) {
            assert_abs_diff_eq!(ratio::to_f64(e), o, epsilon = 1e-8);
        }
    }

    #[test]
    fn entropy_rate_of_symmetric_chain_is_binary_entropy() {
        let model = symmetric_binary_chain();
        assert_abs_diff_eq!(
            model.entropy_rate_bits().unwrap(),
            crate::ratio::binary_entropy_bits(0.25),
            epsilon = 1e-12
        );
    }

    #[test]
    fn iid_rows_give_marginal_entropy_rate() {
        let rows = vec![vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]; 3];
        let model = MarkovModel::first_order(
            vec![Symbol::int(0), Symbol::int(1), Symbol::int(2)],
            rows,
        )
        .unwrap();
        assert_abs_diff_eq!(model.entropy_rate_bits().unwrap(), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn second_order_chain_reduces_to_first_order_when_memoryless() {
        let first = symmetric_binary_chain();
        // Order-2 rows that ignore the older coordinate.
        let space = TupleSpace::new(2, 2).unwrap();
        let rows: Vec<Vec<Rational>> = (0..space.len())
            .map(|rank| first.row(space.unrank(rank)[1]).to_vec())
            .collect();
        let second =
            MarkovModel::new(vec![Symbol::int(1), Symbol::int(2)], 2, rows).unwrap();
        assert_abs_diff_eq!(
            second.entropy_rate_bits().unwrap(),
            first.entropy_rate_bits().unwrap(),
            epsilon = 1e-12
        );
        let marginal = second.stationary_distribution().unwrap();
        assert_eq!(marginal.prob(&Symbol::int(1)), ratio(1, 2));
    }

    #[test]
    fn mixed_markov_requires_shared_atom_support() {
        let s = vec![Symbol::int(0), Symbol::int(1)];
        let row_full = MixedDistribution::new(
            vec![(Symbol::int(0), ratio(1, 2)), (Symbol::int(1), ratio(1, 4))],
            ratio(1, 4),
            None,
        )
        .unwrap();
        let row_partial =
            MixedDistribution::new(vec![(Symbol::int(0), ratio(1, 2))], ratio(1, 2), None)
                .unwrap();
        let err = MixedMarkovModel::new(
            s.clone(),
            Symbol::num(1, 2),
            1,
            vec![row_full.clone(), row_partial],
            row_full.clone(),
        );
        assert!(err.is_err());
        let ok = MixedMarkovModel::new(
            s,
            Symbol::num(1, 2),
            1,
            vec![row_full.clone(), row_full.clone()],
            row_full,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn sticky_rejects_certain_repeat() {
        assert!(StickySpec::new(ratio(1, 1)).is_err());
        assert!(StickySpec::new(ratio(-1, 2)).is_err());
        assert!(StickySpec::new(ratio(0, 1)).is_ok());
    }

    #[test]
    fn additive_noise_observation_atoms_are_all_sums() {
        let base = symmetric_binary_chain();
        let noise = MixedDistribution::new(
            vec![(Symbol::int(0), ratio(1, 4)), (Symbol::int(1), ratio(1, 4))],
            ratio(1, 2),
            None,
        )
        .unwrap();
        let spec = AdditiveNoiseSpec::new(base, noise, None).unwrap();
        let expected: BTreeSet<Symbol> =
            [Symbol::int(1), Symbol::int(2), Symbol::int(3)].into();
        assert_eq!(spec.observation_atoms(), expected);
        let hmm = spec.tilde_hmm();
        let emission = hmm.emission(0);
        assert_eq!(emission.prob(&Symbol::int(1)), ratio(1, 4));
        assert_eq!(emission.prob(&Symbol::int(2)), ratio(1, 4));
        assert_eq!(emission.prob(&Symbol::label("n_o")), ratio(1, 2));
    }

    #[test]
    fn additive_noise_merges_colliding_sums() {
        // Noise atoms 0 and 1 over a chain on {1, 2}: from state 1 the sums
        // are {1, 2}; emission mass at 2 from state 1 plus state 2's own mass
        // at 2 must stay separate per state but merge within a state when
        // sums collide.
        let base = MarkovModel::first_order(
            vec![Symbol::int(1)],
            vec![vec![ratio(1, 1)]],
        )
        .unwrap();
        let noise = MixedDistribution::new(
            vec![(Symbol::int(0), ratio(1, 3)), (Symbol::num(0, 2), ratio(1, 3))],
            ratio(1, 3),
            None,
        );
        // 0 and 0/2 are the same rational, so the distribution itself rejects
        // the duplicate atom.
        assert!(noise.is_err());
        let noise = MixedDistribution::new(
            vec![(Symbol::int(0), ratio(2, 3))],
            ratio(1, 3),
            None,
        )
        .unwrap();
        let spec = AdditiveNoiseSpec::new(base, noise, None).unwrap();
        assert_eq!(spec.tilde_hmm().emission(0).prob(&Symbol::int(1)), ratio(2, 3));
    }

    #[test]
    fn tilde_of_sticky_is_constant_process() {
        let spec = ProcessSpec::Sticky(StickySpec::new(ratio(1, 2)).unwrap());
        match tilde_process(&spec) {
            ProcessSpec::Iid(d) => {
                assert_eq!(d.atoms().len(), 1);
                assert_eq!(d.atoms()[0].1, ratio(1, 1));
            }
            other => panic!("expected iid point mass, got {}", other.kind()),
        }
    }

    #[test]
    fn simulation_starts_from_stationary_frequencies() {
        let model = MarkovModel::first_order(
            vec![Symbol::int(0), Symbol::int(1)],
            vec![
                vec![ratio(9, 10), ratio(1, 10)],
                vec![ratio(3, 10), ratio(7, 10)],
            ],
        )
        .unwrap();
        // Stationary law: (3/4, 1/4).
        let spec = ProcessSpec::Markov(model);
        let sim = Simulator::new(&spec).unwrap();
        let mut src = SourceRng::for_worker(2024, 0);
        let mut ones = 0u32;
        let trials = 40_000;
        for _ in 0..trials {
            if sim.run(1, &mut src)[0] == Symbol::int(1) {
                ones += 1;
            }
        }
        let freq = ones as f64 / trials as f64;
        assert!((freq - 0.25).abs() < 0.011, "initial-state frequency {freq}");
    }

    #[test]
    fn simulated_trajectories_have_requested_length_and_reproduce() {
        let spec = ProcessSpec::Sticky(StickySpec::new(ratio(1, 2)).unwrap());
        assert_eq!(simulate(&spec, 0, 1).unwrap().len(), 0);
        assert_eq!(simulate(&spec, 17, 1).unwrap().len(), 17);
        assert_eq!(simulate(&spec, 17, 5).unwrap(), simulate(&spec, 17, 5).unwrap());
    }

    #[test]
    fn sticky_repeats_copy_the_same_token() {
        let spec = ProcessSpec::Sticky(StickySpec::new(ratio(9, 10)).unwrap());
        let seq = simulate(&spec, 50, 3).unwrap();
        let repeats = seq.windows(2).filter(|w| w[0] == w[1]).count();
        assert!(repeats > 25, "expected many repeats, got {repeats}");
        for w in seq.windows(2) {
            if w[0] != w[1] {
                assert!(matches!(w[1], Symbol::Token(_)));
            }
        }
    }

    #[test]
    fn repeat_mass_of_sticky_half_is_one_half() {
        let spec = ProcessSpec::Sticky(StickySpec::new(ratio(1, 2)).unwrap());
        let est = repeat_mass_estimate(&spec, 16, 40_000, 7, 1).unwrap();
        // Recurrence happens iff the second symbol repeats the first: exactly ρ.
        assert!((est.estimate - 0.5).abs() < 0.013, "estimate {}", est.estimate);
    }

    #[test]
    fn repeat_mass_of_tilde_compliant_sources_is_zero() {
        let ex5 = crate::builtins::ex5_mixed_markov();
        let est = repeat_mass_estimate(&ex5, 16, 5_000, 7, 1).unwrap();
        assert_eq!(est.estimate, 0.0);
        let ex4 = crate::builtins::ex4_mixed_iid();
        let est = repeat_mass_estimate(&ex4, 16, 5_000, 7, 1).unwrap();
        assert_eq!(est.estimate, 0.0);
    }

    #[test]
    fn advisories_flag_only_the_sticky_family() {
        let sticky = ProcessSpec::Sticky(StickySpec::new(ratio(1, 2)).unwrap());
        let advisories = compliance_advisories(&sticky);
        assert!(advisories.iter().any(|a| a.severity == Severity::Violation));
        for spec in [
            crate::builtins::ex4_mixed_iid(),
            crate::builtins::ex5_mixed_markov(),
            crate::builtins::ex6_noisy_markov(),
        ] {
            assert!(compliance_advisories(&spec)
                .iter()
                .all(|a| a.severity == Severity::Info));
        }
    }

    #[test]
    fn scc_splits_disconnected_blocks() {
        let adjacency = vec![vec![1], vec![0], vec![3], vec![2]];
        let components = strongly_connected_components(&adjacency);
        assert_eq!(components.len(), 2);
    }
}
