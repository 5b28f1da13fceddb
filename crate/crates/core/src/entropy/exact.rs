//! Exact pattern laws at small block lengths.
//!
//! Three engines, one per supported source family:
//!
//! * **finite discrete Markov** (i.i.d.-as-Markov included): enumerate all
//!   `kⁿ` state sequences weighted by the stationary process law and
//!   aggregate by pattern;
//! * **mixed i.i.d.**: for each restricted-growth pattern, sum over
//!   assignments of its cells to atoms or the continuum — injective on
//!   atoms, multiplicity-≥2 cells must take atoms (a continuum value never
//!   recurs), an atom cell of multiplicity `m` contributes `p_a^m`, and a
//!   singleton continuum cell contributes `c`.  The probability of a pattern
//!   therefore depends only on the multiset of its cell multiplicities,
//!   which caches extremely well;
//! * **sticky renewal**: positive-probability patterns either repeat the
//!   immediately preceding label or open a new maximum at every step, with
//!   probability `ρ^{repeats}·(1−ρ)^{fresh}`.
//!
//! All three run in exact rational arithmetic, so every law sums to one
//! exactly; entropies convert to `f64` bits at the end.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::distribution::MixedDistribution;
use crate::pattern::{enumerate_patterns, Pattern};
use crate::process::{MarkovModel, ProcessSpec, StickySpec};
use crate::ratio::{self, Rational};
use crate::{Error, Result, ENUMERATION_CAP, LAW_SUPPORT_LIMIT, SEQUENCE_ENUMERATION_LIMIT};

/// Mask-based assignment search needs one bit per atom.
const MAX_EXACT_ATOMS: usize = 20;

/// The exact law of the length-`n` pattern block of one source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternLaw {
    n: usize,
    spec_id: String,
    probs: BTreeMap<Pattern, Rational>,
}

impl PatternLaw {
    /// Wrap a computed law, checking lengths and exact normalization.
    pub fn new(n: usize, spec_id: String, probs: BTreeMap<Pattern, Rational>) -> Result<Self> {
        let mut total = ratio::zero();
        for (pattern, p) in &probs {
            if pattern.len() != n {
                return Err(Error::Mismatch(format!(
                    "law for n = {n} contains a pattern of length {}",
                    pattern.len()
                )));
            }
            if !ratio::is_probability(p) {
                return Err(Error::Mismatch(format!(
                    "pattern {pattern} has probability {} outside [0, 1]",
                    ratio::format_rational(p)
                )));
            }
            total += p;
        }
        if total != ratio::one() {
            return Err(Error::Mismatch(format!(
                "law sums to {}, not 1",
                ratio::format_rational(&total)
            )));
        }
        Ok(PatternLaw { n, spec_id, probs })
    }

    /// Block length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Fingerprint of the source the law belongs to.
    pub fn spec_id(&self) -> &str {
        &self.spec_id
    }

    /// Exact probability of one pattern (zero when outside the support).
    pub fn prob(&self, pattern: &Pattern) -> Rational {
        self.probs.get(pattern).cloned().unwrap_or_else(ratio::zero)
    }

    /// Number of positive-probability patterns.
    pub fn support_len(&self) -> usize {
        self.probs.len()
    }

    /// Iterate the support in pattern order.
    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, &Rational)> {
        self.probs.iter()
    }

    /// Block entropy `H(Z^n)` in bits.
    pub fn entropy_bits(&self) -> f64 {
        ratio::entropy_bits(self.probs.values())
    }
}

/// Block entropy of a law, in bits.
pub fn block_entropy(law: &PatternLaw) -> f64 {
    law.entropy_bits()
}

/// Conditional entropy `H(Z_n | Z^{n−1})` by the chain rule, from the laws
/// at lengths `n−1` and `n` of the same source.
pub fn conditional_profile(prev: &PatternLaw, next: &PatternLaw) -> Result<f64> {
    if prev.spec_id() != next.spec_id() {
        return Err(Error::Mismatch(format!(
            "laws come from different sources ({} vs {})",
            prev.spec_id(),
            next.spec_id()
        )));
    }
    if next.n() != prev.n() + 1 {
        return Err(Error::Mismatch(format!(
            "laws must have consecutive lengths, got {} and {}",
            prev.n(),
            next.n()
        )));
    }
    let diff = next.entropy_bits() - prev.entropy_bits();
    if diff < -1e-9 {
        return Err(Error::Mismatch(format!(
            "block entropy decreased by {diff} bits between n = {} and n = {}",
            prev.n(),
            next.n()
        )));
    }
    Ok(diff.max(0.0))
}

/// One row of an exact entropy profile.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BlockEntropy {
    /// Block length.
    pub n: usize,
    /// `H(Z^n)` in bits.
    pub block_bits: f64,
    /// `H(Z_n | Z^{n−1})` in bits (zero at `n = 1`).
    pub cond_bits: f64,
}

/// Exact law of `Z^n` for i.i.d., finite Markov, and sticky sources.
pub fn exact_pattern_law(spec: &ProcessSpec, n: usize) -> Result<PatternLaw> {
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationCap { n, cap: ENUMERATION_CAP });
    }
    let spec_id = crate::schema::spec_id(spec);
    match spec {
        ProcessSpec::Iid(d) => mixed_iid_law(d, n, spec_id),
        ProcessSpec::Markov(m) => markov_law(m, n, spec_id),
        ProcessSpec::Sticky(s) => sticky_law(s, n, spec_id),
        other => Err(Error::Unsupported(format!(
            "no exact pattern law for {} sources; use the folded process, brackets, or Monte Carlo",
            other.kind()
        ))),
    }
}

/// Exact block and conditional entropies for `n = 1..=n_max`.
pub fn exact_entropy_profile(spec: &ProcessSpec, n_max: usize) -> Result<Vec<BlockEntropy>> {
    let mut rows = Vec::with_capacity(n_max);
    let mut prev_bits = 0.0;
    for n in 1..=n_max {
        let block_bits = exact_pattern_law(spec, n)?.entropy_bits();
        let cond_bits = (block_bits - prev_bits).max(0.0);
        rows.push(BlockEntropy { n, block_bits, cond_bits });
        prev_bits = block_bits;
    }
    Ok(rows)
}

/// Exact entropy `H(X^n)` of the raw (pre-pattern) block, in bits.
///
/// Infinite — `f64::INFINITY` — whenever the source emits continuum values
/// with positive probability.
pub fn exact_sequence_entropy(spec: &ProcessSpec, n: usize) -> Result<f64> {
    match spec {
        ProcessSpec::Iid(d) => {
            if !d.continuous_mass().is_zero() {
                return Ok(f64::INFINITY);
            }
            Ok(n as f64 * ratio::entropy_bits(d.atoms().iter().map(|(_, p)| p)))
        }
        ProcessSpec::Markov(m) => {
            if n == 0 {
                return Ok(0.0);
            }
            check_sequence_budget(m.states().len(), n)?;
            let mut h = 0.0;
            markov_leaf_fold(m, n, &mut |_, p| {
                let pf = ratio::to_f64(p);
                h -= pf * pf.log2();
            })?;
            Ok(h)
        }
        ProcessSpec::Sticky(_) | ProcessSpec::MixedMarkov(_) => Ok(f64::INFINITY),
        ProcessSpec::Noisy(a) if !a.noise().continuous_mass().is_zero() => Ok(f64::INFINITY),
        other => Err(Error::Unsupported(format!(
            "no exact sequence entropy for {} sources",
            other.kind()
        ))),
    }
}

fn check_support_budget(len: usize) -> Result<()> {
    if len > LAW_SUPPORT_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count: len as u128,
            limit: LAW_SUPPORT_LIMIT as u128,
        });
    }
    Ok(())
}

fn check_sequence_budget(k: usize, n: usize) -> Result<()> {
    let count = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > SEQUENCE_ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { count, limit: SEQUENCE_ENUMERATION_LIMIT });
    }
    Ok(())
}

fn rat_pow(r: &Rational, e: u32) -> Rational {
    let mut out = ratio::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// Cell-assignment engine for mixed i.i.d. pattern probabilities.
///
/// `w(&multiset)` is the probability of any single pattern whose cell
/// multiplicities form that multiset; results are cached per multiset, and
/// each evaluation memoizes on (cell index, used-atom mask).
pub(crate) struct MixedLawEngine {
    atom_probs: Vec<Rational>,
    continuous: Rational,
    cache: BTreeMap<Vec<u32>, Rational>,
}

impl MixedLawEngine {
    pub(crate) fn new(dist: &MixedDistribution) -> Result<Self> {
        if dist.atoms().len() > MAX_EXACT_ATOMS {
            return Err(Error::Unsupported(format!(
                "exact mixed-i.i.d. law supports at most {MAX_EXACT_ATOMS} atoms, got {}",
                dist.atoms().len()
            )));
        }
        Ok(MixedLawEngine {
            atom_probs: dist.atoms().iter().map(|(_, p)| p.clone()).collect(),
            continuous: dist.continuous_mass().clone(),
            cache: BTreeMap::new(),
        })
    }

    /// Probability of one pattern with the given cell multiplicities
    /// (any order; canonicalized internally).
    pub(crate) fn w(&mut self, multiplicities: &[u32]) -> Rational {
        let mut cells = multiplicities.to_vec();
        cells.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(hit) = self.cache.get(&cells) {
            return hit.clone();
        }
        let mut memo: HashMap<(usize, u32), Rational> = HashMap::new();
        let value = self.assignments(&cells, 0, 0, &mut memo);
        self.cache.insert(cells, value.clone());
        value
    }

    fn assignments(
        &self,
        cells: &[u32],
        idx: usize,
        mask: u32,
        memo: &mut HashMap<(usize, u32), Rational>,
    ) -> Rational {
        if idx == cells.len() {
            return ratio::one();
        }
        if let Some(hit) = memo.get(&(idx, mask)) {
            return hit.clone();
        }
        let mut total = ratio::zero();
        for (i, p) in self.atom_probs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                let rest = self.assignments(cells, idx + 1, mask | (1 << i), memo);
                if !rest.is_zero() {
                    total += rat_pow(p, cells[idx]) * rest;
                }
            }
        }
        if cells[idx] == 1 && !self.continuous.is_zero() {
            let rest = self.assignments(cells, idx + 1, mask, memo);
            total += &self.continuous * rest;
        }
        memo.insert((idx, mask), total.clone());
        total
    }
}

fn mixed_iid_law(dist: &MixedDistribution, n: usize, spec_id: String) -> Result<PatternLaw> {
    let mut engine = MixedLawEngine::new(dist)?;
    let mut probs = BTreeMap::new();
    for pattern in enumerate_patterns(n)? {
        let p = engine.w(&pattern.multiplicities());
        if !p.is_zero() {
            probs.insert(pattern, p);
            check_support_budget(probs.len())?;
        }
    }
    PatternLaw::new(n, spec_id, probs)
}

/// Independent check value for the mixed-i.i.d. engine: replace the
/// continuum by `k` equal tiny atoms and evaluate the resulting purely
/// discrete assignment sum directly.
///
/// Unlike the production engine, a tiny atom may host a cell of any
/// multiplicity — exactly the event whose probability vanishes as `k` grows,
/// which is why the two values agree only up to `O(n²/k)`.
pub(crate) fn discretized_continuum_oracle(
    dist: &MixedDistribution,
    pattern: &Pattern,
    k: u64,
) -> Rational {
    let cells = pattern.multiplicities();
    let atom_probs: Vec<Rational> = dist.atoms().iter().map(|(_, p)| p.clone()).collect();
    let tiny = dist.continuous_mass() / Rational::from_integer(k.into());
    fn go(
        cells: &[u32],
        idx: usize,
        mask: u32,
        tiny_used: u64,
        k: u64,
        atom_probs: &[Rational],
        tiny: &Rational,
    ) -> Rational {
        if idx == cells.len() {
            return ratio::one();
        }
        let mut total = ratio::zero();
        for (i, p) in atom_probs.iter().enumerate() {
            if mask & (1 << i) == 0 {
                total += rat_pow(p, cells[idx])
                    * go(cells, idx + 1, mask | (1 << i), tiny_used, k, atom_probs, tiny);
            }
        }
        if !tiny.is_zero() && tiny_used < k {
            let remaining = Rational::from_integer((k - tiny_used).into());
            total += remaining
                * rat_pow(tiny, cells[idx])
                * go(cells, idx + 1, mask, tiny_used + 1, k, atom_probs, tiny);
        }
        total
    }
    go(&cells, 0, 0, 0, k, &atom_probs, &tiny)
}

fn pattern_of_indices(seq: &[usize]) -> Pattern {
    let mut first: BTreeMap<usize, u32> = BTreeMap::new();
    let mut labels = Vec::with_capacity(seq.len());
    for &x in seq {
        let next = first.len() as u32 + 1;
        labels.push(*first.entry(x).or_insert(next));
    }
    Pattern::new(labels).expect("first-appearance labels grow by at most one")
}

/// Enumerate all positive-probability length-`n` state-index sequences of a
/// stationary chain and fold `visit(sequence, probability)` over them.
fn markov_leaf_fold(
    model: &MarkovModel,
    n: usize,
    visit: &mut dyn FnMut(&[usize], &Rational),
) -> Result<()> {
    let mu = model.stationary_tuples()?;
    let m = model.order();
    let space = model.tuple_space();
    if n < m {
        let mut marginal: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (rank, p) in mu.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let prefix = space.unrank(rank)[..n].to_vec();
            *marginal.entry(prefix).or_insert_with(ratio::zero) += p;
        }
        for (prefix, p) in &marginal {
            visit(prefix, p);
        }
        return Ok(());
    }
    let mut seq = Vec::with_capacity(n);
    for (rank, p0) in mu.iter().enumerate() {
        if p0.is_zero() {
            continue;
        }
        seq.clear();
        seq.extend(space.unrank(rank));
        extend_fold(model, n, rank, p0.clone(), &mut seq, visit);
    }
    Ok(())
}

fn extend_fold(
    model: &MarkovModel,
    n: usize,
    rank: usize,
    prob: Rational,
    seq: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize], &Rational),
) {
    if seq.len() == n {
        visit(seq, &prob);
        return;
    }
    let space = model.tuple_space();
    for (j, p) in model.row(rank).iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        seq.push(j);
        extend_fold(model, n, space.shift(rank, j), &prob * p, seq, visit);
        seq.pop();
    }
}

fn markov_law(model: &MarkovModel, n: usize, spec_id: String) -> Result<PatternLaw> {
    if n == 0 {
        return PatternLaw::new(0, spec_id, BTreeMap::from([(pattern_of_indices(&[]), ratio::one())]));
    }
    check_sequence_budget(model.states().len(), n)?;
    let mut probs: BTreeMap<Pattern, Rational> = BTreeMap::new();
    let mut overflow = false;
    markov_leaf_fold(model, n, &mut |seq, p| {
        *probs.entry(pattern_of_indices(seq)).or_insert_with(ratio::zero) += p;
        overflow |= probs.len() > LAW_SUPPORT_LIMIT;
    })?;
    if overflow {
        check_support_budget(probs.len())?;
    }
    PatternLaw::new(n, spec_id, probs)
}

fn sticky_law(spec: &StickySpec, n: usize, spec_id: String) -> Result<PatternLaw> {
    let rho = spec.repeat_prob().clone();
    let fresh = ratio::one() - &rho;
    let mut probs: BTreeMap<Pattern, Rational> = BTreeMap::new();
    if n == 0 {
        probs.insert(pattern_of_indices(&[]), ratio::one());
        return PatternLaw::new(0, spec_id, probs);
    }
    // Depth-first over the n−1 repeat-or-fresh choices.
    let mut labels: Vec<u32> = vec![1];
    fn walk(
        labels: &mut Vec<u32>,
        max: u32,
        prob: Rational,
        n: usize,
        rho: &Rational,
        fresh: &Rational,
        out: &mut BTreeMap<Pattern, Rational>,
    ) {
        if prob.is_zero() {
            return;
        }
        if labels.len() == n {
            out.insert(
                Pattern::new(labels.clone()).expect("repeat-or-new-max labels are valid"),
                prob,
            );
            return;
        }
        let last = *labels.last().expect("labels start nonempty");
        labels.push(last);
        walk(labels, max, &prob * rho, n, rho, fresh, out);
        labels.pop();
        labels.push(max + 1);
        walk(labels, max + 1, &prob * fresh, n, rho, fresh, out);
        labels.pop();
    }
    walk(&mut labels, 1, ratio::one(), n, &rho, &fresh, &mut probs);
    PatternLaw::new(n, spec_id, probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;
    use crate::pattern::Symbol;
    use crate::ratio::ratio;
    use approx::assert_abs_diff_eq;

    fn pat(labels: &[u32]) -> Pattern {
        Pattern::new(labels.to_vec()).unwrap()
    }

    fn bernoulli_half() -> ProcessSpec {
        ProcessSpec::Iid(
            MixedDistribution::discrete(vec![
                (Symbol::int(0), ratio(1, 2)),
                (Symbol::int(1), ratio(1, 2)),
            ])
            .unwrap(),
        )
    }

    /// Bell numbers by the triangle recurrence, independent of the pattern
    /// enumerator.
    fn bell(n: usize) -> u128 {
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(*row.last().expect("rows are nonempty"));
            for &x in &row {
                let last = *next.last().expect("seeded above");
                next.push(last + x);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn law_support_never_exceeds_the_bell_count() {
        let spec = builtins::ex4_mixed_iid();
        for n in 1..=7 {
            let law = exact_pattern_law(&spec, n).unwrap();
            assert!(law.support_len() as u128 <= bell(n), "n = {n}");
        }
        let uniform = exact_pattern_law(&builtins::ex3_uniform(), 7).unwrap();
        assert_eq!(uniform.support_len(), 1);
        assert_eq!(bell(7), 877);
    }

    #[test]
    fn bernoulli_law_n3_matches_hand_enumeration() {
        let law = exact_pattern_law(&bernoulli_half(), 3).unwrap();
        assert_eq!(law.prob(&pat(&[1, 1, 1])), ratio(1, 4));
        assert_eq!(law.prob(&pat(&[1, 1, 2])), ratio(1, 4));
        assert_eq!(law.prob(&pat(&[1, 2, 1])), ratio(1, 4));
        assert_eq!(law.prob(&pat(&[1, 2, 2])), ratio(1, 4));
        assert_eq!(law.prob(&pat(&[1, 2, 3])), ratio(0, 1));
        assert_eq!(law.support_len(), 4);
        assert_abs_diff_eq!(law.entropy_bits(), 2.0);
    }

    #[test]
    fn bernoulli_block_entropy_is_n_minus_one() {
        // Each nonzero pattern has exactly two binary preimages, so the law
        // is uniform on 2^{n−1} patterns.
        for n in 2..=12 {
            let law = exact_pattern_law(&bernoulli_half(), n).unwrap();
            assert_eq!(law.support_len(), 1 << (n - 1));
            assert_abs_diff_eq!(law.entropy_bits(), (n - 1) as f64);
        }
    }

    #[test]
    fn discretized_continuum_oracle_brackets_the_engine() {
        // Splitting the continuum into 10⁴ equal tiny atoms must reproduce
        // every mixed-law probability up to the mass of tiny-atom
        // collisions, which is below 3·C(n,2)/k.
        let k = 10_000u64;
        let dists = [
            builtins::ex4_mixed_iid(),
            ProcessSpec::Iid(
                MixedDistribution::new(vec![(Symbol::int(0), ratio(1, 2))], ratio(1, 2), None)
                    .unwrap(),
            ),
        ];
        for spec in &dists {
            let dist = match spec {
                ProcessSpec::Iid(d) => d,
                _ => unreachable!(),
            };
            for n in 1..=5usize {
                let law = exact_pattern_law(spec, n).unwrap();
                let gap = 3.0 * (n * (n - 1) / 2) as f64 / k as f64;
                for pattern in crate::pattern::enumerate_patterns(n).unwrap() {
                    let engine_p = ratio::to_f64(&law.prob(&pattern));
                    let oracle_p =
                        ratio::to_f64(&discretized_continuum_oracle(dist, &pattern, k));
                    assert!(
                        (engine_p - oracle_p).abs() <= gap,
                        "n = {n}, pattern {pattern}: engine {engine_p} vs oracle {oracle_p}"
                    );
                }
            }
        }
    }

    #[test]
    fn discretized_oracle_is_exact_when_no_continuum_exists() {
        let dist = MixedDistribution::discrete(vec![
            (Symbol::int(0), ratio(2, 3)),
            (Symbol::int(1), ratio(1, 3)),
        ])
        .unwrap();
        let spec = ProcessSpec::Iid(dist.clone());
        let law = exact_pattern_law(&spec, 4).unwrap();
        for pattern in crate::pattern::enumerate_patterns(4).unwrap() {
            assert_eq!(law.prob(&pattern), discretized_continuum_oracle(&dist, &pattern, 17));
        }
    }

    #[test]
    fn single_atom_plus_continuum_matches_hand_law() {
        let spec = ProcessSpec::Iid(
            MixedDistribution::new(vec![(Symbol::int(0), ratio(1, 2))], ratio(1, 2), None)
                .unwrap(),
        );
        let law = exact_pattern_law(&spec, 2).unwrap();
        assert_eq!(law.prob(&pat(&[1, 1])), ratio(1, 4));
        assert_eq!(law.prob(&pat(&[1, 2])), ratio(3, 4));
    }

    #[test]
    fn pure_continuum_law_is_unit_mass_on_the_identity_pattern() {
        let spec = builtins::ex3_uniform();
        for n in 1..=6 {
            let law = exact_pattern_law(&spec, n).unwrap();
            assert_eq!(law.support_len(), 1);
            let identity = pat(&(1..=n as u32).collect::<Vec<_>>());
            assert_eq!(law.prob(&identity), ratio(1, 1));
            assert_abs_diff_eq!(law.entropy_bits(), 0.0);
        }
    }

    #[test]
    fn mixed_engine_w_is_consistent_under_extension() {
        // Appending the next observation partitions a pattern's mass over
        // bumping each existing cell or opening a new one.
        let dist = MixedDistribution::new(
            vec![(Symbol::int(0), ratio(1, 3)), (Symbol::int(1), ratio(1, 3))],
            ratio(1, 3),
            None,
        )
        .unwrap();
        let mut engine = MixedLawEngine::new(&dist).unwrap();
        for cells in [vec![1u32], vec![2, 1], vec![3, 2, 1, 1], vec![1, 1, 1]] {
            let whole = engine.w(&cells);
            let mut parts = ratio::zero();
            for i in 0..cells.len() {
                let mut bumped = cells.clone();
                bumped[i] += 1;
                parts += engine.w(&bumped);
            }
            let mut opened = cells.clone();
            opened.push(1);
            parts += engine.w(&opened);
            assert_eq!(parts, whole, "extension mass mismatch for {cells:?}");
        }
    }

    #[test]
    fn iid_law_via_cells_equals_iid_law_via_sequence_enumeration() {
        // The same marginal expressed as a one-state-memory chain must give
        // identical pattern laws.
        let atoms = vec![
            (Symbol::int(0), ratio(1, 2)),
            (Symbol::int(1), ratio(1, 3)),
            (Symbol::int(2), ratio(1, 6)),
        ];
        let iid = ProcessSpec::Iid(MixedDistribution::discrete(atoms.clone()).unwrap());
        let states: Vec<Symbol> = atoms.iter().map(|(s, _)| s.clone()).collect();
        let row: Vec<Rational> = atoms.iter().map(|(_, p)| p.clone()).collect();
        let chain = ProcessSpec::Markov(
            MarkovModel::first_order(states, vec![row.clone(), row.clone(), row]).unwrap(),
        );
        for n in 1..=6 {
            let a = exact_pattern_law(&iid, n).unwrap();
            let b = exact_pattern_law(&chain, n).unwrap();
            assert_eq!(a.support_len(), b.support_len(), "n = {n}");
            for (pattern, p) in a.iter() {
                assert_eq!(*p, b.prob(pattern), "n = {n}, pattern {pattern}");
            }
        }
    }

    #[test]
    fn second_order_markov_law_handles_blocks_shorter_than_the_memory() {
        let space = crate::process::TupleSpace::new(2, 2).unwrap();
        let rows: Vec<Vec<Rational>> = (0..space.len())
            .map(|rank| {
                let t = space.unrank(rank);
                if t[1] == 0 {
                    vec![ratio(3, 4), ratio(1, 4)]
                } else {
                    vec![ratio(1, 3), ratio(2, 3)]
                }
            })
            .collect();
        let model =
            MarkovModel::new(vec![Symbol::int(0), Symbol::int(1)], 2, rows).unwrap();
        let spec = ProcessSpec::Markov(model);
        let law1 = exact_pattern_law(&spec, 1).unwrap();
        assert_eq!(law1.prob(&pat(&[1])), ratio(1, 1));
        let law2 = exact_pattern_law(&spec, 2).unwrap();
        assert_abs_diff_eq!(
            ratio::to_f64(&(law2.prob(&pat(&[1, 1])) + law2.prob(&pat(&[1, 2])))),
            1.0
        );
    }

    #[test]
    fn sticky_law_is_uniform_over_adjacent_repeat_patterns() {
        let spec = builtins::ex7_sticky();
        for n in 2..=10 {
            let law = exact_pattern_law(&spec, n).unwrap();
            assert_eq!(law.support_len(), 1 << (n - 1));
            assert_abs_diff_eq!(law.entropy_bits(), (n - 1) as f64);
            if n >= 3 {
                // Non-adjacent recurrences are impossible.
                let mut labels = vec![1, 2];
                labels.extend(std::iter::repeat(1).take(n - 2));
                assert!(law.prob(&pat(&labels)).is_zero());
            }
        }
        let law3 = exact_pattern_law(&spec, 3).unwrap();
        assert_eq!(law3.prob(&pat(&[1, 1, 2])), ratio(1, 4));
        assert_eq!(law3.prob(&pat(&[1, 2, 1])), ratio(0, 1));
    }

    #[test]
    fn sticky_law_with_biased_repeat_probability() {
        let spec = ProcessSpec::Sticky(crate::process::StickySpec::new(ratio(1, 3)).unwrap());
        let law = exact_pattern_law(&spec, 3).unwrap();
        assert_eq!(law.prob(&pat(&[1, 1, 1])), ratio(1, 9));
        assert_eq!(law.prob(&pat(&[1, 1, 2])), ratio(2, 9));
        assert_eq!(law.prob(&pat(&[1, 2, 2])), ratio(2, 9));
        assert_eq!(law.prob(&pat(&[1, 2, 3])), ratio(4, 9));
    }

    #[test]
    fn conditional_profile_checks_source_and_lengths() {
        let spec = bernoulli_half();
        let l2 = exact_pattern_law(&spec, 2).unwrap();
        let l3 = exact_pattern_law(&spec, 3).unwrap();
        assert_abs_diff_eq!(conditional_profile(&l2, &l3).unwrap(), 1.0);
        assert!(conditional_profile(&l3, &l2).is_err());
        let other = exact_pattern_law(&builtins::ex7_sticky(), 3).unwrap();
        assert!(conditional_profile(&l2, &other).is_err());
    }

    #[test]
    fn profile_rows_are_consistent_with_single_laws() {
        let spec = builtins::ex4_mixed_iid();
        let profile = exact_entropy_profile(&spec, 5).unwrap();
        assert_eq!(profile.len(), 5);
        assert_abs_diff_eq!(profile[0].block_bits, 0.0);
        assert_abs_diff_eq!(profile[0].cond_bits, 0.0);
        for w in profile.windows(2) {
            assert_abs_diff_eq!(
                w[1].cond_bits,
                w[1].block_bits - w[0].block_bits,
                epsilon = 1e-12
            );
            assert!(w[1].block_bits >= w[0].block_bits);
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let spec = bernoulli_half();
        assert!(matches!(
            exact_pattern_law(&spec, ENUMERATION_CAP + 1),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn unsupported_kinds_are_rejected() {
        assert!(matches!(
            exact_pattern_law(&builtins::ex5_mixed_markov(), 3),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            exact_pattern_law(&builtins::ex6_noisy_markov(), 3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sequence_entropy_matches_closed_forms() {
        let iid = bernoulli_half();
        assert_abs_diff_eq!(exact_sequence_entropy(&iid, 5).unwrap(), 5.0);
        let chain = ProcessSpec::Markov(
            MarkovModel::first_order(
                vec![Symbol::int(0), Symbol::int(1)],
                vec![
                    vec![ratio(3, 4), ratio(1, 4)],
                    vec![ratio(1, 4), ratio(3, 4)],
                ],
            )
            .unwrap(),
        );
        // H(X^n) = H(X_1) + (n−1)·rate for a stationary first-order chain.
        let rate = crate::ratio::binary_entropy_bits(0.25);
        assert_abs_diff_eq!(
            exact_sequence_entropy(&chain, 4).unwrap(),
            1.0 + 3.0 * rate,
            epsilon = 1e-12
        );
        assert_eq!(
            exact_sequence_entropy(&builtins::ex4_mixed_iid(), 3).unwrap(),
            f64::INFINITY
        );
        assert_eq!(
            exact_sequence_entropy(&builtins::ex7_sticky(), 3).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn law_rejects_wrong_lengths_and_bad_mass() {
        let mut probs = BTreeMap::new();
        probs.insert(pat(&[1, 1]), ratio(1, 2));
        probs.insert(pat(&[1]), ratio(1, 2));
        assert!(PatternLaw::new(2, "x".into(), probs).is_err());
        let mut probs = BTreeMap::new();
        probs.insert(pat(&[1, 1]), ratio(1, 2));
        assert!(PatternLaw::new(2, "x".into(), probs).is_err());
    }
}
