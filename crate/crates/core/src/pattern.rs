//! Patterns: sequences relabeled by order of first appearance.
//!
//! The pattern of `x₁ … xₙ` assigns label 1 to `x₁` and, reading left to
//! right, the next unused positive integer to each previously unseen symbol:
//!
//! ```text
//! sequence:  e n g l i s h ␣ i s ␣ h …
//! pattern:   1 2 3 4 5 6 7 8 5 6 8 7 …
//! ```
//!
//! A label vector is a pattern of some sequence exactly when it is a
//! *restricted growth string*: `z₁ = 1` and `z_{i+1} ≤ 1 + max(z₁, …, z_i)`.
//! Restricted growth strings of length `n` encode the set partitions of
//! `{1, …, n}` (cells = positions sharing a label), so there are Bell(n) of
//! them.  [`enumerate_patterns`] walks all of them in lexicographic order and
//! is capped at [`ENUMERATION_CAP`](crate::ENUMERATION_CAP) because Bell
//! numbers grow super-exponentially.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::ratio::{format_rational, Rational};
use crate::{Error, Result, ENUMERATION_CAP};

/// One observable value of a source.
///
/// Discrete alphabets use [`Symbol::Label`]; numeric atom locations (which
/// must support exact addition for additive-noise sources) use
/// [`Symbol::Num`]; draws from a continuous component use [`Symbol::Token`]
/// with a run-unique token, so two continuum draws never collide and never
/// equal an atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Opaque discrete label.
    Label(String),
    /// Exact numeric value.
    Num(Rational),
    /// Run-unique stand-in for one draw from a continuous distribution.
    Token(u128),
}

impl Symbol {
    /// Label constructor that avoids `Symbol::Label(String::from(..))` noise.
    pub fn label(s: impl Into<String>) -> Self {
        Symbol::Label(s.into())
    }

    /// Exact integer symbol.
    pub fn int(n: i64) -> Self {
        Symbol::Num(Rational::from_integer(n.into()))
    }

    /// Exact rational symbol `n/d`.
    pub fn num(n: i64, d: i64) -> Self {
        Symbol::Num(crate::ratio::ratio(n, d))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Label(s) => f.write_str(s),
            Symbol::Num(r) => f.write_str(&format_rational(r)),
            Symbol::Token(t) => write!(f, "#{t:x}"),
        }
    }
}

/// A validated pattern: a restricted growth string with 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    labels: Vec<u32>,
}

impl Pattern {
    /// Wrap a label vector, rejecting anything that is not a restricted
    /// growth string.
    pub fn new(labels: Vec<u32>) -> Result<Self> {
        if let Some(i) = first_violation(&labels) {
            return Err(Error::InvalidPattern(format!(
                "label {} at position {} breaks restricted growth (max so far {})",
                labels[i],
                i + 1,
                labels[..i].iter().copied().max().unwrap_or(0),
            )));
        }
        Ok(Pattern { labels })
    }

    /// The label vector.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Block length `n`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// True for the empty pattern.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of distinct labels (cells of the induced set partition).
    pub fn distinct(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0) as usize
    }

    /// The pattern of the first `k` positions.
    ///
    /// Patterns are prefix-consistent: the pattern of a prefix is the prefix
    /// of the pattern, so this is a plain truncation.
    pub fn prefix(&self, k: usize) -> Pattern {
        Pattern { labels: self.labels[..k.min(self.labels.len())].to_vec() }
    }

    /// Multiplicities of the labels `1..=distinct`, in label order.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut mult = vec![0u32; self.distinct()];
        for &z in &self.labels {
            mult[(z - 1) as usize] += 1;
        }
        mult
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for z in &self.labels {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{z}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() {
            return Pattern::new(Vec::new());
        }
        let labels = t
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPattern(format!("{part:?} is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Pattern::new(labels)
    }
}

/// Index of the first restricted-growth violation, if any.
fn first_violation(labels: &[u32]) -> Option<usize> {
    let mut max = 0u32;
    for (i, &z) in labels.iter().enumerate() {
        if z == 0 || z > max + 1 {
            return Some(i);
        }
        max = max.max(z);
    }
    None
}

/// True when the label vector is a restricted growth string.
pub fn is_valid_pattern(labels: &[u32]) -> bool {
    first_violation(labels).is_none()
}

/// Pattern of a symbol sequence: labels by order of first appearance.
pub fn pattern_of(seq: &[Symbol]) -> Pattern {
    let mut seen: BTreeMap<&Symbol, u32> = BTreeMap::new();
    let mut labels = Vec::with_capacity(seq.len());
    for x in seq {
        let next = seen.len() as u32 + 1;
        let z = *seen.entry(x).or_insert(next);
        labels.push(z);
    }
    Pattern { labels }
}

/// Lazy lexicographic enumeration of all patterns of length `n`.
///
/// Fails when `n` exceeds the enumeration cap; the iterator yields Bell(n)
/// patterns.
pub fn enumerate_patterns(n: usize) -> Result<PatternIter> {
    enumerate_patterns_capped(n, ENUMERATION_CAP)
}

/// [`enumerate_patterns`] with an explicit cap.
pub fn enumerate_patterns_capped(n: usize, cap: usize) -> Result<PatternIter> {
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    Ok(PatternIter { labels: vec![1; n], exhausted: false, fresh: true })
}

/// Iterator over restricted growth strings in lexicographic order.
pub struct PatternIter {
    labels: Vec<u32>,
    exhausted: bool,
    fresh: bool,
}

impl Iterator for PatternIter {
    type Item = Pattern;

    fn next(&mut self) -> Option<Pattern> {
        if self.exhausted {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            return Some(Pattern { labels: self.labels.clone() });
        }
        // Rightmost position that can still grow: z_i may rise to
        // 1 + max(prefix).  Position 0 is pinned at 1.
        let n = self.labels.len();
        let mut prefix_max = vec![0u32; n];
        let mut running = 0;
        for i in 0..n {
            running = running.max(self.labels[i]);
            prefix_max[i] = running;
        }
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.labels[i] <= prefix_max[i - 1] {
                self.labels[i] += 1;
                for j in i + 1..n {
                    self.labels[j] = 1;
                }
                return Some(Pattern { labels: self.labels.clone() });
            }
        }
        self.exhausted = true;
        None
    }
}

/// First-occurrence bookkeeping for a symbol sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceTable {
    /// `distinct_per_prefix[i]` = number of distinct symbols among the first
    /// `i + 1` positions.
    pub distinct_per_prefix: Vec<usize>,
    /// 1-based index of each symbol's first appearance.
    pub first_index: BTreeMap<Symbol, usize>,
}

/// Scan a sequence once, recording first-appearance indices and the running
/// count of distinct symbols.
pub fn occurrence_table(seq: &[Symbol]) -> OccurrenceTable {
    let mut first_index = BTreeMap::new();
    let mut distinct_per_prefix = Vec::with_capacity(seq.len());
    for (i, x) in seq.iter().enumerate() {
        first_index.entry(x.clone()).or_insert(i + 1);
        distinct_per_prefix.push(first_index.len());
    }
    OccurrenceTable { distinct_per_prefix, first_index }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Vec<Symbol> {
        s.chars().map(|c| Symbol::label(c.to_string())).collect()
    }

    /// Independent count oracle: the Bell triangle.
    ///
    /// Row 0 is [1]; each row starts with the last entry of the previous row
    /// and adds its left neighbour and the entry above it.  Bell(n) is the
    /// first entry of row n.
    fn bell(n: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = Vec::with_capacity(row.len() + 1);
            next.push(*row.last().unwrap());
            for &above in &row {
                let prev = *next.last().unwrap();
                next.push(prev + above);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn bell_oracle_matches_known_values() {
        let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115_975, 678_570, 4_213_597];
        for (n, &b) in expected.iter().enumerate() {
            assert_eq!(bell(n), b, "Bell({n})");
        }
    }

    #[test]
    fn english_sentence_pattern() {
        let seq = chars("english is hard to learn");
        let expected = [
            1, 2, 3, 4, 5, 6, 7, 8, 5, 6, 8, 7, 9, 10, 11, 8, 12, 13, 8, 4, 1, 9, 10, 2,
        ];
        assert_eq!(pattern_of(&seq).labels(), &expected);
    }

    #[test]
    fn empty_and_singleton_sequences() {
        assert_eq!(pattern_of(&[]).labels(), &[] as &[u32]);
        assert_eq!(pattern_of(&[Symbol::int(7)]).labels(), &[1]);
    }

    #[test]
    fn tokens_and_atoms_never_alias() {
        let seq = vec![Symbol::int(0), Symbol::Token(0), Symbol::Token(1), Symbol::int(0)];
        assert_eq!(pattern_of(&seq).labels(), &[1, 2, 3, 1]);
    }

    #[test]
    fn pattern_of_its_own_labels_is_identity() {
        for n in 0..=8 {
            for p in enumerate_patterns(n).unwrap() {
                let as_symbols: Vec<Symbol> =
                    p.labels().iter().map(|&z| Symbol::int(z as i64)).collect();
                assert_eq!(pattern_of(&as_symbols), p);
            }
        }
    }

    #[test]
    fn validity_matches_first_principles() {
        assert!(is_valid_pattern(&[]));
        assert!(is_valid_pattern(&[1]));
        assert!(is_valid_pattern(&[1, 1, 2, 1, 3, 2]));
        assert!(!is_valid_pattern(&[2]));
        assert!(!is_valid_pattern(&[1, 3]));
        assert!(!is_valid_pattern(&[1, 2, 4]));
        assert!(!is_valid_pattern(&[1, 0]));
    }

    #[test]
    fn enumeration_count_matches_bell_oracle() {
        for n in 0..=10 {
            let count = enumerate_patterns(n).unwrap().count() as u64;
            assert_eq!(count, bell(n), "pattern count at n = {n}");
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_valid() {
        let patterns: Vec<Pattern> = enumerate_patterns(5).unwrap().collect();
        for w in patterns.windows(2) {
            assert!(w[0].labels() < w[1].labels(), "{} !< {}", w[0], w[1]);
        }
        for p in &patterns {
            assert!(is_valid_pattern(p.labels()));
        }
        assert_eq!(patterns[0].labels(), &[1, 1, 1, 1, 1]);
        assert_eq!(patterns.last().unwrap().labels(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert!(matches!(
            enumerate_patterns(ENUMERATION_CAP + 1),
            Err(Error::EnumerationCap { .. })
        ));
        assert!(enumerate_patterns_capped(3, 2).is_err());
    }

    #[test]
    fn enumeration_of_length_zero_yields_one_empty_pattern() {
        let all: Vec<Pattern> = enumerate_patterns(0).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_empty());
    }

    #[test]
    fn every_sequence_pattern_is_enumerated_small_n() {
        use std::collections::BTreeSet;
        for n in 1..=5usize {
            let enumerated: BTreeSet<Pattern> = enumerate_patterns(n).unwrap().collect();
            let mut observed = BTreeSet::new();
            // All sequences over an n-letter alphabet realize every pattern.
            let mut idx = vec![0usize; n];
            loop {
                let seq: Vec<Symbol> = idx.iter().map(|&i| Symbol::int(i as i64)).collect();
                observed.insert(pattern_of(&seq));
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < n {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
            assert_eq!(observed, enumerated, "n = {n}");
        }
    }

    #[test]
    fn prefix_of_pattern_is_pattern_of_prefix() {
        let seq = chars("abracadabra");
        let full = pattern_of(&seq);
        for k in 0..=seq.len() {
            assert_eq!(full.prefix(k), pattern_of(&seq[..k]));
        }
    }

    #[test]
    fn multiplicities_count_label_occurrences() {
        let p = Pattern::from_str("1,2,1,3,1,2").unwrap();
        assert_eq!(p.multiplicities(), vec![3, 2, 1]);
        assert_eq!(p.distinct(), 3);
    }

    #[test]
    fn pattern_text_roundtrip() {
        let p = pattern_of(&chars("english is hard to learn"));
        let s = p.to_string();
        assert_eq!(s.parse::<Pattern>().unwrap(), p);
        assert!("1,3".parse::<Pattern>().is_err());
        assert!("1,a".parse::<Pattern>().is_err());
    }

    #[test]
    fn occurrence_table_tracks_first_appearances() {
        let seq = chars("abab");
        let table = occurrence_table(&seq);
        assert_eq!(table.distinct_per_prefix, vec![1, 2, 2, 2]);
        assert_eq!(table.first_index[&Symbol::label("a")], 1);
        assert_eq!(table.first_index[&Symbol::label("b")], 2);
    }

    #[test]
    fn occurrence_table_distinct_count_matches_pattern_max() {
        let seq = chars("mississippi");
        let table = occurrence_table(&seq);
        let p = pattern_of(&seq);
        assert_eq!(*table.distinct_per_prefix.last().unwrap(), p.distinct());
    }
}
