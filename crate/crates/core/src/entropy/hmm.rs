//! Exact conditional-entropy brackets for finite hidden Markov sources.
//!
//! For a stationary hidden chain `X` observed through per-state emissions as
//! `Y`, the two classical sequences
//!
//! * `upper_n = H(Y_n | Y^{n−1})` — nonincreasing, and
//! * `lower_n = H(Y_n | Y^{n−1}, X_1)` — nondecreasing,
//!
//! sandwich the entropy rate `H(Y)` at every `n` and close on it as `n`
//! grows.  Both are computed *exactly*: a depth-first walk over observation
//! prefixes propagates rational forward vectors `α_d[s] = P(y^d, state)`,
//! and each prefix contributes `−p·log₂ p` to the block entropy at its
//! depth.  Chains of memory `m > 1` are lifted to first order over
//! `m`-tuples; the lower bound then conditions on the initial tuple
//! `(X_1, …, X_m)`, which reduces to `X_1` in the common first-order case.
//!
//! The walk visits every positive-probability observation prefix, so its
//! cost is exponential in `n`; a node budget turns runaway cases into an
//! error instead of an unbounded computation.

use num_traits::Zero;

use crate::process::HiddenMarkovModel;
use crate::ratio::{self, Rational};
use crate::{Error, Result, HMM_BRACKET_CAP};

/// Forward-walk node budget across one whole bracket computation.
const NODE_BUDGET: u64 = 5_000_000;

/// One depth of the bracket.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BracketRow {
    /// Conditioning depth.
    pub n: usize,
    /// `H(Y_n | Y^{n−1}, X_1)` in bits.
    pub lower_bits: f64,
    /// `H(Y_n | Y^{n−1})` in bits.
    pub upper_bits: f64,
}

/// Monotone entropy-rate bracket, one row per depth `1..=n_max`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EntropyBracket {
    rows: Vec<BracketRow>,
}

impl EntropyBracket {
    /// All rows, depth ascending.
    pub fn rows(&self) -> &[BracketRow] {
        &self.rows
    }

    /// The deepest (tightest) row.
    pub fn last(&self) -> &BracketRow {
        self.rows.last().expect("brackets have at least one row")
    }
}

struct Lifted {
    mu: Vec<Rational>,
    tuples: Vec<Vec<usize>>,
    step: Vec<Vec<(usize, Rational)>>,
    /// Dense per-chain-state emission rows over the observation alphabet.
    emit: Vec<Vec<Rational>>,
    order: usize,
    obs_count: usize,
}

impl Lifted {
    fn new(h: &HiddenMarkovModel) -> Result<Self> {
        let chain = h.chain();
        let space = chain.tuple_space();
        let alphabet = h.observation_alphabet();
        let emit = (0..chain.states().len())
            .map(|state| {
                alphabet
                    .iter()
                    .map(|obs| h.emission(state).prob(obs))
                    .collect::<Vec<_>>()
            })
            .collect();
        let step = (0..space.len())
            .map(|rank| {
                chain
                    .row(rank)
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| !p.is_zero())
                    .map(|(j, p)| (space.shift(rank, j), p.clone()))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Lifted {
            mu: chain.stationary_tuples()?,
            tuples: (0..space.len()).map(|rank| space.unrank(rank)).collect(),
            step,
            emit,
            order: chain.order(),
            obs_count: alphabet.len(),
        })
    }

    /// Add `weight · H(Y^d)` contributions for every observation prefix
    /// reachable from `alpha` into `acc[d]`, for depths `d ≤ n_max`.
    fn walk(
        &self,
        alpha: &[Rational],
        depth: usize,
        n_max: usize,
        weight: f64,
        acc: &mut [f64],
        nodes: &mut u64,
    ) -> Result<()> {
        if depth == n_max {
            return Ok(());
        }
        let d = depth + 1;
        for obs in 0..self.obs_count {
            *nodes += 1;
            if *nodes > NODE_BUDGET {
                return Err(Error::EnumerationTooLarge {
                    count: *nodes as u128,
                    limit: NODE_BUDGET as u128,
                });
            }
            let mut next = vec![ratio::zero(); alpha.len()];
            if d <= self.order {
                // Warm-up: the first `order` observations are emitted by the
                // coordinates of the initial tuple; no transition yet.
                for (rank, mass) in alpha.iter().enumerate() {
                    if !mass.is_zero() {
                        let state = self.tuples[rank][d - 1];
                        let e = &self.emit[state][obs];
                        if !e.is_zero() {
                            next[rank] = mass * e;
                        }
                    }
                }
            } else {
                for (rank, mass) in alpha.iter().enumerate() {
                    if mass.is_zero() {
                        continue;
                    }
                    for (next_rank, p) in &self.step[rank] {
                        let state = *self.tuples[*next_rank]
                            .last()
                            .expect("tuples are nonempty");
                        let e = &self.emit[state][obs];
                        if !e.is_zero() {
                            next[*next_rank] += mass * p * e;
                        }
                    }
                }
            }
            let total = next.iter().fold(ratio::zero(), |acc, p| acc + p);
            if total.is_zero() {
                continue;
            }
            let pf = ratio::to_f64(&total);
            acc[d] -= weight * pf * pf.log2();
            self.walk(&next, d, n_max, weight, acc, nodes)?;
        }
        Ok(())
    }
}

/// Exact entropy-rate bracket of a hidden Markov source up to depth `n_max`.
pub fn hmm_entropy_bracket(h: &HiddenMarkovModel, n_max: usize) -> Result<EntropyBracket> {
    if n_max == 0 {
        return Err(Error::InvalidParams("bracket depth must be at least 1".into()));
    }
    if n_max > HMM_BRACKET_CAP {
        return Err(Error::EnumerationCap { n: n_max, cap: HMM_BRACKET_CAP });
    }
    let lifted = Lifted::new(h)?;
    let mut nodes = 0u64;

    let mut block = vec![0.0; n_max + 1];
    lifted.walk(&lifted.mu, 0, n_max, 1.0, &mut block, &mut nodes)?;

    let mut block_given_start = vec![0.0; n_max + 1];
    for (rank, mass) in lifted.mu.iter().enumerate() {
        if mass.is_zero() {
            continue;
        }
        let mut alpha = vec![ratio::zero(); lifted.mu.len()];
        alpha[rank] = ratio::one();
        lifted.walk(
            &alpha,
            0,
            n_max,
            ratio::to_f64(mass),
            &mut block_given_start,
            &mut nodes,
        )?;
    }

    let rows = (1..=n_max)
        .map(|n| BracketRow {
            n,
            lower_bits: (block_given_start[n] - block_given_start[n - 1]).max(0.0),
            upper_bits: (block[n] - block[n - 1]).max(0.0),
        })
        .collect();
    Ok(EntropyBracket { rows })
}
