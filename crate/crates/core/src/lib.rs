//! Pattern processes of stochastic sources.
//!
//! A *pattern* of a sequence is the relabeling of its symbols by order of
//! first appearance: `"english is hard"` has pattern `1,2,3,4,5,6,7,8,5,6,8,7,9,10,11`
//! once each character (space included) is replaced by the index of its first
//! occurrence.  Patterns of length `n` are exactly the restricted growth
//! strings of length `n`, so they are in bijection with set partitions of
//! `{1, …, n}` and are counted by the Bell numbers.
//!
//! This crate studies the information content of pattern sequences induced by
//! stochastic sources whose marginals may mix discrete atoms with a continuous
//! component:
//!
//! * [`pattern`] — patterns, restricted growth strings, occurrence tables;
//! * [`distribution`] — mixed discrete/continuous marginals, the clumping
//!   operator, and exact-rational probability bookkeeping;
//! * [`process`] — generative source models (i.i.d., Markov, mixed-kernel
//!   Markov, additive noise, sticky renewal, hidden Markov) with seeded
//!   simulation;
//! * [`entropy`] — exact pattern laws at small block lengths, Monte Carlo
//!   estimators, closed-form entropy rates, and hidden-Markov entropy
//!   brackets;
//! * [`bounds`] — lower bounds on conditional pattern entropies, waiting-time
//!   entropy bounds, and slowly-decaying atom families whose pattern entropy
//!   grows without bound;
//! * [`builtins`] — ready-made source specifications used by the experiment
//!   suite;
//! * [`acceptance`] — the end-to-end verification suite behind `pel verify-all`.
//!
//! Probabilities are kept as exact big rationals wherever a law is exact;
//! entropies convert to `f64` bits only at the boundary.

pub mod acceptance;
pub mod bounds;
pub mod builtins;
pub mod distribution;
pub mod entropy;
pub mod pattern;
pub mod process;
pub mod ratio;
pub mod rng;
pub mod schema;

mod error;

pub use error::Error;

/// Convenient alias for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Largest block length for which exhaustive pattern enumeration is allowed.
///
/// Bell(12) = 4 213 597 patterns is the point past which exact laws stop
/// being a desk-scale computation.
pub const ENUMERATION_CAP: usize = 12;

/// Largest number of weighted sequences an exact law may enumerate.
pub const SEQUENCE_ENUMERATION_LIMIT: u128 = 50_000_000;

/// Largest support (distinct positive-probability patterns) an exact law may
/// materialize.
pub const LAW_SUPPORT_LIMIT: usize = 1_000_000;

/// Largest block length for the exact hidden-Markov entropy bracket.
pub const HMM_BRACKET_CAP: usize = 16;
