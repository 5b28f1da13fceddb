//! Entropy of pattern processes: exact laws, Monte Carlo estimates,
//! closed-form rates, and hidden-Markov brackets.
//!
//! The block entropy `H(Z^n)` of the pattern process and its conditional
//! increments `H(Z_n | Z^{n−1}) = H(Z^n) − H(Z^{n−1})` are the working
//! quantities throughout.  Four engines produce them:
//!
//! * [`exact`] — exact pattern laws for i.i.d. (mixed or discrete), finite
//!   Markov, and sticky sources at small block lengths, in big-rational
//!   arithmetic;
//! * [`mc`] — seeded Monte Carlo estimation: the plug-in (optionally
//!   Miller–Madow-corrected) block-entropy estimator with bootstrap standard
//!   errors, plus a Rao–Blackwellized conditional-rate estimator that stays
//!   unbiased at block lengths where plug-in differencing saturates;
//! * [`rate`] — closed-form entropy rates per source family (folded marginal
//!   entropy for i.i.d., chain rate for Markov and mixed-kernel Markov,
//!   binary repeat entropy for sticky, brackets for noisy observations);
//! * [`hmm`] — exact monotone upper/lower conditional-entropy brackets for
//!   hidden Markov observation processes.
//!
//! [`report`] renders any of these as fixed-column CSV or JSON.

pub mod exact;
pub mod hmm;
pub mod mc;
pub mod rate;
pub mod report;

pub use exact::{
    block_entropy, conditional_profile, exact_entropy_profile, exact_pattern_law,
    exact_sequence_entropy, BlockEntropy, PatternLaw,
};
pub use hmm::{hmm_entropy_bracket, BracketRow, EntropyBracket};
pub use mc::{mc_conditional_rate, mc_pattern_entropy, CondRateEstimate, Estimator, McEstimate};
pub use rate::{theoretical_rate, RateReport, TheoreticalRate};
pub use report::{EntropyReport, ReportRow};
