//! Computable lower bounds on pattern entropies and a slowly-decaying atom
//! family whose pattern entropy rate is infinite.
//!
//! Three pieces live here.
//!
//! **Clumped-marginal conditional bound.**  For an i.i.d. mixed source with
//! atom set containing `B`, the next-step conditional entropy of the pattern
//! process is bounded below by
//!
//! ```text
//! H(Z_{n+1} | Z^n)  ≥  H(Φ_B[f]) · [1 − |B| e^{−n · min_{b∈B} p_b}]
//! ```
//!
//! where `Φ_B[f]` keeps the atoms of `B` and clumps everything else.  The
//! bracket accounts for the probability that some atom of `B` has not yet
//! appeared among the first `n` draws; it can be negative at small `n`,
//! where the bound is vacuous and clipped to zero.
//!
//! **Waiting-time entropy bound.**  If every conditional one-step hit
//! probability of a recurrent symbol lies in `[d_min, d_max]`, the first-hit
//! time `I` has geometrically dominated tails and
//!
//! ```text
//! H(I) ≤ −(d_max log₂ d_min)/d_min − d_max(1−d_min) log₂(1−d_max)/d_min²
//! ```
//!
//! for `d_max < 1`; when `d_max = 1` the hit happens within two steps and
//! `H(I) ≤ 1` bit.  At `d_min = d_max = p` the expression collapses to the
//! exact Geometric(`p`) entropy `h(p)/p`.
//!
//! **Slowly-decaying atom family.**  The normalized probabilities
//!
//! ```text
//! p_1 = 0,   p_i = c(ε) / (i (ln i)^{1+ε})   for i ≥ 2,   ε ∈ (0, 1),
//! ```
//!
//! have finite mass but infinite entropy.  Truncated entropy sums
//! `D_l = Σ_{i≤l} p_i log₂(1/p_i)` grow like a power of `ln l`, and
//!
//! ```text
//! H(Z_{n+1} | Z^n) ≥ max_l D_l · [1 − l e^{−n p_l}]
//! ```
//!
//! bounds the conditional pattern entropy of the induced i.i.d. source from
//! below, forcing it to grow without bound in `n`.  [`theorem5_curve`]
//! evaluates that maximum on a grid of block lengths.
//!
//! All interfaces speak bits; intermediate sums are accumulated in nats and
//! converted once.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::distribution::{clump, MixedDistribution};
use crate::pattern::Symbol;
use crate::process::MixedMarkovModel;
use crate::ratio;
use crate::{Error, Result};

const LN_2: f64 = std::f64::consts::LN_2;

/// Truncation indices beyond this are never attempted when enclosing the
/// normalization constant.
const TRUNCATION_CAP: u64 = 1 << 24;

/// Lower bound on the conditional pattern entropy `H(Z_{n+1} | Z^n)` of an
/// i.i.d. mixed source, from the marginal clumped by the kept atom set `b`:
/// `H(Φ_B[f]) · max(0, 1 − |B| e^{−n·min_{b∈B} p_b})`.
///
/// A zero return at small `n` means the bracket was nonpositive and the
/// bound is vacuous there; for fixed inputs the bound increases to
/// `H(Φ_B[f])` as `n → ∞`.
///
/// Errors when `b` is empty, `b` contains a non-atom, or `n = 0`.
pub fn prop4_lower_bound(dist: &MixedDistribution, b: &BTreeSet<Symbol>, n: u64) -> Result<f64> {
    if b.is_empty() {
        return Err(Error::InvalidParams("kept atom set B must be nonempty".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParams("block length n must be at least 1".into()));
    }
    let clumped = clump(dist, b)?;
    let min_p = b
        .iter()
        .map(|sym| ratio::to_f64(&dist.atom_prob(sym)))
        .fold(f64::INFINITY, f64::min);
    let bracket = 1.0 - (b.len() as f64) * (-(n as f64) * min_p).exp();
    Ok(clumped.entropy_bits() * bracket.max(0.0))
}

/// Upper bound in bits on the entropy of a first-hit time whose conditional
/// one-step hit probabilities all lie in `[d_min, d_max]`.
///
/// Requires `0 < d_min ≤ d_max ≤ 1`.  At `d_max = 1` the waiting time is at
/// most 2 and the bound is 1 bit; at `d_min = d_max = p` the bound equals the
/// exact Geometric(`p`) entropy `h(p)/p`.
pub fn waiting_time_entropy_bound(d_min: f64, d_max: f64) -> Result<f64> {
    if !(d_min > 0.0 && d_min <= d_max && d_max <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "hit probabilities must satisfy 0 < d_min ≤ d_max ≤ 1, got ({d_min}, {d_max})"
        )));
    }
    if d_max == 1.0 {
        return Ok(1.0);
    }
    let direct = -(d_max * d_min.log2()) / d_min;
    let tail = -d_max * (1.0 - d_min) * (1.0 - d_max).log2() / (d_min * d_min);
    Ok(direct + tail)
}

/// [`waiting_time_entropy_bound`] applied to the first-hit time of `atom`
/// under a mixed-kernel chain: `d_min`/`d_max` are the smallest and largest
/// one-step probabilities of `atom` across all kernels.
pub fn waiting_time_bound_for_atom(model: &MixedMarkovModel, atom: &Symbol) -> Result<f64> {
    if !model.atom_states().contains(atom) {
        return Err(Error::InvalidParams(format!("{atom} is not an atom state of the chain")));
    }
    let mut d_min = f64::INFINITY;
    let mut d_max = f64::NEG_INFINITY;
    for kernel in model.kernels() {
        let d = ratio::to_f64(&kernel.atom_prob(atom));
        d_min = d_min.min(d);
        d_max = d_max.max(d);
    }
    waiting_time_entropy_bound(d_min, d_max)
}

/// The atom family `p_i = c(ε)/(i (ln i)^{1+ε})`, `i ≥ 2`, with a rigorous
/// enclosure of the normalization constant `c(ε)`.
///
/// The reciprocal `1/c(ε) = Σ_{i≥2} 1/(i (ln i)^{1+ε})` is enclosed by a
/// partial sum to the truncation index `N` plus integral tail brackets
/// `[(ln(N+1))^{−ε}/ε, (ln N)^{−ε}/ε]`; `N` doubles until the enclosure
/// width drops below the requested precision.
///
/// `delta` is carried for growth-rate comparisons of the form
/// `bound(n)/(log₂ n)^{1−δ}` and must satisfy `ε < min{δ, 1}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthParams {
    epsilon: f64,
    delta: f64,
    c_lo: f64,
    c_hi: f64,
    truncation: u64,
    tail_bound: f64,
}

impl GrowthParams {
    /// Enclose `c(ε)` to within `precision` and record the truncation used.
    ///
    /// Requires `ε ∈ (0, 1)`, `δ > 0`, `ε < min{δ, 1}`, and `precision > 0`;
    /// fails with a precision error when the enclosure cannot reach the
    /// requested width within the truncation cap.
    pub fn new(epsilon: f64, delta: f64, precision: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::OutOfRange(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        if !(delta > 0.0) {
            return Err(Error::OutOfRange(format!("delta must be positive, got {delta}")));
        }
        if epsilon >= delta.min(1.0) {
            return Err(Error::OutOfRange(format!(
                "epsilon must be below min(delta, 1) = {}, got {epsilon}",
                delta.min(1.0)
            )));
        }
        if !(precision > 0.0 && precision.is_finite()) {
            return Err(Error::OutOfRange(format!("precision must be positive, got {precision}")));
        }

        let reciprocal_term = |i: u64| {
            let x = i as f64;
            1.0 / (x * x.ln().powf(1.0 + epsilon))
        };
        let tail_integral = |from: u64| (from as f64).ln().powf(-epsilon) / epsilon;

        let mut partial = Kahan::default();
        let mut summed_to = 1u64;
        let mut n = 1u64 << 12;
        loop {
            while summed_to < n {
                summed_to += 1;
                partial.add(reciprocal_term(summed_to));
            }
            let t_hi = partial.value() + tail_integral(n);
            let t_lo = partial.value() + tail_integral(n + 1);
            let c_lo = 1.0 / t_hi;
            let c_hi = 1.0 / t_lo;
            if c_hi - c_lo <= precision {
                return Ok(GrowthParams {
                    epsilon,
                    delta,
                    c_lo,
                    c_hi,
                    truncation: n,
                    tail_bound: c_hi * tail_integral(n),
                });
            }
            if n >= TRUNCATION_CAP {
                return Err(Error::PrecisionUnachievable {
                    requested: precision,
                    cap: TRUNCATION_CAP,
                });
            }
            n *= 2;
        }
    }

    /// Tail exponent `ε`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Growth-comparison exponent `δ`.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Rigorous enclosure `[lo, hi]` of the normalization constant `c(ε)`.
    pub fn c_enclosure(&self) -> (f64, f64) {
        (self.c_lo, self.c_hi)
    }

    /// Midpoint of the `c(ε)` enclosure, used as the working constant.
    pub fn c_mid(&self) -> f64 {
        0.5 * (self.c_lo + self.c_hi)
    }

    /// Width of the `c(ε)` enclosure.
    pub fn enclosure_width(&self) -> f64 {
        self.c_hi - self.c_lo
    }

    /// Index `N` the reciprocal sum was carried to.
    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    /// Upper bound on the probability mass sitting beyond the truncation
    /// index.  Small `ε` makes this tail heavy even when the enclosure of
    /// `c(ε)` is tight.
    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Atom probability `p_i`: zero at `i ≤ 1`, else `c(ε)/(i (ln i)^{1+ε})`.
    pub fn p_i(&self, i: u64) -> f64 {
        if i <= 1 {
            return 0.0;
        }
        let x = i as f64;
        self.c_mid() / (x * x.ln().powf(1.0 + self.epsilon))
    }
}

/// [`GrowthParams`] for plain use of the atom family, without a growth
/// comparison exponent (`δ = 1`, leaving `ε` free in `(0, 1)`).
pub fn growth_distribution(epsilon: f64, precision: f64) -> Result<GrowthParams> {
    GrowthParams::new(epsilon, 1.0, precision)
}

/// Truncated entropy sum `D_l = Σ_{i=2}^{l} p_i log₂(1/p_i)` in bits.
///
/// Zero for `l ≤ 1` and strictly increasing in `l` from there; the family
/// has infinite entropy, so the sums grow without bound (like a power of
/// `ln l`).
pub fn d_partial(params: &GrowthParams, l: u64) -> f64 {
    let mut nats = Kahan::default();
    for i in 2..=l.max(1) {
        let p = params.p_i(i);
        nats.add(-p * p.ln());
    }
    nats.value() / LN_2
}

/// One evaluated point of the conditional-entropy lower-bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundPoint {
    /// Block length.
    pub n: u64,
    /// `max(0, max_l D_l·[1 − l e^{−n p_l}])` in bits.
    pub bound_bits: f64,
    /// Candidate `l` attaining the inner maximum (before clipping; at a
    /// clipped point this is the least-vacuous candidate).
    pub argmax_l: u64,
}

/// Lower-bound curve for conditional pattern entropies of the slowly
/// decaying family, evaluated on an increasing grid of block lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    rows: Vec<BoundPoint>,
}

impl BoundCurve {
    /// Evaluated points in grid order.
    pub fn rows(&self) -> &[BoundPoint] {
        &self.rows
    }

    /// Versioned CSV rendering with columns `n,bound_bits,argmax_l`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# pel bound curve v1\n");
        out.push_str("n,bound_bits,argmax_l\n");
        for row in &self.rows {
            writeln!(out, "{},{},{}", row.n, row.bound_bits, row.argmax_l)
                .expect("string writes cannot fail");
        }
        out
    }
}

/// Maximize `D_l·[1 − l e^{−n p_l}]` over a candidate set of truncation
/// levels for each `n` in the grid, clipping negative values to zero.
///
/// The candidates at block length `n` are `⌊n^{(1−ε)/(1+ε)}⌋` together with
/// the powers of two up to `n`; the grid must be nonempty, strictly
/// increasing, and positive.
pub fn theorem5_curve(params: &GrowthParams, n_grid: &[u64]) -> Result<BoundCurve> {
    if n_grid.is_empty() {
        return Err(Error::InvalidParams("block-length grid must be nonempty".into()));
    }
    if n_grid[0] == 0 {
        return Err(Error::InvalidParams("block lengths must be at least 1".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams("block-length grid must be strictly increasing".into()));
    }

    let exponent = (1.0 - params.epsilon()) / (1.0 + params.epsilon());
    let candidates_for = |n: u64| -> BTreeSet<u64> {
        let mut set = BTreeSet::new();
        set.insert(((n as f64).powf(exponent).floor() as u64).max(2));
        let mut l = 2u64;
        while l <= n {
            set.insert(l);
            l *= 2;
        }
        set.insert(2);
        set
    };

    let mut all_candidates = BTreeSet::new();
    for &n in n_grid {
        all_candidates.extend(candidates_for(n));
    }
    let d_by_level = d_at_levels(params, &all_candidates);

    let rows = n_grid
        .iter()
        .map(|&n| {
            let mut best_value = f64::NEG_INFINITY;
            let mut best_l = 0u64;
            for l in candidates_for(n) {
                let bracket = 1.0 - (l as f64) * (-(n as f64) * params.p_i(l)).exp();
                let value = d_by_level[&l] * bracket;
                if value > best_value {
                    best_value = value;
                    best_l = l;
                }
            }
            BoundPoint { n, bound_bits: best_value.max(0.0), argmax_l: best_l }
        })
        .collect();
    Ok(BoundCurve { rows })
}

/// `D_l` at each requested level, from one incremental pass.
fn d_at_levels(params: &GrowthParams, levels: &BTreeSet<u64>) -> BTreeMap<u64, f64> {
    let mut out = BTreeMap::new();
    let mut nats = Kahan::default();
    let mut summed_to = 1u64;
    for &l in levels {
        while summed_to < l {
            summed_to += 1;
            let p = params.p_i(summed_to);
            nats.add(-p * p.ln());
        }
        out.insert(l, nats.value() / LN_2);
    }
    out
}

/// Compensated accumulator for long positive sums.
#[derive(Debug, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}
