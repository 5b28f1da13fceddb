//! A small library of named source specifications used by the command-line
//! tool and the test suite.
//!
//! Each builtin is one concrete, fully-parameterized source:
//!
//! | name               | family       | gist                                                  |
//! |--------------------|--------------|-------------------------------------------------------|
//! | `ex2-finite-iid`   | iid          | finite pmf `{a: 1/2, b: 1/4, c: 1/4}`                 |
//! | `ex3-uniform`      | iid          | purely continuous marginal (no atoms)                 |
//! | `ex4-mixed-iid`    | iid          | `1/3` continuous + Bernoulli(1/2) scaled by `2/3`     |
//! | `ex5-mixed-markov` | mixed-markov | atoms `{0, 1}` with a shared off-atom kernel          |
//! | `ex6-noisy-markov` | noisy        | binary chain on `{1, 2}` + noise `(1/2)δ₀ + 1/2` continuous |
//! | `ex7-sticky`       | sticky       | repeat previous value w.p. `1/2`, else fresh draw     |
//!
//! `ex5-mixed-markov` folds to a three-state chain on `{0, 1/2, 1}` with
//! stationary law `(1/2, 1/6, 1/3)` and entropy rate
//! `7/4 − (3/8)·log₂3 ≈ 1.15564` bits; `ex7-sticky` is the standing example
//! of a source whose pattern rate (1 bit) exceeds its tilde rate (0).

use crate::distribution::MixedDistribution;
use crate::pattern::Symbol;
use crate::process::{
    AdditiveNoiseSpec, MarkovModel, MixedMarkovModel, ProcessSpec, StickySpec,
};
use crate::ratio::ratio;
use crate::{Error, Result};

/// Builtin names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 6] = [
    "ex2-finite-iid",
    "ex3-uniform",
    "ex4-mixed-iid",
    "ex5-mixed-markov",
    "ex6-noisy-markov",
    "ex7-sticky",
];

/// Look a builtin source up by name.
pub fn builtin(name: &str) -> Result<ProcessSpec> {
    match name {
        "ex2-finite-iid" => Ok(ex2_finite_iid()),
        "ex3-uniform" => Ok(ex3_uniform()),
        "ex4-mixed-iid" => Ok(ex4_mixed_iid()),
        "ex5-mixed-markov" => Ok(ex5_mixed_markov()),
        "ex6-noisy-markov" => Ok(ex6_noisy_markov()),
        "ex7-sticky" => Ok(ex7_sticky()),
        other => Err(Error::InvalidSpec(format!(
            "unknown builtin {other:?}; available: {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// I.i.d. draws from the finite pmf `{a: 1/2, b: 1/4, c: 1/4}`.
pub fn ex2_finite_iid() -> ProcessSpec {
    ProcessSpec::Iid(
        MixedDistribution::discrete(vec![
            (Symbol::label("a"), ratio(1, 2)),
            (Symbol::label("b"), ratio(1, 4)),
            (Symbol::label("c"), ratio(1, 4)),
        ])
        .expect("valid pmf"),
    )
}

/// I.i.d. draws from a purely continuous marginal: no value ever repeats,
/// so the pattern is `1, 2, 3, …` almost surely and its rate is zero.
pub fn ex3_uniform() -> ProcessSpec {
    ProcessSpec::Iid(
        MixedDistribution::new(Vec::new(), ratio(1, 1), None).expect("unit continuous mass"),
    )
}

/// I.i.d. draws that are continuous with probability 1/3 and Bernoulli(1/2)
/// with probability 2/3; the tilde marginal is uniform on three symbols, so
/// the pattern rate is `log₂3`.
pub fn ex4_mixed_iid() -> ProcessSpec {
    ProcessSpec::Iid(
        MixedDistribution::new(
            vec![(Symbol::int(0), ratio(1, 3)), (Symbol::int(1), ratio(1, 3))],
            ratio(1, 3),
            None,
        )
        .expect("valid mixed marginal"),
    )
}

/// First-order mixed-kernel Markov source on `[0, 1]` with atoms `{0, 1}`:
///
/// * from `0`: `(3/4)δ₀ + (1/4)δ₁`;
/// * from `1`: `(1/4)δ₀ + (1/2)δ₁ + 1/4` continuous;
/// * from any non-atom point: `(1/4)δ₀ + (1/4)δ₁ + 1/2` continuous (the
///   continuous shape varies with the current point, but only its total mass
///   matters here).
///
/// The folded chain lives on `{0, 1/2, 1}` (`1/2` standing in for the
/// continuum) with stationary law `(1/2, 1/6, 1/3)`.
pub fn ex5_mixed_markov() -> ProcessSpec {
    let from_zero = MixedDistribution::new(
        vec![(Symbol::int(0), ratio(3, 4)), (Symbol::int(1), ratio(1, 4))],
        ratio(0, 1),
        None,
    )
    .expect("valid kernel");
    let from_one = MixedDistribution::new(
        vec![(Symbol::int(0), ratio(1, 4)), (Symbol::int(1), ratio(1, 2))],
        ratio(1, 4),
        None,
    )
    .expect("valid kernel");
    let from_continuum = MixedDistribution::new(
        vec![(Symbol::int(0), ratio(1, 4)), (Symbol::int(1), ratio(1, 4))],
        ratio(1, 2),
        None,
    )
    .expect("valid kernel");
    ProcessSpec::MixedMarkov(
        MixedMarkovModel::new(
            vec![Symbol::int(0), Symbol::int(1)],
            Symbol::num(1, 2),
            1,
            vec![from_zero, from_one],
            from_continuum,
        )
        .expect("kernels share the atom set {0, 1}"),
    )
}

/// A symmetric binary chain on `{1, 2}` observed through additive noise
/// that is `0` with probability 1/2 and continuous with probability 1/2:
/// the observation equals the hidden state half the time and is an
/// unrepeatable fresh value otherwise.
pub fn ex6_noisy_markov() -> ProcessSpec {
    let base = MarkovModel::first_order(
        vec![Symbol::int(1), Symbol::int(2)],
        vec![
            vec![ratio(3, 4), ratio(1, 4)],
            vec![ratio(1, 4), ratio(3, 4)],
        ],
    )
    .expect("valid chain");
    let noise = MixedDistribution::new(
        vec![(Symbol::int(0), ratio(1, 2))],
        ratio(1, 2),
        None,
    )
    .expect("valid noise marginal");
    ProcessSpec::Noisy(AdditiveNoiseSpec::new(base, noise, None).expect("numeric alphabets"))
}

/// Sticky renewal source: repeat the previous value with probability 1/2,
/// otherwise draw a fresh continuous value.  Its marginal has no atoms, yet
/// the pattern rate is 1 bit — one fresh-or-repeat coin per step.
pub fn ex7_sticky() -> ProcessSpec {
    ProcessSpec::Sticky(StickySpec::new(ratio(1, 2)).expect("ρ in [0, 1)"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::tilde_of;
    use crate::process::tilde_process;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lookup_covers_every_name_and_rejects_unknowns() {
        for name in BUILTIN_NAMES {
            assert!(builtin(name).is_ok(), "missing builtin {name}");
        }
        assert!(builtin("ex9-unheard-of").is_err());
    }

    #[test]
    fn finite_iid_entropy_is_three_halves() {
        match ex2_finite_iid() {
            ProcessSpec::Iid(d) => {
                assert_abs_diff_eq!(tilde_of(&d).entropy_bits(), 1.5, epsilon = 1e-15)
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn uniform_tilde_is_constant() {
        match ex3_uniform() {
            ProcessSpec::Iid(d) => {
                assert!(d.atoms().is_empty());
                assert_eq!(tilde_of(&d).len(), 1);
                assert_abs_diff_eq!(tilde_of(&d).entropy_bits(), 0.0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn mixed_iid_tilde_is_uniform_on_three_symbols() {
        match ex4_mixed_iid() {
            ProcessSpec::Iid(d) => {
                let tilde = tilde_of(&d);
                assert_eq!(tilde.len(), 3);
                assert_abs_diff_eq!(tilde.entropy_bits(), 3f64.log2(), epsilon = 1e-15);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn mixed_markov_folds_to_published_stationary_law() {
        let folded = match tilde_process(&ex5_mixed_markov()) {
            ProcessSpec::Markov(m) => m,
            _ => unreachable!(),
        };
        let mu = folded.stationary_distribution().unwrap();
        assert_eq!(mu.prob(&Symbol::int(0)), ratio(1, 2));
        assert_eq!(mu.prob(&Symbol::num(1, 2)), ratio(1, 6));
        assert_eq!(mu.prob(&Symbol::int(1)), ratio(1, 3));
        let expected = 1.75 - 0.375 * 3f64.log2();
        assert_abs_diff_eq!(folded.entropy_rate_bits().unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn noisy_markov_emits_state_or_reserved_label_evenly() {
        let hmm = match tilde_process(&ex6_noisy_markov()) {
            ProcessSpec::Hmm(h) => h,
            _ => unreachable!(),
        };
        for (i, state) in [Symbol::int(1), Symbol::int(2)].iter().enumerate() {
            let e = hmm.emission(i);
            assert_eq!(e.prob(state), ratio(1, 2));
            assert_eq!(e.prob(&Symbol::label("n_o")), ratio(1, 2));
        }
    }

    #[test]
    fn sticky_repeat_probability_is_one_half() {
        match ex7_sticky() {
            ProcessSpec::Sticky(s) => assert_eq!(*s.repeat_prob(), ratio(1, 2)),
            _ => unreachable!(),
        }
    }
}
