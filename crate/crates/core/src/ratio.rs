//! Exact rational probabilities and the few numeric conversions the crate
//! allows itself.
//!
//! Probabilities that enter exact laws are [`BigRational`] throughout; they
//! become `f64` only when an entropy (in bits) or a sampling table is
//! computed.  Rational literals use the textual form `"p/q"` (or a bare
//! integer) in every JSON interface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact probability / weight type used by all exact laws.
pub type Rational = BigRational;

/// Parse `"p/q"`, `"p"`, or a decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = |reason: &str| Error::BadRational {
        literal: s.to_string(),
        reason: reason.to_string(),
    };
    if t.is_empty() {
        return Err(bad("empty string"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad("numerator is not an integer"))?;
        let d: BigInt = den.trim().parse().map_err(|_| bad("denominator is not an integer"))?;
        if d.is_zero() {
            return Err(bad("denominator is zero"));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("fractional digits are not numeric"));
        }
        let int_part = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            format!("{int_part}0")
        } else {
            int_part.to_string()
        };
        let whole: BigInt = int_part.parse().map_err(|_| bad("integer part is not numeric"))?;
        let frac: BigInt = frac_part.parse().map_err(|_| bad("fractional part is not numeric"))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = Rational::new(frac, scale.clone());
        let whole = Rational::from_integer(whole);
        return Ok(if t.starts_with('-') { whole - magnitude } else { whole + magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| bad("not an integer or p/q"))?;
    Ok(Rational::from_integer(n))
}

/// Format a rational as `"p/q"` (or `"p"` when the denominator is one).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational equal to the given finite `f64`.
///
/// Every finite double is a dyadic rational, so this conversion is lossless;
/// it is how floating-point tails are folded back into exact bookkeeping.
pub fn rational_from_f64(x: f64) -> Result<Rational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::OutOfRange(format!("{x} is not a finite number")))
}

/// Nearest `f64` to the rational.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `0` as a rational.
pub fn zero() -> Rational {
    Rational::zero()
}

/// `1` as a rational.
pub fn one() -> Rational {
    Rational::one()
}

/// `n/d` as a rational, for small literal constants.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// True when `r` is in the closed interval `[0, 1]`.
pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Shannon entropy, in bits, of an iterator of exact probabilities.
///
/// Zero-probability entries contribute nothing.  The caller is responsible
/// for the weights summing to one.
pub fn entropy_bits<'a>(probs: impl IntoIterator<Item = &'a Rational>) -> f64 {
    let mut h = 0.0;
    for p in probs {
        if p.is_zero() {
            continue;
        }
        let pf = to_f64(p);
        h -= pf * pf.log2();
    }
    h
}

/// Shannon entropy, in bits, of floating-point weights.
pub fn entropy_bits_f64(probs: impl IntoIterator<Item = f64>) -> f64 {
    let mut h = 0.0;
    for p in probs {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Binary entropy `h(p)` in bits.
pub fn binary_entropy_bits(p: f64) -> f64 {
    entropy_bits_f64([p, 1.0 - p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn parses_fraction_integer_and_decimal_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational(" -2/6 ").unwrap(), ratio(-1, 3));
        assert_eq!(parse_rational("5").unwrap(), ratio(5, 1));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "a/b", "1/0", "1.x", "--3", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_reduced_fractions() {
        assert_eq!(format_rational(&ratio(6, 8)), "3/4");
        assert_eq!(format_rational(&ratio(4, 2)), "2");
        assert_eq!(format_rational(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn roundtrips_floats_exactly() {
        for x in [0.5, 0.1, 1.0 / 3.0, 0.0, 123.456] {
            let r = rational_from_f64(x).unwrap();
            assert_eq!(to_f64(&r), x);
        }
    }

    #[test]
    fn entropy_of_uniform_three_is_log2_3() {
        let thirds = [ratio(1, 3), ratio(1, 3), ratio(1, 3)];
        assert_abs_diff_eq!(entropy_bits(thirds.iter()), 3f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_ignores_zero_mass() {
        let probs = [ratio(1, 2), ratio(0, 1), ratio(1, 2)];
        assert_abs_diff_eq!(entropy_bits(probs.iter()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn binary_entropy_peak_and_edges() {
        assert_abs_diff_eq!(binary_entropy_bits(0.5), 1.0, epsilon = 1e-12);
        assert_eq!(binary_entropy_bits(0.0), 0.0);
        assert_eq!(binary_entropy_bits(1.0), 0.0);
    }
}
