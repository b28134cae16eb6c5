//! Exact scalar type and its text form.
//!
//! All engine arithmetic happens in `Rational`, an arbitrary-precision
//! fraction kept in lowest terms with a positive denominator. Serialized
//! files carry rationals as strings of the shape `p`, `p/q`, or `-p/q`
//! with `q > 0`, so no reader has to guess a binary or floating layout.

use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational. Lowest terms and positive denominator are
/// maintained by construction.
pub type Rational = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator and a nonzero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational as -1, 0, or 1.
pub fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `p`, `p/q`, or `-p/q`. The denominator must be a positive
/// integer; anything else is rejected rather than normalized, so the
/// accepted grammar is exactly the emitted one.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer: BigInt = num_text.parse().map_err(|_| bad())?;
    let denom: BigInt = match den_text {
        Some(d) if !d.starts_with('+') && !d.starts_with('-') => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if denom <= BigInt::zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Renders a rational in the accepted grammar: integers as `p`, everything
/// else as `p/q` with the sign on the numerator.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Parses a whole coordinate vector.
pub fn parse_vector(coords: &[String]) -> Result<Vec<Rational>> {
    coords.iter().map(|c| parse_rational(c)).collect()
}

/// Renders a coordinate vector.
pub fn format_vector(coords: &[Rational]) -> Vec<String> {
    coords.iter().map(format_rational).collect()
}

/// Exact inner product of two vectors of equal length.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Componentwise difference `a - b`.
pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Rescales to the unique primitive integer vector with the same direction:
/// integer entries with overall gcd 1, first nonzero entry keeping its sign.
/// The zero vector is returned unchanged.
pub fn primitive_direction(v: &[Rational]) -> Vec<Rational> {
    use num::Integer;
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for n in &ints {
        gcd = gcd.gcd(n);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|n| Rational::from_integer(n / &gcd))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("5").unwrap(), rat(5));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "x", "1/0", "1/-2", "1/+2", "1.5", "1/2/3", "/2", "2/"] {
            assert!(parse_rational(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&ratio(-6, 4)), "-3/2");
        assert_eq!(format_rational(&rat(3)), "3");
        assert_eq!(format_rational(&rat(0)), "0");
    }

    #[test]
    fn format_parse_round_trip() {
        for x in [rat(0), rat(12), ratio(-7, 3), ratio(1, 1000)] {
            assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
        }
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = vec![ratio(1, 2), ratio(-3, 4), rat(0)];
        assert_eq!(primitive_direction(&v), vec![rat(2), rat(-3), rat(0)]);
        let w = vec![rat(4), rat(-6)];
        assert_eq!(primitive_direction(&w), vec![rat(2), rat(-3)]);
    }
}
