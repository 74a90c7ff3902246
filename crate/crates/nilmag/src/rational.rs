//! Exact rational scalars.
//!
//! All algebraic predicates in this crate (Jacobi identity, cocycle
//! conditions, ranks, lattice membership) are decided in exact rational
//! arithmetic; this module fixes the scalar type and its conversions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

/// Shorthand for small rationals in code and tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parses `"p"` or `"p/q"` with optional sign. Decimal notation is
/// deliberately not accepted: configuration rationals are exact.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |msg: &str| Error::InvalidInput(format!("bad rational {s:?}: {msg}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| bad("numerator is not an integer"))?;
    let den: BigInt = den_str
        .trim()
        .parse()
        .map_err(|_| bad("denominator is not an integer"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `p` when the denominator is 1, else `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Exact lift of a finite f64 into the rationals (every finite f64 is a
/// dyadic rational).
pub fn from_f64_exact(x: f64) -> Result<Rational> {
    Rational::from_float(x)
        .ok_or_else(|| Error::InvalidInput(format!("cannot lift non-finite {x} to a rational")))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom() == &BigInt::from(1)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "1/2", "-7/3", "10/4"] {
            let r = parse_rational(s).unwrap();
            let t = format_rational(&r);
            assert_eq!(parse_rational(&t).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("10/4").unwrap()), "5/2");
        assert_eq!(format_rational(&parse_rational("-4/2").unwrap()), "-2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "1.5", "a/b", "1/0", "1/2/3"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn f64_lift_is_exact() {
        let r = from_f64_exact(0.1).unwrap();
        assert_eq!(to_f64(&r), 0.1);
        assert_ne!(r, rat(1, 10)); // 0.1 is not exactly 1/10 in binary
        assert_eq!(from_f64_exact(0.25).unwrap(), rat(1, 4));
        assert!(from_f64_exact(f64::NAN).is_err());
    }
}
