//! Exact rational arithmetic helpers.
//!
//! Error rates, probability masses, and average degrees are computed
//! exactly as big rationals; floats only appear at reporting boundaries.
//! Serialized form is the canonical string `"p/q"` (reduced, positive
//! denominator) or `"p"` when the denominator is one.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Exact rational number.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational value of a finite `f64` (every finite float is dyadic).
pub fn rat_from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| {
        Error::InvalidParameter("non-finite float cannot become a rational".into())
    })
}

/// Nearest `f64` to a rational, for reporting only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Canonical string form: `"p/q"` reduced with positive denominator,
/// or just `"p"` for integers.
pub fn rat_to_string(r: &Rat) -> String {
    let mut s = String::new();
    if r.denom().is_one() {
        let _ = write!(s, "{}", r.numer());
    } else {
        let _ = write!(s, "{}/{}", r.numer(), r.denom());
    }
    s
}

/// Parses `"p"`, `"p/q"`, or a plain decimal such as `"0.125"` into an
/// exact rational. Decimal input is converted exactly (scaled by a power
/// of ten); whether that matches the caller's intent is the caller's
/// concern to warn about.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(alloc::format!("cannot parse rational from {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.trim_start().starts_with('-');
        let int_val: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_val: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let magnitude = int_val.abs() * &scale + frac_val;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rat::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rat::from_integer(n))
}

/// True when the string form is not an exact representation of the input
/// text, i.e. the caller passed a decimal that we converted by scaling.
/// Used by the CLI to warn about decimal epsilon input.
pub fn is_decimal_form(s: &str) -> bool {
    s.contains('.')
}

/// Serde adapter: a single `Rat` as its canonical string.
pub mod rat_serde {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rat, serializer: S) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&rat_to_string(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rat(&s).map_err(|e| de::Error::custom(e.to_string()))
    }
}

/// Serde adapter: a `Vec<Rat>` as a sequence of canonical strings.
pub mod rat_vec_serde {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &[Rat], serializer: S) -> core::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(value.len()))?;
        for r in value {
            seq.serialize_element(&rat_to_string(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> core::result::Result<Vec<Rat>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(deserializer)?;
        raw.iter()
            .map(|s| parse_rat(s).map_err(|e| de::Error::custom(e.to_string())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        let half = rat(1, 2);
        assert_eq!(rat_to_string(&half), "1/2");
        assert_eq!(parse_rat("1/2").unwrap(), half);
        assert_eq!(parse_rat("3").unwrap(), rat_int(3));
        assert_eq!(rat_to_string(&rat_int(-4)), "-4");
        assert_eq!(parse_rat("-4").unwrap(), rat_int(-4));
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(parse_rat("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rat("-0.5").unwrap(), rat(-1, 2));
        assert_eq!(parse_rat("2.25").unwrap(), rat(9, 4));
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a.b").is_err());
    }

    #[test]
    fn float_conversion_is_exact_for_dyadics() {
        assert_eq!(rat_from_f64(0.25).unwrap(), rat(1, 4));
        assert_eq!(rat_to_f64(&rat(3, 4)), 0.75);
        assert!(rat_from_f64(f64::NAN).is_err());
    }

    #[test]
    fn normalizes_sign_and_gcd() {
        let r = Rat::new(BigInt::from(2), BigInt::from(-4));
        assert_eq!(rat_to_string(&r), "-1/2");
    }
}
