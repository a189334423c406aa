//! Exact rational helpers: construction shortcuts and the `"num/den"` text form
//! used in every coefficient file.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rational;

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Canonical text form: `"n"` for integers, otherwise `"n/d"` in lowest
/// terms with positive denominator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"n"`, `"n/d"` (optional sign on either part, surrounding spaces
/// allowed). Also accepts a finite decimal such as `"-0.125"` or `"2.5e-4"`,
/// read exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::ParseRational(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Ok(n) = t.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    parse_scientific(t).ok_or_else(bad)
}

fn parse_scientific(t: &str) -> Option<Rational> {
    let Some((mant, exp)) = t.split_once(['e', 'E']) else {
        return parse_decimal(t);
    };
    let exp: i32 = exp.parse().ok()?;
    if exp.unsigned_abs() > 4096 {
        return None;
    }
    let mant = match mant.parse::<BigInt>() {
        Ok(n) => BigRational::from_integer(n),
        Err(_) => parse_decimal(mant)?,
    };
    let scale = BigRational::from_integer(num_traits::pow(
        BigInt::from(10),
        exp.unsigned_abs() as usize,
    ));
    Some(if exp < 0 { mant / scale } else { mant * scale })
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

/// Serde adapters that store rationals as canonical strings.
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational};
        use crate::Rational;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
