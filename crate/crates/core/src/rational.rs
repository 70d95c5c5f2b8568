//! Exact rational scalars and the handful of conversions the rest of the
//! crate needs: string round-tripping for JSON, and accurate natural
//! logarithms of rationals whose numerator or denominator overflow `f64`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number used for every exact value.
pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`, rejecting zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((_, den)) = s.split_once('/') {
        if BigInt::from_str(den.trim()).map(|d| d.is_zero()).unwrap_or(false) {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
    }
    Rational::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Canonical text form: reduced `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Only reachable when the quotient itself overflows.
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "ln of nonpositive integer");
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("fits").ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural logarithm of a rational; `-inf` for zero. Panics on negatives.
pub fn ln_rational(r: &Rational) -> f64 {
    assert!(!r.is_negative(), "ln of negative rational");
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    let delta = r - Rational::one();
    if delta.abs() < rat(1, 2) {
        return to_f64(&delta).ln_1p();
    }
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

/// Serde adapters storing rationals as exact strings.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| parse_rational(&s).map_err(D::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational(" -2 ").unwrap(), int(-2));
        assert_eq!(format_rational(&rat(3, 4)), "3/4");
        assert_eq!(format_rational(&int(1)), "1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn logs_of_large_rationals() {
        // 2^200 / 3^100
        let num = BigInt::from(2).pow(200);
        let den = BigInt::from(3).pow(100);
        let r = Rational::new(num, den);
        let expected = 200.0 * 2f64.ln() - 100.0 * 3f64.ln();
        assert!((ln_rational(&r) - expected).abs() < 1e-10);
        assert!((ln_rational(&rat(3, 32)) - (3.0f64 / 32.0).ln()).abs() < 1e-15);
        assert_eq!(ln_rational(&int(0)), f64::NEG_INFINITY);
        let near_one = rat(1_000_000_001, 1_000_000_000);
        assert!((ln_rational(&near_one) - 1e-9f64.ln_1p()).abs() < 1e-24);
    }
}
