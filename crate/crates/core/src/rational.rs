//! Exact rational scalars and the textual forms accepted by model files
//! and the command line: integers, `p/q` fractions and finite decimals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `7`, `-3/4`, `1.25` or `2.5e-3` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Rational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer =
        BigInt::from_str(if joined.is_empty() { "0" } else { &joined }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// `p/q`, or `p` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: fall back on logarithms.
        let sign = if value.is_negative() { -1.0 } else { 1.0 };
        let ln = ln_abs(value);
        sign * ln.exp()
    })
}

/// Natural logarithm of |value| that stays finite for very small or very
/// large rationals (such as 2^-2049).
pub fn ln_abs(value: &Rational) -> f64 {
    ln_bigint(value.numer()) - ln_bigint(value.denom())
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// 2^-k as an exact rational.
pub fn pow2_neg(k: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << k)
}

/// For `#[serde(serialize_with)]` on plain rational fields.
pub fn serialize_exact<S: Serializer>(
    value: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&format_rational(value))
}

/// Serde adapter: a rational written as a JSON number or a `"p/q"` string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Exact(pub Rational);

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl FromStr for Exact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Exact)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let value = match Repr::deserialize(deserializer)? {
            Repr::Int(n) => int(n),
            // Shortest round-trip decimal, so 0.1 reads as 1/10.
            Repr::Float(x) => parse_rational(&x.to_string()).map_err(serde::de::Error::custom)?,
            Repr::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom)?,
        };
        Ok(Exact(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("1.5").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), rat(1, 400));
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1.2.3", "3/x", "-", "."] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn json_forms() {
        let v: Vec<Exact> = serde_json::from_str(r#"[1, 0.1, "3/5", "-2"]"#).unwrap();
        assert_eq!(v[0].0, int(1));
        assert_eq!(v[1].0, rat(1, 10));
        assert_eq!(v[2].0, rat(3, 5));
        assert_eq!(v[3].0, int(-2));
        assert_eq!(serde_json::to_string(&v[2]).unwrap(), r#""3/5""#);
    }

    #[test]
    fn logs_of_tiny_values() {
        let tiny = pow2_neg(2049);
        let expected = -2049.0 * std::f64::consts::LN_2;
        assert!((ln_abs(&tiny) - expected).abs() < 1e-9);
        assert!((ln_abs(&rat(1, 3)) - (1.0f64 / 3.0).ln()).abs() < 1e-12);
    }
}
