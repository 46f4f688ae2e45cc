//! Exact rational numbers: parsing, `p/q` rendering and decimal formatting.
//!
//! Every capacity and bandwidth in this crate is a [`Rational`]. Floating point
//! only appears when a value is rendered for humans or CSV consumers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_usize(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `2^-exp`, the usual shape of a bisection tolerance.
pub fn pow2_inv(exp: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << exp as usize)
}

/// Parses `"p/q"`, an integer, or a base-10 decimal (`"1.25"`, `"-3e-2"`).
/// Decimals are converted exactly; `"0.1"` is `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut value = Rational::from_integer(BigInt::from_str(&joined).map_err(|_| bad())?);
    let scale = exponent - frac.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Renders as `p/q`, always with an explicit denominator (`4/1`).
pub fn to_fraction(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// `%.{sig}g`-style rendering computed exactly from the rational, with
/// round-half-away-from-zero on the last digit.
pub fn to_significant(value: &Rational, sig: usize) -> String {
    assert!(sig >= 1);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    let ten = BigInt::from(10);

    let mut exp = decimal_digits(magnitude.numer()) as i64 - decimal_digits(magnitude.denom()) as i64;
    while magnitude < pow10(exp) {
        exp -= 1;
    }
    while magnitude >= pow10(exp + 1) {
        exp += 1;
    }

    let scaled = &magnitude * pow10(sig as i64 - 1 - exp);
    let mut mantissa = round_half_away(&scaled);
    if mantissa == num_traits::pow(ten.clone(), sig) {
        mantissa /= &ten;
        exp += 1;
    }
    let digits = mantissa.to_string();
    debug_assert_eq!(digits.len(), sig);

    let body = if exp < -5 || exp >= sig as i64 {
        let (lead, rest) = digits.split_at(1);
        let rest = rest.trim_end_matches('0');
        let sign = if exp < 0 { '-' } else { '+' };
        if rest.is_empty() {
            format!("{lead}e{sign}{:02}", exp.abs())
        } else {
            format!("{lead}.{rest}e{sign}{:02}", exp.abs())
        }
    } else if exp >= 0 {
        let point = exp as usize + 1;
        let (int_part, frac_part) = digits.split_at(point);
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.is_empty() {
            int_part.to_string()
        } else {
            format!("{int_part}.{frac_part}")
        }
    } else {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("0.{zeros}{}", digits.trim_end_matches('0'))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal for terminal output: twelve significant digits and always a
/// fractional part (`4.0`, `48.9393939394`).
pub fn to_display_decimal(value: &Rational) -> String {
    let text = to_significant(value, 12);
    if text.contains(['.', 'e']) {
        text
    } else {
        format!("{text}.0")
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

fn decimal_digits(value: &BigInt) -> usize {
    value.magnitude().to_string().len()
}

fn pow10(exp: i64) -> Rational {
    let ten = BigInt::from(10);
    if exp >= 0 {
        Rational::from_integer(num_traits::pow(ten, exp as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(ten, (-exp) as usize))
    }
}

fn round_half_away(value: &Rational) -> BigInt {
    let (q, r) = value.numer().div_rem(value.denom());
    let twice = r.abs() * 2u32;
    if twice >= *value.denom() {
        q + if value.is_negative() { -1 } else { 1 }
    } else {
        q
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_fraction {
    use super::{parse_rational, to_fraction, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&to_fraction(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
