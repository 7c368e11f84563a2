//! Exact rational helpers shared by the model and the polytope code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Ratio = num_rational::BigRational;

/// Decimal digits kept when a float enters the exact layer.
pub const FLOAT_ENTRY_DIGITS: u32 = 12;

pub fn ratio(numer: i64, denom: i64) -> Ratio {
    Ratio::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Ratio {
    Ratio::from_integer(BigInt::from(n))
}

pub fn half() -> Ratio {
    ratio(1, 2)
}

pub fn to_f64(r: &Ratio) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Converts a float by rounding it to the nearest multiple of `10^-digits`.
pub fn from_f64(x: f64, digits: u32) -> Result<Ratio> {
    if !x.is_finite() {
        return Err(Error::invalid(format!("non-finite value {x}")));
    }
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = Ratio::from_float(x)
        .ok_or_else(|| Error::invalid(format!("cannot convert {x}")))?
        * Ratio::from_integer(scale.clone());
    Ok(Ratio::new(scaled.round().to_integer(), scale))
}

/// Parses `"p/q"`, integers, and plain or exponent decimals (`"0.050"`, `"5e-2"`) exactly.
pub fn parse_ratio(text: &str) -> Result<Ratio> {
    let s = text.trim();
    let bad = || Error::invalid(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}").parse().unwrap_or_else(|_| BigInt::zero());
    let mut value = Ratio::new(all, BigInt::from(10u32).pow(frac.len() as u32));
    let ten = Ratio::from_integer(BigInt::from(10u32));
    if exponent >= 0 {
        value *= num_traits::pow(ten, exponent as usize);
    } else {
        value /= num_traits::pow(ten, exponent.unsigned_abs() as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Renders as `"p/q"` or `"p"` for integers.
pub fn format_ratio(r: &Ratio) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Ratio>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_probability(r: &Ratio) -> bool {
    !r.is_negative() && r <= &Ratio::one()
}

pub(crate) mod serde_ratio {
    use super::{format_ratio, Ratio};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(r: &Ratio, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(r))
    }
}
