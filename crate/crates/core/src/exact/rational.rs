//! Scalar helpers for arbitrary-precision rationals.
//!
//! [`Rational`] is always kept in lowest terms with a positive denominator;
//! every arithmetic operation renormalizes.

use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ints(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num::pow(base.clone(), exp as usize)
}

/// `"num/den"`, the serialized form used in all JSON output.
pub fn to_fraction_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `"a/b"`, `"a"` or a plain decimal like `"-0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Ok(if negative { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Decimal expansion with `digits` significant digits, rounded half away from zero.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let negative = q.is_negative();
    let a = q.abs();
    let ten = BigInt::from(10);
    // 10^e <= a < 10^(e+1)
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let tenq = Rational::from_integer(ten.clone());
    let p10 = |k: i64| -> Rational {
        if k >= 0 {
            num::pow(tenq.clone(), k as usize)
        } else {
            num::pow(tenq.clone(), (-k) as usize).recip()
        }
    };
    while a < p10(e) {
        e -= 1;
    }
    while a >= p10(e + 1) {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * p10(shift);
    let (quot, rem) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = quot;
    if rem * BigInt::from(2) >= *scaled.denom() {
        mantissa += BigInt::one();
    }
    if mantissa >= num::pow(ten.clone(), digits) {
        mantissa /= &ten;
        e += 1;
    }
    let s = mantissa.to_string();
    let body = if e >= digits as i64 - 1 {
        format!("{}{}", s, "0".repeat((e - digits as i64 + 1) as usize))
    } else if e < 0 {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), s)
    } else {
        let split = (e + 1) as usize;
        format!("{}.{}", &s[..split], &s[split..])
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Nearest rational with denominator `den`.
pub(crate) fn round_f64(x: f64, den: i64) -> Rational {
    rat((x * den as f64).round() as i64, den)
}

/// `serde(with = ...)` adapters writing rationals as `"num/den"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&to_fraction_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(to_fraction_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rational_rows {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(
            rows.iter()
                .map(|r| r.iter().map(to_fraction_string).collect::<Vec<_>>()),
        )
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
