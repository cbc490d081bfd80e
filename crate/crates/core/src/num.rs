//! Exact rational helpers and the text formats used for reals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::Numerical(format!("non-finite value {x}")))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerator/denominator pairs: divide in floating point piecewise
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `p/q`, an integer, or a decimal literal (`-0.125`, `1e-3`) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Config(format!("cannot parse '{s}' as a number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Config(format!("zero denominator in '{s}'")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
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
    let all: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
    let mut value = Rational::new(all, BigInt::from(10).pow(frac.len() as u32));
    let ten = int(10);
    if exponent >= 0 {
        value *= num_traits::pow(ten, exponent as usize);
    } else {
        value /= num_traits::pow(ten, (-exponent) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// `p/q` (or `p` for integers), the lossless exact-mode serialization.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Twelve significant digits with trailing zeros trimmed, `%.12g` style.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{:.11e}", x);
        let (m, e) = s.split_once('e').expect("exponent");
        return format!("{}e{}", trim_zeros(m), e);
    }
    let decimals = (11 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().map(|v| v.abs()).max().unwrap_or_else(zero)
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = NumberLit::deserialize(d)?;
        v.to_rational().map_err(serde::de::Error::custom)
    }

    /// Accepts either a quoted exact literal or a bare TOML number.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum NumberLit {
        Text(String),
        Int(i64),
        Float(f64),
    }

    impl NumberLit {
        pub(crate) fn to_rational(&self) -> Result<Rational> {
            match self {
                NumberLit::Text(s) => parse_rational(s),
                NumberLit::Int(i) => Ok(int(*i)),
                // shortest round-trip decimal, so 0.3 reads as 3/10
                NumberLit::Float(f) => parse_rational(&format!("{f:e}")),
            }
        }
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<super::serde_rational::NumberLit>::deserialize(d)?;
        v.iter()
            .map(|n| n.to_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_rational_matrix {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let r: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&r)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let v = Vec::<Vec<super::serde_rational::NumberLit>>::deserialize(d)?;
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|n| n.to_rational().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
