//! Scalar regimes.
//!
//! Everything numeric in the crate is generic over [`Scalar`]. Two regimes are
//! used in practice: exact arbitrary-precision rationals ([`Rational`]) for
//! covers and reductions, and binary floats (`f64`, `f32`) for clustering.
//! Code that needs square roots or eigen-decompositions asks for
//! [`RealScalar`], which only the float types implement, so the two regimes
//! cannot be mixed by accident inside the library. At the file boundary the
//! mode is dynamic; [`ScalarValue`] carries it and refuses mixed arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Rational,
    Float,
}

impl ScalarMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarMode::Rational => "rational",
            ScalarMode::Float => "float",
        }
    }
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(ScalarMode::Rational),
            "float" => Ok(ScalarMode::Float),
            other => Err(Error::Parse(format!("unknown scalar mode {other:?}"))),
        }
    }
}

/// Numeric type usable for coordinates, distances and costs.
pub trait Scalar:
    Num + Signed + FromPrimitive + ToPrimitive + Clone + PartialOrd + fmt::Debug + Send + Sync + 'static
{
    const MODE: ScalarMode;

    fn from_biguint(value: &BigUint) -> Self;

    /// Equality up to `rel` relative tolerance (floats) or exact equality.
    fn approx_eq(&self, other: &Self, rel: f64) -> bool;

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Result<Self>;

    fn to_value(&self) -> ScalarValue;
}

/// Float scalars: everything needing `sqrt` and spectral decompositions.
pub trait RealScalar: Scalar + num_traits::Float {
    fn epsilon_f64() -> f64;
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const MODE: ScalarMode = ScalarMode::Float;

            fn from_biguint(value: &BigUint) -> Self {
                value.to_f64().map(|v| v as $t).unwrap_or(<$t>::INFINITY)
            }

            fn approx_eq(&self, other: &Self, rel: f64) -> bool {
                let scale = self.abs().max(other.abs()).max(1.0);
                ((self - other).abs() as f64) <= rel * scale as f64
            }

            fn to_json(&self) -> Value {
                float_json(*self as f64)
            }

            fn to_value(&self) -> ScalarValue {
                ScalarValue::Float(*self as f64)
            }

            fn from_json(value: &Value) -> Result<Self> {
                match value {
                    Value::Number(n) => n
                        .as_f64()
                        .map(|v| v as $t)
                        .ok_or_else(|| Error::Parse(format!("bad float {n}"))),
                    Value::String(s) => s
                        .trim()
                        .parse::<$t>()
                        .map_err(|_| Error::Parse(format!("bad float {s:?}"))),
                    other => Err(Error::Parse(format!("expected float, got {other}"))),
                }
            }
        }

        impl RealScalar for $t {
            fn epsilon_f64() -> f64 {
                <$t>::EPSILON as f64
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

impl Scalar for Rational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_biguint(value: &BigUint) -> Self {
        Rational::from_integer(BigInt::from(value.clone()))
    }

    fn approx_eq(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn to_value(&self) -> ScalarValue {
        ScalarValue::Rational(self.clone())
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => parse_rational(&n.to_string()),
            other => Err(Error::Parse(format!("expected rational, got {other}"))),
        }
    }
}

/// Floats are written with 17 significant digits so output is byte-stable.
pub fn float_json(v: f64) -> Value {
    if !v.is_finite() {
        return Value::String(format!("{v}"));
    }
    let text = format!("{v:.16e}");
    serde_json::from_str::<serde_json::Number>(&text)
        .map(Value::Number)
        .unwrap_or_else(|_| Value::String(text))
}

/// `num/den` in lowest terms, den omitted when 1.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Accepts `a`, `a/b`, and finite decimals such as `-1.25` or `3e2`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("bad rational {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(s) {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exp - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A scalar whose mode is only known at run time (file boundary).
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Rational(Rational),
    Float(f64),
}

impl ScalarValue {
    pub fn mode(&self) -> ScalarMode {
        match self {
            ScalarValue::Rational(_) => ScalarMode::Rational,
            ScalarValue::Float(_) => ScalarMode::Float,
        }
    }

    fn zip<F, G>(&self, other: &Self, exact: F, float: G) -> Result<Self>
    where
        F: Fn(&Rational, &Rational) -> Rational,
        G: Fn(f64, f64) -> f64,
    {
        match (self, other) {
            (ScalarValue::Rational(a), ScalarValue::Rational(b)) => Ok(ScalarValue::Rational(exact(a, b))),
            (ScalarValue::Float(a), ScalarValue::Float(b)) => Ok(ScalarValue::Float(float(*a, *b))),
            _ => Err(Error::ModeMismatch { expected: self.mode(), found: other.mode() }),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b, |a, b| a * b)
    }

    pub fn checked_cmp(&self, other: &Self) -> Result<std::cmp::Ordering> {
        match (self, other) {
            (ScalarValue::Rational(a), ScalarValue::Rational(b)) => Ok(a.cmp(b)),
            (ScalarValue::Float(a), ScalarValue::Float(b)) => {
                a.partial_cmp(b).ok_or_else(|| Error::Parse("NaN comparison".into()))
            }
            _ => Err(Error::ModeMismatch { expected: self.mode(), found: other.mode() }),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ScalarValue::Rational(q) => q.to_json(),
            ScalarValue::Float(v) => float_json(*v),
        }
    }

    pub fn parse(text: &str, mode: ScalarMode) -> Result<Self> {
        match mode {
            ScalarMode::Rational => parse_rational(text).map(ScalarValue::Rational),
            ScalarMode::Float => text
                .trim()
                .parse::<f64>()
                .map(ScalarValue::Float)
                .map_err(|_| Error::Parse(format!("bad float {text:?}"))),
        }
    }
}

impl fmt::Display for ScalarValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarValue::Rational(q) => f.write_str(&format_rational(q)),
            ScalarValue::Float(v) => write!(f, "{v:.16e}"),
        }
    }
}

impl From<f64> for ScalarValue {
    fn from(v: f64) -> Self {
        ScalarValue::Float(v)
    }
}

impl From<Rational> for ScalarValue {
    fn from(q: Rational) -> Self {
        ScalarValue::Rational(q)
    }
}
