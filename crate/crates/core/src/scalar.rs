//! The numeric abstraction every set operation is written against.
//!
//! Endpoints, affine coefficients and grid coordinates are all `Scalar`s.
//! Binary floats (`f32`, `f64`) give speed; `Rational64` and `BigRational`
//! give exact answers for the dyadic and small-denominator values that show
//! up in the built-in examples.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use serde_json::Value;

pub trait Scalar:
    Clone
    + PartialOrd
    + Debug
    + Display
    + FromStr
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `num / den` computed in this scalar type.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer fits scalar") / Self::from_i64(den).expect("integer fits scalar")
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer fits scalar")
    }

    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count fits scalar")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Lossy view used for timing-insensitive diagnostics only.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    /// Parses `"3"`, `"-0.125"`, `"1e-9"` and `"3/2"`.
    fn parse_scalar(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.is_empty() {
            return None;
        }
        if let Some((num, den)) = text.split_once('/') {
            let num = Self::parse_scalar(num)?;
            let den = Self::parse_scalar(den)?;
            if den.is_zero() {
                return None;
            }
            return Some(num / den);
        }
        if let Ok(v) = text.parse::<Self>() {
            return v.is_finite_value().then_some(v);
        }
        parse_decimal(text)
    }

    fn to_json(&self) -> Value;

    fn from_json(value: &Value) -> Option<Self> {
        match value {
            Value::Number(n) => Self::parse_scalar(&n.to_string()),
            Value::String(s) => Self::parse_scalar(s),
            _ => None,
        }
    }
}

/// Exact decimal/scientific parse through integer arithmetic in `T`.
fn parse_decimal<T: Scalar>(text: &str) -> Option<T> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let ten = T::from_int(10);
    let mut value = T::zero();
    for c in int_part.chars().chain(frac_part.chars()) {
        value = value * ten.clone() + T::from_int(c.to_digit(10)? as i64);
    }
    let shift = exponent - frac_part.len() as i32;
    for _ in 0..shift.unsigned_abs() {
        value = if shift > 0 { value * ten.clone() } else { value / ten.clone() };
    }
    Some(if negative { -value } else { value })
}

impl Scalar for f64 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self).map(Value::Number).unwrap_or(Value::Null)
    }
}

impl Scalar for f32 {
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_json(&self) -> Value {
        // Display gives the shortest text that parses back to the same f32.
        Value::String(self.to_string())
    }
}

fn ratio_json<I>(r: &Ratio<I>) -> Value
where
    Ratio<I>: Display,
{
    Value::String(r.to_string())
}

impl Scalar for Rational64 {
    fn to_json(&self) -> Value {
        ratio_json(self)
    }
}

impl Scalar for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_json(&self) -> Value {
        ratio_json(self)
    }
}

/// `max` for partially ordered scalars; the first argument wins ties.
pub fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

pub fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub fn parse_list<T: Scalar>(text: &str) -> Option<Vec<T>> {
    text.split(',').map(T::parse_scalar).collect()
}

pub fn format_point<T: Scalar>(point: &[T]) -> String {
    let parts: Vec<String> = point.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}
