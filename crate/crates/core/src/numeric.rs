//! Exact rational and binary64 scalars.
//!
//! Sorgenfrey and double arrow computations stay in [`Rational`] end to end.
//! Niemytzki geometry is written once against [`Field`] and runs either on
//! rationals (when every square root it meets is rational) or on `f64` with
//! the module-wide tolerance [`EPS`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Float-mode tolerance for strict inequalities and case boundaries.
pub const EPS: f64 = 1e-9;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"0.125"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = || Error::ParseRational(s.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_abs = whole.trim_start_matches(['-', '+']);
        let w: BigInt = if whole_abs.is_empty() { BigInt::zero() } else { whole_abs.parse().map_err(|_| err())? };
        let f: BigInt = frac.parse().map_err(|_| err())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rational::new(w * &scale + f, scale);
        return Ok(if negative { -v } else { v });
    }
    let p: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(p))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Square root of a rational when it is itself rational.
pub fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Converts a float to the exact rational it denotes.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// A value in one of the two numeric modes.
///
/// Arithmetic between an exact and a float operand is rejected; callers that
/// need float evaluation promote explicitly with [`Scalar::to_float`].
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero(mode: Mode) -> Scalar {
        match mode {
            Mode::Exact => Scalar::Exact(Rational::zero()),
            Mode::Float => Scalar::Float(0.0),
        }
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => to_f64(q),
            Scalar::Float(v) => *v,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    /// Strictly positive; float values must clear `EPS`.
    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_positive(),
            Scalar::Float(v) => *v > EPS,
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    /// Compares two values. Exact pairs compare exactly; anything involving
    /// a float compares as floats, treating gaps within `slack` as equal.
    pub fn cmp_with_slack(&self, other: &Scalar, slack: f64) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.to_f64(), other.to_f64());
                if (a - b).abs() <= slack {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    /// `self > threshold`, exact when both are exact.
    pub fn gt_exact_or_float(&self, threshold: &Rational) -> bool {
        match self {
            Scalar::Exact(q) => q > threshold,
            Scalar::Float(v) => *v > to_f64(threshold),
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        match (&self, &other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => {
                if b > a {
                    other
                } else {
                    self
                }
            }
            _ => {
                if other.to_f64() > self.to_f64() {
                    other
                } else {
                    self
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => f.write_str(&format_rational(q)),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::Exact(q)
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => s.serialize_str(&format_rational(q)),
            Scalar::Float(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s).map(Scalar::Exact).map_err(serde::de::Error::custom),
            Raw::Number(v) => Ok(Scalar::Float(v)),
        }
    }
}

/// Serde adapter for plain `Rational` fields written as `"p/q"` strings.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Ordered field used by the Niemytzki geometry kernel.
///
/// `lt` is strict with an `EPS` margin in float mode, `le` allows `EPS` slack.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    fn abs(&self) -> Self;
    fn sqrt(&self) -> Option<Self>;
    fn lt_strict(&self, other: &Self) -> bool;
    fn le_slack(&self, other: &Self) -> bool;
    fn same(&self, other: &Self) -> bool;
    fn into_scalar(self) -> Scalar;
    /// Strict `sqrt(d2) < r` for `r >= 0`.
    fn dist_lt(d2: &Self, r: &Self) -> bool;
    /// `sqrt(d2) <= r` for `r >= 0`.
    fn dist_le(d2: &Self, r: &Self) -> bool;
}

impl Field for Rational {
    fn from_int(n: i64) -> Self {
        int(n)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn sqrt(&self) -> Option<Self> {
        exact_sqrt(self)
    }
    fn lt_strict(&self, other: &Self) -> bool {
        self < other
    }
    fn le_slack(&self, other: &Self) -> bool {
        self <= other
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Exact(self)
    }
    fn dist_lt(d2: &Self, r: &Self) -> bool {
        d2 < &(r * r)
    }
    fn dist_le(d2: &Self, r: &Self) -> bool {
        d2 <= &(r * r)
    }
}

impl Field for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(q: &Rational) -> Self {
        to_f64(q)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Option<Self> {
        Some(f64::sqrt(self.max(0.0)))
    }
    fn lt_strict(&self, other: &Self) -> bool {
        *self < *other - EPS
    }
    fn le_slack(&self, other: &Self) -> bool {
        *self <= *other + EPS
    }
    fn same(&self, other: &Self) -> bool {
        (*self - *other).abs() <= EPS
    }
    fn into_scalar(self) -> Scalar {
        Scalar::Float(self)
    }
    fn dist_lt(d2: &Self, r: &Self) -> bool {
        d2.max(0.0).sqrt() < *r - EPS
    }
    fn dist_le(d2: &Self, r: &Self) -> bool {
        d2.max(0.0).sqrt() <= *r + EPS
    }
}
