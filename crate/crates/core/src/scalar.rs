//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Everything in the series and continued-fraction layers is written against
//! [`Scalar`], so the same algorithms run over arbitrary-precision rationals
//! (the default, see [`Rational`](crate::Rational)) and over `f64`.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A field element the series machinery can compute with.
///
/// Division is assumed to be exact for rational implementors; for floating
/// point it is ordinary rounding division.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Num
    + Signed
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
{
    /// Lossy conversion used by the numeric (spectral) layer.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every scalar type represents small integers")
    }
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + PartialOrd
        + Debug
        + Display
        + Num
        + Signed
        + Neg<Output = T>
        + FromPrimitive
        + ToPrimitive
{
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {text:?}: {reason}")]
pub struct RationalParseError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `p` or `p/q` (optional leading sign, `q > 0`) into a canonical rational.
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let err = |reason| RationalParseError {
        text: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let num = BigInt::from_str(num).map_err(|_| err("numerator is not an integer"))?;
    let den = match den {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(err("denominator must be an unsigned integer"));
            }
            BigInt::from_str(d).map_err(|_| err("denominator is not an integer"))?
        }
        None => BigInt::from(1),
    };
    if den == BigInt::from(0) {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical `p/q` text, or `p` when the value is an integer.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
