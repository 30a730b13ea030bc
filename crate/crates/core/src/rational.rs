//! Exact arithmetic for weights, biases and rewards.
//!
//! Every quantity in the planning model is an arbitrary-precision fraction.
//! [`Rational`] is always normalized (lowest terms, positive denominator) by
//! the underlying `num-rational` implementation, so structural equality is
//! numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

pub type Rational = BigRational;

/// Builds `numer / denom`. Panics on a zero denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` into an exact fraction.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer = BigInt::from_str(numer).ok()?;
    let denom = BigInt::from_str(denom).ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}

pub fn is_positive(value: &Rational) -> bool {
    value.is_positive()
}

pub fn in_unit_interval(beta: &Rational) -> bool {
    beta.is_positive() && *beta <= Rational::one()
}

/// A path cost that may be unbounded (target unreachable).
///
/// `Finite` orders before `Infinite`, so `min` over costs behaves like a
/// minimum over the extended reals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(Rational),
    Infinite,
}

impl Cost {
    pub fn zero() -> Self {
        Cost::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Cost::Finite(value) => Some(value),
            Cost::Infinite => None,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Cost {
        match self {
            Cost::Finite(value) => Cost::Finite(value * factor),
            Cost::Infinite => Cost::Infinite,
        }
    }

    /// Compares against a finite bound; `Infinite` exceeds everything.
    pub fn exceeds(&self, bound: &Rational) -> bool {
        match self {
            Cost::Finite(value) => value.cmp(bound) == Ordering::Greater,
            Cost::Infinite => true,
        }
    }
}

impl Add<&Rational> for &Cost {
    type Output = Cost;

    fn add(self, rhs: &Rational) -> Cost {
        match self {
            Cost::Finite(value) => Cost::Finite(value + rhs),
            Cost::Infinite => Cost::Infinite,
        }
    }
}

impl Add<&Cost> for &Cost {
    type Output = Cost;

    fn add(self, rhs: &Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl From<Rational> for Cost {
    fn from(value: Rational) -> Self {
        Cost::Finite(value)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(value) => f.write_str(&format_rational(value)),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
