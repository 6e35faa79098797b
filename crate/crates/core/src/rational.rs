//! Exact rationals over `i64` with checked arithmetic.
//!
//! Values are always stored in lowest terms with a positive denominator, so
//! derived `PartialEq`/`Hash` are semantic equality. Every arithmetic
//! operation is checked; overflow surfaces as [`Error::Overflow`].

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));

    /// Builds `numer / denom` in lowest terms.
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        // Ratio::new negates both parts for a negative denominator, which
        // would overflow on i64::MIN.
        if denom == i64::MIN || (denom < 0 && numer == i64::MIN) {
            return Err(Error::Overflow("rational normalization"));
        }
        Ok(Rational(Ratio::new(numer, denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.0
            .checked_add(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational addition"))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.0
            .checked_sub(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational subtraction"))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.0
            .checked_mul(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational multiplication"))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        self.0
            .checked_div(&rhs.0)
            .map(Rational)
            .ok_or(Error::Overflow("rational division"))
    }

    pub fn checked_mul_int(&self, rhs: i64) -> Result<Self> {
        self.checked_mul(&Rational::from_integer(rhs))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

/// Always `a/b`, including integers (`-3/1`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse(n)?, parse(d)?),
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
