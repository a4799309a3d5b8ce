//! The p-length functionals and the min/max selector.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent p ∈ ℤ≥0 ∪ {∞} selecting the length functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtExponent {
    Finite(u32),
    Infinity,
}

/// Which extremum to take over the factorization set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Min,
    Max,
}

impl ExtExponent {
    /// Contribution of a single coordinate with value `z`.
    ///
    /// `0^0` is taken to be 0 so that the 0-length counts distinct atoms.
    pub fn term(self, z: u64) -> Result<u128> {
        match self {
            ExtExponent::Infinity => Ok(z as u128),
            ExtExponent::Finite(0) => Ok(u128::from(z != 0)),
            ExtExponent::Finite(p) => (z as u128)
                .checked_pow(p)
                .ok_or(Error::Overflow("coordinate power")),
        }
    }

    /// Folds one coordinate's contribution into an accumulated length.
    pub fn combine(self, acc: u128, term: u128) -> Result<u128> {
        match self {
            ExtExponent::Infinity => Ok(acc.max(term)),
            ExtExponent::Finite(_) => acc
                .checked_add(term)
                .ok_or(Error::Overflow("length sum")),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtExponent::Infinity)
    }
}

/// p-length of an exponent vector (multiplicities of distinct atoms).
pub fn plength(z: &[u64], p: ExtExponent) -> Result<u128> {
    z.iter()
        .try_fold(0u128, |acc, &zi| p.combine(acc, p.term(zi)?))
}

impl Mode {
    pub fn better(self, candidate: u128, incumbent: u128) -> bool {
        match self {
            Mode::Min => candidate < incumbent,
            Mode::Max => candidate > incumbent,
        }
    }
}

impl fmt::Display for ExtExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtExponent::Finite(p) => write!(f, "{p}"),
            ExtExponent::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtExponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(ExtExponent::Infinity),
            other => other
                .parse::<u32>()
                .map(ExtExponent::Finite)
                .map_err(|_| Error::InvalidArgument(format!("bad exponent {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Min => "min",
            Mode::Max => "max",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "min" => Ok(Mode::Min),
            "max" => Ok(Mode::Max),
            other => Err(Error::InvalidArgument(format!("bad mode {other:?}"))),
        }
    }
}

// JSON: finite exponents as numbers, infinity as the string "inf".
impl Serialize for ExtExponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtExponent::Finite(p) => serializer.serialize_u32(*p),
            ExtExponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtExponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExpVisitor;
        impl Visitor<'_> for ExpVisitor {
            type Value = ExtExponent;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtExponent, E> {
                u32::try_from(v)
                    .map(ExtExponent::Finite)
                    .map_err(|_| E::custom("exponent too large"))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtExponent, E> {
                u32::try_from(v)
                    .map(ExtExponent::Finite)
                    .map_err(|_| E::custom("exponent must be nonnegative"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtExponent, E> {
                v.parse().map_err(E::custom)
            }
        }
        deserializer.deserialize_any(ExpVisitor)
    }
}
