use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest prime accepted for a residue field.
pub const MAX_PRIME: u32 = 97;

/// A ground field: the rationals or a small prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// The prime field of order `p`; `p` must be a prime no larger than [`MAX_PRIME`].
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p > MAX_PRIME || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(Error::UnsupportedField(format!("F{p}")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Whether `k[Σ_n]` is semisimple, i.e. the characteristic does not divide `n!`.
    pub fn is_semisimple_for(self, n: usize) -> bool {
        match self {
            Field::Rational => true,
            Field::Prime(p) => (p as usize) > n,
        }
    }

    pub fn ensure_same(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self, right: other })
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = t
            .strip_prefix('F')
            .or_else(|| t.strip_prefix('f'))
            .ok_or_else(|| Error::UnsupportedField(s.to_string()))?;
        if digits.is_empty() || digits.len() > 3 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::UnsupportedField(s.to_string()));
        }
        let p: u32 = digits.parse().map_err(|_| Error::UnsupportedField(s.to_string()))?;
        Field::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_tags() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("F2".parse::<Field>().unwrap(), Field::Prime(2));
        assert_eq!("f3".parse::<Field>().unwrap(), Field::Prime(3));
        assert_eq!("F97".parse::<Field>().unwrap(), Field::Prime(97));
        for bad in ["F4", "F1", "F0", "F101", "F", "R", "F-2", "F+3", "F0002"] {
            assert!(bad.parse::<Field>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        for f in [Field::Rational, Field::Prime(2), Field::Prime(31)] {
            assert_eq!(f.to_string().parse::<Field>().unwrap(), f);
        }
    }
}
