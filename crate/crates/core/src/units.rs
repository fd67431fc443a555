use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A percentage with one decimal place, stored as tenths of a percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent(u32);

impl Percent {
    pub const fn from_tenths(tenths: u32) -> Self {
        Percent(tenths)
    }

    pub const fn tenths(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 10.0
    }

    /// Absolute difference in tenths of a percent.
    pub fn abs_diff(self, other: Percent) -> u32 {
        self.0.abs_diff(other.0)
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0:?} is not a percentage with at most one decimal")]
pub struct ParsePercentError(String);

impl FromStr for Percent {
    type Err = ParsePercentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePercentError(s.to_string());
        let s = s.trim();
        let (int, frac) = s.split_once('.').unwrap_or((s, "0"));
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(int) || !digits(frac) || frac.len() > 1 {
            return Err(err());
        }
        let int: u32 = int.parse().map_err(|_| err())?;
        let frac: u32 = frac.parse().map_err(|_| err())?;
        int.checked_mul(10)
            .and_then(|v| v.checked_add(frac))
            .map(Percent)
            .ok_or_else(err)
    }
}

// Serialized as a JSON number (16.4); the value always has one decimal.
impl Serialize for Percent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_f64())
    }
}

impl<'de> Deserialize<'de> for Percent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        if !(0.0..=u32::MAX as f64 / 10.0).contains(&v) {
            return Err(serde::de::Error::custom("percentage out of range"));
        }
        Ok(Percent((v * 10.0).round() as u32))
    }
}
