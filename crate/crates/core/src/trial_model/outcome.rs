use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measurement setting at detector 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Setting1 {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "a'")]
    APrime,
}

/// Measurement setting at detector 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Setting2 {
    #[serde(rename = "b")]
    B,
    #[serde(rename = "b'")]
    BPrime,
}

/// A single detector result: a click (`+`) or no click (`0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Detection {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "0")]
    Zero,
}

impl Setting1 {
    pub const ALL: [Setting1; 2] = [Setting1::A, Setting1::APrime];

    pub fn token(self) -> &'static str {
        match self {
            Setting1::A => "a",
            Setting1::APrime => "a'",
        }
    }
}

impl Setting2 {
    pub const ALL: [Setting2; 2] = [Setting2::B, Setting2::BPrime];

    pub fn token(self) -> &'static str {
        match self {
            Setting2::B => "b",
            Setting2::BPrime => "b'",
        }
    }
}

impl Detection {
    pub const ALL: [Detection; 2] = [Detection::Plus, Detection::Zero];

    pub fn token(self) -> &'static str {
        match self {
            Detection::Plus => "+",
            Detection::Zero => "0",
        }
    }
}

impl FromStr for Setting1 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Setting1::A),
            "a'" | "a′" => Ok(Setting1::APrime),
            _ => Err(Error::invalid(format!("unknown setting-1 token {s:?}"))),
        }
    }
}

impl FromStr for Setting2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b" => Ok(Setting2::B),
            "b'" | "b′" => Ok(Setting2::BPrime),
            _ => Err(Error::invalid(format!("unknown setting-2 token {s:?}"))),
        }
    }
}

impl FromStr for Detection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Detection::Plus),
            "0" => Ok(Detection::Zero),
            _ => Err(Error::invalid(format!("unknown result token {s:?}"))),
        }
    }
}

/// One of the sixteen joint outcomes of a trial.
///
/// The canonical index runs over setting pairs `ab, ab', a'b, a'b'` (outer) and
/// result pairs `++, +0, 0+, 00` (inner), so `++ab` is 0 and `00a'b'` is 15.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(u8);

impl Outcome {
    pub const COUNT: usize = 16;

    pub fn new(result1: Detection, result2: Detection, setting1: Setting1, setting2: Setting2) -> Self {
        let settings = (setting1 as u8) * 2 + setting2 as u8;
        let results = (result1 as u8) * 2 + result2 as u8;
        Outcome(settings * 4 + results)
    }

    pub fn from_index(index: usize) -> Option<Self> {
        (index < Self::COUNT).then_some(Outcome(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..Self::COUNT as u8).map(Outcome)
    }

    /// The twelve outcomes where at least one detector clicked.
    pub fn non00() -> impl Iterator<Item = Outcome> {
        Self::all().filter(|o| !o.is_00())
    }

    pub fn setting1(self) -> Setting1 {
        Setting1::ALL[(self.0 / 8) as usize]
    }

    pub fn setting2(self) -> Setting2 {
        Setting2::ALL[((self.0 / 4) % 2) as usize]
    }

    pub fn result1(self) -> Detection {
        Detection::ALL[((self.0 % 4) / 2) as usize]
    }

    pub fn result2(self) -> Detection {
        Detection::ALL[(self.0 % 2) as usize]
    }

    pub fn is_00(self) -> bool {
        self.0 % 4 == 3
    }

    /// Canonical ASCII name such as `"+0a'b"`.
    pub fn name(self) -> String {
        format!(
            "{}{}{}{}",
            self.result1().token(),
            self.result2().token(),
            self.setting1().token(),
            self.setting2().token()
        )
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.trim().replace('′', "'");
        Outcome::all()
            .find(|o| o.name() == normalized)
            .ok_or_else(|| Error::invalid(format!("unknown outcome {s:?}")))
    }
}

/// Shorthand used by tests and tables: `out("0+a'b")`.
///
/// # Panics
/// Panics on an unknown name.
pub fn out(name: &str) -> Outcome {
    name.parse().unwrap_or_else(|e| panic!("{e}"))
}
