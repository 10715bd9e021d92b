use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Side of the debate a user or community supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Yes,
    No,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Yes => "yes",
            Side::No => "no",
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Yes => Side::No,
            Side::No => Side::Yes,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "yes" => Ok(Side::Yes),
            "no" => Ok(Side::No),
            other => Err(format!("unknown label {other:?} (expected yes or no)")),
        }
    }
}

/// Formats an optional side the way artifact files spell it.
pub fn side_label(side: Option<Side>) -> &'static str {
    side.map_or("unknown", Side::as_str)
}

pub fn parse_side_label(s: &str) -> Result<Option<Side>, String> {
    match s.trim() {
        "unknown" | "unlabeled" | "" => Ok(None),
        other => other.parse().map(Some),
    }
}

/// Sign class of a user's mean outgoing sentiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Unknown,
    Positive,
    Negative,
}

impl Polarity {
    pub const ALL: [Polarity; 3] = [Polarity::Unknown, Polarity::Positive, Polarity::Negative];

    pub fn from_mean(mean: Option<f64>) -> Polarity {
        match mean {
            Some(m) if m > 0.0 => Polarity::Positive,
            Some(m) if m < 0.0 => Polarity::Negative,
            _ => Polarity::Unknown,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Polarity::Unknown => 0,
            Polarity::Positive => 1,
            Polarity::Negative => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Polarity::Unknown => 'u',
            Polarity::Positive => 'p',
            Polarity::Negative => 'n',
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Unknown => "unknown",
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "unknown" => Ok(Polarity::Unknown),
            "positive" => Ok(Polarity::Positive),
            "negative" => Ok(Polarity::Negative),
            other => Err(format!("unknown polarity {other:?}")),
        }
    }
}
