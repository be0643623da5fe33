//! Selection, crossover, mutation and elitism.
//!
//! Operator kinds round-trip through short text tags (`tournament:3`,
//! `two-point`, `strong`, ...) which is how the CLI and experiment files name
//! them.

mod crossover;
mod elitism;
mod mutation;
mod selection;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encoding::GenomeKind;
use crate::error::{Error, Result};

pub use crossover::{
    crossover, crossover_binary, crossover_order, one_point_at, order_crossover_at, two_point_at,
    uniform_with_mask,
};
pub use elitism::{apply_elitism, elite_count, ElitismMode};
pub use mutation::{
    invert_segment, move_segment, mutate, mutate_binary, mutate_permutation, shift_element,
    swap_elements,
};
pub use selection::{select, selection_probabilities};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SelectionKind {
    Tournament { size: usize },
    Ranked,
    Roulette,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CrossoverKind {
    OnePoint,
    TwoPoint,
    Uniform,
    OrderOx1,
}

/// Bit-flip intensity; the named levels scale with genome length `L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MutationRate {
    /// `1 / L`
    Normal,
    /// `3 / L`
    Strong,
    Fixed(f64),
}

impl MutationRate {
    pub fn resolve(self, genome_len: usize) -> f64 {
        match self {
            MutationRate::Normal => 1.0 / genome_len as f64,
            MutationRate::Strong => (3.0 / genome_len as f64).min(1.0),
            MutationRate::Fixed(r) => r,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum MutationKind {
    BitFlip(MutationRate),
    Inversion,
    Swap,
    Shift,
    Movement,
}

impl SelectionKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            SelectionKind::Tournament { size } if *size < 2 => Err(Error::config(format!(
                "tournament size must be >= 2, got {size}"
            ))),
            _ => Ok(()),
        }
    }
}

impl CrossoverKind {
    pub fn supports(self, kind: GenomeKind) -> bool {
        match self {
            CrossoverKind::OrderOx1 => kind == GenomeKind::Permutation,
            _ => kind.is_binary(),
        }
    }
}

impl MutationKind {
    pub fn supports(self, kind: GenomeKind) -> bool {
        match self {
            MutationKind::BitFlip(_) => kind.is_binary(),
            _ => kind == GenomeKind::Permutation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let MutationKind::BitFlip(MutationRate::Fixed(r)) = self {
            if !(0.0..=1.0).contains(r) {
                return Err(Error::config(format!(
                    "mutation rate must be in [0, 1], got {r}"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SelectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionKind::Tournament { size } => write!(f, "tournament:{size}"),
            SelectionKind::Ranked => f.write_str("ranked"),
            SelectionKind::Roulette => f.write_str("roulette"),
        }
    }
}

impl FromStr for SelectionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = split_tag(&s);
        let kind = match (name, arg) {
            ("tournament", None) => SelectionKind::Tournament { size: 3 },
            ("tournament", Some(n)) => SelectionKind::Tournament {
                size: n
                    .parse()
                    .map_err(|_| Error::config(format!("bad tournament size '{n}'")))?,
            },
            ("ranked" | "rank", None) => SelectionKind::Ranked,
            ("roulette", None) => SelectionKind::Roulette,
            _ => return Err(Error::config(format!("unknown selection '{s}'"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for CrossoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossoverKind::OnePoint => "one-point",
            CrossoverKind::TwoPoint => "two-point",
            CrossoverKind::Uniform => "uniform",
            CrossoverKind::OrderOx1 => "ox1",
        })
    }
}

impl FromStr for CrossoverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "one-point" | "onepoint" => Ok(CrossoverKind::OnePoint),
            "two-point" | "twopoint" => Ok(CrossoverKind::TwoPoint),
            "uniform" => Ok(CrossoverKind::Uniform),
            "ox1" | "order" | "order-ox1" => Ok(CrossoverKind::OrderOx1),
            other => Err(Error::config(format!("unknown crossover '{other}'"))),
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationKind::BitFlip(MutationRate::Normal) => f.write_str("normal"),
            MutationKind::BitFlip(MutationRate::Strong) => f.write_str("strong"),
            MutationKind::BitFlip(MutationRate::Fixed(r)) => write!(f, "bitflip:{r}"),
            MutationKind::Inversion => f.write_str("inversion"),
            MutationKind::Swap => f.write_str("swap"),
            MutationKind::Shift => f.write_str("shift"),
            MutationKind::Movement => f.write_str("movement"),
        }
    }
}

impl FromStr for MutationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = split_tag(&s);
        let kind = match (name, arg) {
            ("normal", None) => MutationKind::BitFlip(MutationRate::Normal),
            ("strong", None) => MutationKind::BitFlip(MutationRate::Strong),
            ("bitflip", Some(r)) => MutationKind::BitFlip(MutationRate::Fixed(
                r.parse()
                    .map_err(|_| Error::config(format!("bad mutation rate '{r}'")))?,
            )),
            ("inversion", None) => MutationKind::Inversion,
            ("swap", None) => MutationKind::Swap,
            ("shift", None) => MutationKind::Shift,
            ("movement", None) => MutationKind::Movement,
            // A bare number is a fixed bit-flip rate.
            (num, None) if num.parse::<f64>().is_ok() => {
                MutationKind::BitFlip(MutationRate::Fixed(num.parse().unwrap()))
            }
            _ => return Err(Error::config(format!("unknown mutation '{s}'"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

pub(crate) fn split_tag(s: &str) -> (&str, Option<&str>) {
    match s.split_once(':') {
        Some((name, arg)) => (name.trim(), Some(arg.trim())),
        None => (s.trim(), None),
    }
}

macro_rules! string_serde {
    ($($ty:ty),*) => {$(
        impl TryFrom<String> for $ty {
            type Error = Error;
            fn try_from(s: String) -> Result<Self> {
                s.parse()
            }
        }

        impl From<$ty> for String {
            fn from(v: $ty) -> String {
                v.to_string()
            }
        }
    )*};
}

string_serde!(SelectionKind, CrossoverKind, MutationKind);
