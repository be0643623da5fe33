//! Genotype/phenotype mapping on a uniform lattice.
//!
//! Every continuous variable lives on the grid `lower + v * step` for
//! `v = 0..M-1`, with `M = floor((upper - lower) / step) + 1`. A variable is
//! stored as `bits_per_var` bits, most-significant bit first, and variables are
//! laid out in index order. Under [`BitCoding::Gray`] the slice is read as a
//! reflected Gray code, so neighbouring lattice points differ in one bit.
//! Codes at or above `M` are clamped to the top lattice point.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used when counting lattice points, so that `200 / 1e-4` evaluating
/// to `1999999.9999999998` still yields 2,000,001 points.
const LATTICE_ABS_EPS: f64 = 1e-9;
const LATTICE_REL_EPS: f64 = 1e-12;

/// Bounds and step of the per-variable discretization lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, step: f64) -> Result<Self> {
        let spec = GridSpec { lower, upper, step };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.step.is_finite()) {
            return Err(Error::config(format!("grid {self} has non-finite fields")));
        }
        if self.step <= 0.0 {
            return Err(Error::config(format!(
                "grid step must be > 0, got {}",
                self.step
            )));
        }
        if self.upper <= self.lower {
            return Err(Error::config(format!(
                "grid upper bound {} must exceed lower bound {}",
                self.upper, self.lower
            )));
        }
        let m = self.raw_point_count();
        if m < 2.0 {
            return Err(Error::config(format!(
                "grid {self} has fewer than two points"
            )));
        }
        if m > (1u64 << 62) as f64 {
            return Err(Error::config(format!(
                "grid {self} needs more than 62 bits per variable"
            )));
        }
        Ok(())
    }

    fn raw_point_count(&self) -> f64 {
        let span = (self.upper - self.lower) / self.step;
        (span + LATTICE_ABS_EPS.max(span * LATTICE_REL_EPS)).floor() + 1.0
    }

    /// Number of lattice points `M`.
    pub fn point_count(&self) -> u64 {
        self.raw_point_count() as u64
    }

    /// Lattice value at index `v` (not clamped).
    pub fn value_at(&self, v: u64) -> f64 {
        self.lower + v as f64 * self.step
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] step {}", self.lower, self.upper, self.step)
    }
}

/// Bits needed to index every lattice point: `ceil(log2(M))`.
pub fn bits_per_var(spec: &GridSpec) -> Result<usize> {
    spec.validate()?;
    let m = spec.point_count();
    // ceil(log2(m)) for m >= 2 is the bit length of m - 1.
    Ok((u64::BITS - (m - 1).leading_zeros()) as usize)
}

pub fn binary_to_gray(v: u64) -> u64 {
    v ^ (v >> 1)
}

pub fn gray_to_binary(g: u64) -> u64 {
    let mut v = g;
    let mut shift = 1;
    while shift < u64::BITS {
        v ^= v >> shift;
        shift <<= 1;
    }
    v
}

/// How a bit string is read as an integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BitCoding {
    Plain,
    Gray,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenomeKind {
    PlainBinary,
    GrayBinary,
    Permutation,
}

impl GenomeKind {
    pub fn is_binary(self) -> bool {
        !matches!(self, GenomeKind::Permutation)
    }

    pub fn coding(self) -> Option<BitCoding> {
        match self {
            GenomeKind::PlainBinary => Some(BitCoding::Plain),
            GenomeKind::GrayBinary => Some(BitCoding::Gray),
            GenomeKind::Permutation => None,
        }
    }
}

impl fmt::Display for GenomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenomeKind::PlainBinary => "plain",
            GenomeKind::GrayBinary => "gray",
            GenomeKind::Permutation => "permutation",
        })
    }
}

impl std::str::FromStr for GenomeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" | "binary" | "plain-binary" => Ok(GenomeKind::PlainBinary),
            "gray" | "gray-binary" => Ok(GenomeKind::GrayBinary),
            "permutation" | "perm" => Ok(GenomeKind::Permutation),
            other => Err(Error::config(format!("unknown genome kind '{other}'"))),
        }
    }
}

/// A fixed-length bit string or a permutation of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Genome {
    Bits { coding: BitCoding, bits: Vec<bool> },
    Perm(Vec<usize>),
}

impl Genome {
    pub fn kind(&self) -> GenomeKind {
        match self {
            Genome::Bits {
                coding: BitCoding::Plain,
                ..
            } => GenomeKind::PlainBinary,
            Genome::Bits {
                coding: BitCoding::Gray,
                ..
            } => GenomeKind::GrayBinary,
            Genome::Perm(_) => GenomeKind::Permutation,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Genome::Bits { bits, .. } => bits.len(),
            Genome::Perm(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> Option<&[bool]> {
        match self {
            Genome::Bits { bits, .. } => Some(bits),
            Genome::Perm(_) => None,
        }
    }

    pub fn perm(&self) -> Option<&[usize]> {
        match self {
            Genome::Perm(p) => Some(p),
            Genome::Bits { .. } => None,
        }
    }
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genome::Bits { bits, .. } => {
                for &b in bits {
                    f.write_str(if b { "1" } else { "0" })?;
                }
                Ok(())
            }
            Genome::Perm(p) => {
                let parts: Vec<String> = p.iter().map(|v| v.to_string()).collect();
                write!(f, "({})", parts.join(" "))
            }
        }
    }
}

/// True when `p` is a bijection on `0..p.len()`.
pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    for &v in p {
        if v >= p.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn bits_to_u64(bits: &[bool]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

/// Decode one variable's bit slice onto the lattice.
pub fn decode_var(bits: &[bool], spec: &GridSpec, coding: BitCoding) -> f64 {
    let raw = bits_to_u64(bits);
    let u = match coding {
        BitCoding::Plain => raw,
        BitCoding::Gray => gray_to_binary(raw),
    };
    let v = u.min(spec.point_count() - 1);
    spec.value_at(v).min(spec.upper)
}

/// Decode a binary genome into `dim` lattice values.
pub fn decode_genome(genome: &Genome, spec: &GridSpec, dim: usize) -> Result<Vec<f64>> {
    let Genome::Bits { coding, bits } = genome else {
        return Err(Error::config(
            "cannot decode a permutation genome onto a grid",
        ));
    };
    let width = bits_per_var(spec)?;
    if bits.len() != dim * width {
        return Err(Error::config(format!(
            "genome length {} does not match {dim} variables x {width} bits",
            bits.len()
        )));
    }
    Ok(bits
        .chunks_exact(width)
        .map(|chunk| decode_var(chunk, spec, *coding))
        .collect())
}

/// Inverse of [`decode_var`] for a lattice index: the bits that decode to `v`.
pub fn encode_index(v: u64, width: usize, coding: BitCoding) -> Vec<bool> {
    let code = match coding {
        BitCoding::Plain => v,
        BitCoding::Gray => binary_to_gray(v),
    };
    (0..width).rev().map(|i| (code >> i) & 1 == 1).collect()
}

/// Uniformly random genome: i.i.d. fair bits, or an unbiased shuffle.
pub fn random_genome<R: Rng + ?Sized>(
    kind: GenomeKind,
    length: usize,
    rng: &mut R,
) -> Result<Genome> {
    if length == 0 {
        return Err(Error::config("genome length must be positive"));
    }
    Ok(match kind.coding() {
        Some(coding) => Genome::Bits {
            coding,
            bits: (0..length).map(|_| rng.gen::<bool>()).collect(),
        },
        None => {
            let mut p: Vec<usize> = (0..length).collect();
            p.shuffle(rng);
            Genome::Perm(p)
        }
    })
}
