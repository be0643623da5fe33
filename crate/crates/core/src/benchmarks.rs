//! Test problems: the constrained CO1 task, fourteen unconstrained continuous
//! functions and three pseudo-Boolean functions.
//!
//! Continuous functions are unshifted and unrotated; all of them have optimum
//! value 0. Boolean functions are maximized, the engine works with the gap to
//! the known maximum.

use std::f64::consts::{E, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fitness::ConstraintSet;

pub const CONTINUOUS_LOWER: f64 = -100.0;
pub const CONTINUOUS_UPPER: f64 = 100.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ContinuousFn {
    BentCigar,
    Zakharov,
    Rosenbrock,
    Rastrigin,
    ExpandedSchaffer,
    Levy,
    Elliptic,
    Discus,
    Ackley,
    Weierstrass,
    Griewank,
    Katsuura,
    HappyCat,
    HgBat,
}

impl ContinuousFn {
    pub const ALL: [ContinuousFn; 14] = [
        ContinuousFn::BentCigar,
        ContinuousFn::Zakharov,
        ContinuousFn::Rosenbrock,
        ContinuousFn::Rastrigin,
        ContinuousFn::ExpandedSchaffer,
        ContinuousFn::Levy,
        ContinuousFn::Elliptic,
        ContinuousFn::Discus,
        ContinuousFn::Ackley,
        ContinuousFn::Weierstrass,
        ContinuousFn::Griewank,
        ContinuousFn::Katsuura,
        ContinuousFn::HappyCat,
        ContinuousFn::HgBat,
    ];

    /// 1-based number in the suite.
    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&f| f == self).unwrap() + 1
    }

    pub fn from_number(n: usize) -> Result<Self> {
        n.checked_sub(1)
            .and_then(|i| Self::ALL.get(i).copied())
            .ok_or_else(|| {
                Error::config(format!(
                    "no continuous function with id {n} (expected 1..=14)"
                ))
            })
    }

    pub fn name(self) -> &'static str {
        match self {
            ContinuousFn::BentCigar => "bent_cigar",
            ContinuousFn::Zakharov => "zakharov",
            ContinuousFn::Rosenbrock => "rosenbrock",
            ContinuousFn::Rastrigin => "rastrigin",
            ContinuousFn::ExpandedSchaffer => "expanded_schaffer",
            ContinuousFn::Levy => "levy",
            ContinuousFn::Elliptic => "elliptic",
            ContinuousFn::Discus => "discus",
            ContinuousFn::Ackley => "ackley",
            ContinuousFn::Weierstrass => "weierstrass",
            ContinuousFn::Griewank => "griewank",
            ContinuousFn::Katsuura => "katsuura",
            ContinuousFn::HappyCat => "happycat",
            ContinuousFn::HgBat => "hgbat",
        }
    }

    pub fn is_unimodal(self) -> bool {
        matches!(
            self,
            ContinuousFn::BentCigar
                | ContinuousFn::Zakharov
                | ContinuousFn::Elliptic
                | ContinuousFn::Discus
        )
    }

    pub fn min_dimension(self) -> usize {
        match self {
            ContinuousFn::Rosenbrock | ContinuousFn::Elliptic => 2,
            _ => 1,
        }
    }

    /// A point where the function attains its minimum of 0.
    pub fn optimum_location(self, dim: usize) -> Vec<f64> {
        match self {
            ContinuousFn::Rosenbrock | ContinuousFn::Levy => vec![1.0; dim],
            ContinuousFn::HappyCat | ContinuousFn::HgBat => vec![-1.0; dim],
            _ => vec![0.0; dim],
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        let d = x.len() as f64;
        let sum_sq = || x.iter().map(|v| v * v).sum::<f64>();
        match self {
            ContinuousFn::BentCigar => {
                x[0] * x[0] + 1e6 * x[1..].iter().map(|v| v * v).sum::<f64>()
            }
            ContinuousFn::Zakharov => {
                let half: f64 = x.iter().map(|v| 0.5 * v).sum();
                sum_sq() + half.powi(2) + half.powi(4)
            }
            ContinuousFn::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[0] * w[0] - w[1]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            ContinuousFn::Rastrigin => x
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            ContinuousFn::ExpandedSchaffer => {
                let g = |a: f64, b: f64| {
                    let r2 = a * a + b * b;
                    0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
                };
                let n = x.len();
                (0..n).map(|i| g(x[i], x[(i + 1) % n])).sum()
            }
            ContinuousFn::Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let last = w[w.len() - 1];
                let head = (PI * w[0]).sin().powi(2);
                let middle: f64 = w[..w.len() - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                head + middle + tail
            }
            ContinuousFn::Elliptic => {
                let n = x.len();
                x.iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let expo = if n > 1 {
                            i as f64 / (n - 1) as f64
                        } else {
                            0.0
                        };
                        1e6f64.powf(expo) * v * v
                    })
                    .sum()
            }
            ContinuousFn::Discus => 1e6 * x[0] * x[0] + x[1..].iter().map(|v| v * v).sum::<f64>(),
            ContinuousFn::Ackley => {
                let cos_sum: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
                -20.0 * (-0.2 * (sum_sq() / d).sqrt()).exp() - (cos_sum / d).exp() + 20.0 + E
            }
            ContinuousFn::Weierstrass => {
                const A: f64 = 0.5;
                const B: f64 = 3.0;
                const K_MAX: i32 = 20;
                let series = |t: f64| -> f64 {
                    (0..=K_MAX)
                        .map(|k| A.powi(k) * (2.0 * PI * B.powi(k) * t).cos())
                        .sum()
                };
                let offset: f64 = (0..=K_MAX)
                    .map(|k| A.powi(k) * (PI * B.powi(k)).cos())
                    .sum();
                x.iter().map(|v| series(v + 0.5)).sum::<f64>() - d * offset
            }
            ContinuousFn::Griewank => {
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum_sq() / 4000.0 - prod + 1.0
            }
            ContinuousFn::Katsuura => {
                let expo = 10.0 / d.powf(1.2);
                let scale = 10.0 / (d * d);
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        let inner: f64 = (1..=32)
                            .map(|j| {
                                let p = 2f64.powi(j);
                                // f64::round rounds halves away from zero.
                                (p * v - (p * v).round()).abs() / p
                            })
                            .sum();
                        (1.0 + (i + 1) as f64 * inner).powf(expo)
                    })
                    .product();
                scale * prod - scale
            }
            ContinuousFn::HappyCat => {
                let s2 = sum_sq();
                let s1: f64 = x.iter().sum();
                (s2 - d).abs().powf(0.25) + (0.5 * s2 + s1) / d + 0.5
            }
            ContinuousFn::HgBat => {
                let s2 = sum_sq();
                let s1: f64 = x.iter().sum();
                (s2 * s2 - s1 * s1).abs().sqrt() + (0.5 * s2 + s1) / d + 0.5
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BooleanFn {
    OneMax,
    LeadingOnes,
    Trap,
}

impl BooleanFn {
    pub const ALL: [BooleanFn; 3] = [BooleanFn::OneMax, BooleanFn::LeadingOnes, BooleanFn::Trap];

    pub fn name(self) -> &'static str {
        match self {
            BooleanFn::OneMax => "onemax",
            BooleanFn::LeadingOnes => "leadingones",
            BooleanFn::Trap => "trap",
        }
    }

    pub fn eval(self, bits: &[bool]) -> f64 {
        let n = bits.len();
        let ones = bits.iter().filter(|&&b| b).count();
        match self {
            BooleanFn::OneMax => ones as f64,
            BooleanFn::LeadingOnes => bits.iter().take_while(|&&b| b).count() as f64,
            BooleanFn::Trap => {
                let all_ones = if ones == n { (n + 1) as f64 } else { 0.0 };
                (n - ones) as f64 + all_ones
            }
        }
    }

    pub fn maximum(self, n: usize) -> f64 {
        match self {
            BooleanFn::OneMax | BooleanFn::LeadingOnes => n as f64,
            BooleanFn::Trap => (n + 1) as f64,
        }
    }
}

/// Objective and constraint value of CO1 at `x` with `z = x - shift`.
pub fn eval_co1(x: &[f64], shift: &[f64]) -> Result<(f64, f64)> {
    if x.len() != shift.len() {
        return Err(Error::config(format!(
            "CO1 point has {} components but shift has {}",
            x.len(),
            shift.len()
        )));
    }
    let mut f = 0.0;
    let mut g = 0.0;
    let mut prefix = 0.0;
    for (xi, si) in x.iter().zip(shift) {
        let z = xi - si;
        prefix += z;
        f += prefix * prefix;
        g += z * z - 5000.0 * (0.1 * PI * z).cos() - 4000.0;
    }
    Ok((f, g))
}

/// Read a shift vector: one real per line, blank lines ignored.
pub fn load_shift(path: &Path, dim: usize) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let values = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Error::config(format!("{}: '{l}' is not a number", path.display())))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != dim {
        return Err(Error::config(format!(
            "{}: shift has {} values, dimension is {dim}",
            path.display(),
            values.len()
        )));
    }
    Ok(values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Search-space shape of a problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Representation {
    /// `dimension` real variables on a grid over `[lower, upper]`.
    Real { lower: f64, upper: f64 },
    /// `dimension` bits used as-is.
    Bits,
    /// A permutation of `0..dimension`.
    Perm,
}

/// Decoded candidate handed to an objective.
#[derive(Clone, Debug, PartialEq)]
pub enum Phenotype {
    Real(Vec<f64>),
    Bits(Vec<bool>),
    Perm(Vec<usize>),
}

impl Phenotype {
    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Phenotype::Real(x) => Some(x),
            _ => None,
        }
    }
}

pub type ObjectiveFn = Arc<dyn Fn(&Phenotype) -> f64 + Send + Sync>;

/// Built-in problem identifiers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Continuous(ContinuousFn),
    Co1,
    Boolean(BooleanFn),
}

impl ProblemId {
    pub fn all() -> Vec<ProblemId> {
        let mut ids = vec![ProblemId::Co1];
        ids.extend(ContinuousFn::ALL.iter().map(|&f| ProblemId::Continuous(f)));
        ids.extend(BooleanFn::ALL.iter().map(|&f| ProblemId::Boolean(f)));
        ids
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::Continuous(f) => f.name(),
            ProblemId::Co1 => "co1",
            ProblemId::Boolean(f) => f.name(),
        }
    }

    pub fn is_boolean(self) -> bool {
        matches!(self, ProblemId::Boolean(_))
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        if s == "co1" {
            return Ok(ProblemId::Co1);
        }
        if let Some(n) = s.strip_prefix('f').and_then(|n| n.parse::<usize>().ok()) {
            return ContinuousFn::from_number(n).map(ProblemId::Continuous);
        }
        if let Some(f) = ContinuousFn::ALL.iter().find(|f| f.name() == s) {
            return Ok(ProblemId::Continuous(*f));
        }
        if let Some(f) = BooleanFn::ALL.iter().find(|f| f.name() == s) {
            return Ok(ProblemId::Boolean(*f));
        }
        Err(Error::config(format!("unknown problem '{s}'")))
    }
}

/// An optimization task the engine can run.
#[derive(Clone)]
pub struct Problem {
    pub id: String,
    pub dimension: usize,
    pub representation: Representation,
    pub objective: ObjectiveFn,
    pub constraints: Option<ConstraintSet>,
    /// Best attainable objective value; errors are measured against it.
    pub optimum: f64,
    pub optimum_known: bool,
    pub shift: Option<Vec<f64>>,
    pub direction: Direction,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("id", &self.id)
            .field("dimension", &self.dimension)
            .field("representation", &self.representation)
            .field("constraints", &self.constraints)
            .field("optimum", &self.optimum)
            .field("direction", &self.direction)
            .finish()
    }
}

impl Problem {
    /// Build a built-in problem. `shift` only applies to CO1 (default: zero vector).
    pub fn builtin(id: ProblemId, dimension: usize, shift: Option<Vec<f64>>) -> Result<Problem> {
        if dimension == 0 {
            return Err(Error::config("dimension must be >= 1"));
        }
        if shift.is_some() && id != ProblemId::Co1 {
            return Err(Error::config(format!(
                "problem {id} does not take a shift vector"
            )));
        }
        let real = Representation::Real {
            lower: CONTINUOUS_LOWER,
            upper: CONTINUOUS_UPPER,
        };
        Ok(match id {
            ProblemId::Continuous(func) => {
                if dimension < func.min_dimension() {
                    return Err(Error::config(format!(
                        "{} needs dimension >= {}",
                        func.name(),
                        func.min_dimension()
                    )));
                }
                Problem {
                    id: func.name().to_string(),
                    dimension,
                    representation: real,
                    objective: Arc::new(move |p: &Phenotype| {
                        func.eval(p.as_real().expect("real phenotype"))
                    }),
                    constraints: None,
                    optimum: 0.0,
                    optimum_known: true,
                    shift: None,
                    direction: Direction::Minimize,
                }
            }
            ProblemId::Co1 => {
                let shift = shift.unwrap_or_else(|| vec![0.0; dimension]);
                if shift.len() != dimension {
                    return Err(Error::config(format!(
                        "shift has {} values, dimension is {dimension}",
                        shift.len()
                    )));
                }
                let f_shift = Arc::new(shift.clone());
                let g_shift = Arc::clone(&f_shift);
                let constraints = ConstraintSet {
                    inequalities: vec![Arc::new(move |x: &[f64]| {
                        eval_co1(x, &g_shift).map(|(_, g)| g).unwrap_or(f64::NAN)
                    })],
                    ..Default::default()
                };
                Problem {
                    id: "co1".to_string(),
                    dimension,
                    representation: real,
                    objective: Arc::new(move |p: &Phenotype| {
                        eval_co1(p.as_real().expect("real phenotype"), &f_shift)
                            .map(|(f, _)| f)
                            .unwrap_or(f64::NAN)
                    }),
                    constraints: Some(constraints),
                    optimum: 0.0,
                    optimum_known: true,
                    shift: Some(shift),
                    direction: Direction::Minimize,
                }
            }
            ProblemId::Boolean(func) => Problem {
                id: func.name().to_string(),
                dimension,
                representation: Representation::Bits,
                objective: Arc::new(move |p: &Phenotype| match p {
                    Phenotype::Bits(b) => func.eval(b),
                    _ => f64::NAN,
                }),
                constraints: None,
                optimum: func.maximum(dimension),
                optimum_known: true,
                shift: None,
                direction: Direction::Maximize,
            },
        })
    }

    /// A user-defined problem without constraints.
    pub fn custom(
        id: impl Into<String>,
        dimension: usize,
        representation: Representation,
        direction: Direction,
        optimum: f64,
        objective: ObjectiveFn,
    ) -> Problem {
        Problem {
            id: id.into(),
            dimension,
            representation,
            objective,
            constraints: None,
            optimum,
            optimum_known: true,
            shift: None,
            direction,
        }
    }

    pub fn with_constraints(mut self, constraints: ConstraintSet) -> Problem {
        self.constraints = Some(constraints);
        self
    }

    /// Distance of an objective value from the optimum; 0 means solved.
    pub fn error(&self, objective: f64) -> f64 {
        (objective - self.optimum).abs()
    }
}
