//! Constraint violations, penalty functions and the hyperbolic fitness transform.
//!
//! The raw objective is penalized first, then mapped to fitness with
//! `1 / (1 + |f_pen - optimum|)`, which lies in `(0, 1]` and reaches 1 only at
//! the optimum. Note the plus sign: `1 / (1 - |e|)` would be negative or
//! unbounded for errors of one or more.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::split_tag;

pub type ConstraintFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Default tolerance when turning `h(x) = 0` into `|h(x)| - eps <= 0`.
pub const DEFAULT_EQUALITY_EPS: f64 = 1e-4;

/// Inequalities `g(x) <= 0` and equalities `h(x) = 0`.
#[derive(Clone)]
pub struct ConstraintSet {
    pub inequalities: Vec<ConstraintFn>,
    pub equalities: Vec<ConstraintFn>,
    pub epsilon: f64,
}

impl Default for ConstraintSet {
    fn default() -> Self {
        ConstraintSet {
            inequalities: Vec::new(),
            equalities: Vec::new(),
            epsilon: DEFAULT_EQUALITY_EPS,
        }
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintSet")
            .field("inequalities", &self.inequalities.len())
            .field("equalities", &self.equalities.len())
            .field("epsilon", &self.epsilon)
            .finish()
    }
}

impl ConstraintSet {
    pub fn len(&self) -> usize {
        self.inequalities.len() + self.equalities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Violation amounts: `max(0, g(x))` for each inequality followed by
/// `max(0, |h(x)| - eps)` for each equality.
pub fn violations(x: &[f64], cs: &ConstraintSet) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(cs.len());
    for (j, g) in cs.inequalities.iter().enumerate() {
        let value = g(x);
        if !value.is_finite() {
            return Err(format!("inequality constraint {j} returned {value}"));
        }
        out.push(value.max(0.0));
    }
    for (j, h) in cs.equalities.iter().enumerate() {
        let value = h(x);
        if !value.is_finite() {
            return Err(format!("equality constraint {j} returned {value}"));
        }
        out.push(equality_violation(value, cs.epsilon));
    }
    Ok(out)
}

pub fn equality_violation(h: f64, eps: f64) -> f64 {
    (h.abs() - eps).max(0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum PenaltyKind {
    None,
    /// `weight * sum v^2`
    Static {
        weight: f64,
    },
    /// `(c * t)^alpha * sum v^beta`, `t` the generation number.
    Dynamic {
        c: f64,
        alpha: f64,
        beta: f64,
    },
    /// `lambda * sum v^2` with lambda tuned by [`AdaptiveState`].
    Adaptive {
        lambda0: f64,
        shrink: f64,
        grow: f64,
        window: u32,
    },
}

impl Default for PenaltyKind {
    fn default() -> Self {
        PenaltyKind::Dynamic {
            c: 0.5,
            alpha: 2.0,
            beta: 2.0,
        }
    }
}

impl PenaltyKind {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!(
                    "penalty {name} must be finite and > 0, got {v}"
                )))
            }
        };
        match *self {
            PenaltyKind::None => Ok(()),
            PenaltyKind::Static { weight } => positive("weight", weight),
            PenaltyKind::Dynamic { c, alpha, beta } => {
                positive("C", c)?;
                positive("alpha", alpha)?;
                positive("beta", beta)
            }
            PenaltyKind::Adaptive {
                lambda0,
                shrink,
                grow,
                window,
            } => {
                positive("lambda0", lambda0)?;
                if !(shrink > 1.0 && shrink.is_finite() && grow > 1.0 && grow.is_finite()) {
                    return Err(Error::config(
                        "adaptive penalty factors must be finite and > 1",
                    ));
                }
                if window == 0 {
                    return Err(Error::config("adaptive penalty window must be >= 1"));
                }
                Ok(())
            }
        }
    }
}

/// Feasibility history driving the adaptive penalty weight. One per run.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveState {
    pub lambda: f64,
    feasible_streak: u32,
    infeasible_streak: u32,
}

impl AdaptiveState {
    pub fn new(kind: &PenaltyKind) -> Self {
        let lambda = match kind {
            PenaltyKind::Adaptive { lambda0, .. } => *lambda0,
            _ => 1.0,
        };
        AdaptiveState {
            lambda,
            feasible_streak: 0,
            infeasible_streak: 0,
        }
    }

    /// Record whether this generation's best individual was feasible.
    pub fn observe(&mut self, kind: &PenaltyKind, best_feasible: bool) {
        let PenaltyKind::Adaptive {
            shrink,
            grow,
            window,
            ..
        } = *kind
        else {
            return;
        };
        if best_feasible {
            self.infeasible_streak = 0;
            self.feasible_streak += 1;
            if self.feasible_streak >= window {
                self.lambda /= shrink;
                self.feasible_streak = 0;
            }
        } else {
            self.feasible_streak = 0;
            self.infeasible_streak += 1;
            if self.infeasible_streak >= window {
                self.lambda *= grow;
                self.infeasible_streak = 0;
            }
        }
    }
}

pub fn penalized_objective(
    f: f64,
    v: &[f64],
    kind: &PenaltyKind,
    generation: u64,
    state: &AdaptiveState,
) -> f64 {
    if v.iter().all(|&x| x == 0.0) {
        return f;
    }
    let squares = || v.iter().map(|x| x * x).sum::<f64>();
    match *kind {
        PenaltyKind::None => f,
        PenaltyKind::Static { weight } => f + weight * squares(),
        PenaltyKind::Dynamic { c, alpha, beta } => {
            let pressure = (c * generation as f64).powf(alpha);
            f + pressure * v.iter().map(|x| x.powf(beta)).sum::<f64>()
        }
        PenaltyKind::Adaptive { .. } => f + state.lambda * squares(),
    }
}

/// `1 / (1 + |f_pen - optimum|)`
pub fn hyperbolic_fitness(f_pen: f64, optimum: f64) -> f64 {
    1.0 / (1.0 + (f_pen - optimum).abs())
}

impl fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PenaltyKind::None => f.write_str("none"),
            PenaltyKind::Static { weight } => write!(f, "static:{weight}"),
            PenaltyKind::Dynamic { c, alpha, beta } => write!(f, "dynamic:{c},{alpha},{beta}"),
            PenaltyKind::Adaptive {
                lambda0,
                shrink,
                grow,
                window,
            } => {
                write!(f, "adaptive:{lambda0},{shrink},{grow},{window}")
            }
        }
    }
}

impl FromStr for PenaltyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        let (name, arg) = split_tag(&s);
        let nums = |arg: Option<&str>, n: usize| -> Result<Vec<f64>> {
            let vals: Vec<f64> = match arg {
                Some(a) => a
                    .split(',')
                    .map(|x| x.trim().parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::config(format!("bad penalty parameters in '{s}'")))?,
                None => Vec::new(),
            };
            if vals.len() != n {
                return Err(Error::config(format!(
                    "penalty '{name}' takes {n} parameters"
                )));
            }
            Ok(vals)
        };
        let kind = match name {
            "none" => PenaltyKind::None,
            "static" => PenaltyKind::Static {
                weight: nums(arg, 1)?[0],
            },
            "dynamic" if arg.is_none() => PenaltyKind::default(),
            "dynamic" => {
                let p = nums(arg, 3)?;
                PenaltyKind::Dynamic {
                    c: p[0],
                    alpha: p[1],
                    beta: p[2],
                }
            }
            "adaptive" => {
                let p = nums(arg, 4)?;
                if p[3].fract() != 0.0 || p[3] < 0.0 {
                    return Err(Error::config("adaptive window must be a whole number"));
                }
                PenaltyKind::Adaptive {
                    lambda0: p[0],
                    shrink: p[1],
                    grow: p[2],
                    window: p[3] as u32,
                }
            }
            _ => return Err(Error::config(format!("unknown penalty '{s}'"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl TryFrom<String> for PenaltyKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PenaltyKind> for String {
    fn from(v: PenaltyKind) -> String {
        v.to_string()
    }
}
