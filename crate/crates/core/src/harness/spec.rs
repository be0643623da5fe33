//! Experiment description files.
//!
//! A campaign file is TOML holding one or more `[[experiment]]` tables:
//!
//! ```toml
//! [[experiment]]
//! problem = "co1"
//! dimensions = [10, 30]
//! budgets = [20000, "1e5", "10000*D"]   # or "unlimited"
//! runs = 30
//! master_seed = 2024
//!
//! [experiment.ga]
//! selection = "ranked"
//! crossover = "two-point"
//! mutation = "strong"
//! grid_step = 1e-4
//! penalty = "dynamic:0.5,2,2"
//! stop_error = 1e-4
//! ```
//!
//! Omitted `ga` keys fall back to the preset for the problem family
//! (constrained, continuous or Boolean).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::benchmarks::{Problem, ProblemId};
use crate::encoding::GenomeKind;
use crate::engine::{parse_count, Budget, GaConfig, GaRun};
use crate::error::{Error, Result};
use crate::fitness::PenaltyKind;
use crate::operators::{CrossoverKind, ElitismMode, MutationKind, SelectionKind};

/// Default hard stop for unlimited budgets.
pub const DEFAULT_FES_CAP: u64 = 5_000_000;

/// How a run's budget is derived from the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BudgetRepr", into = "String")]
pub enum BudgetRule {
    Fixed(u64),
    /// `factor * D`
    PerDimension(u64),
    Unlimited,
}

impl BudgetRule {
    pub fn resolve(self, dim: usize) -> Budget {
        match self {
            BudgetRule::Fixed(n) => Budget::Limited(n),
            BudgetRule::PerDimension(k) => Budget::Limited(k * dim as u64),
            BudgetRule::Unlimited => Budget::Unlimited,
        }
    }
}

impl fmt::Display for BudgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetRule::Fixed(n) => write!(f, "{n}"),
            BudgetRule::PerDimension(k) => write!(f, "{k}*D"),
            BudgetRule::Unlimited => f.write_str("unlimited"),
        }
    }
}

impl FromStr for BudgetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("unlimited") {
            return Ok(BudgetRule::Unlimited);
        }
        if let Some(factor) = t.strip_suffix("*D").or_else(|| t.strip_suffix("*d")) {
            return parse_count(factor).map(BudgetRule::PerDimension);
        }
        parse_count(t).map(BudgetRule::Fixed)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BudgetRepr {
    Int(u64),
    Text(String),
}

impl TryFrom<BudgetRepr> for BudgetRule {
    type Error = Error;
    fn try_from(r: BudgetRepr) -> Result<Self> {
        match r {
            BudgetRepr::Int(n) => Ok(BudgetRule::Fixed(n)),
            BudgetRepr::Text(s) => s.parse(),
        }
    }
}

impl From<BudgetRule> for String {
    fn from(b: BudgetRule) -> String {
        b.to_string()
    }
}

/// GA settings of an experiment; `None` means "use the family preset".
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaTemplate {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub population_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossover: Option<CrossoverKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<MutationKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elitism_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elitism_mode: Option<ElitismMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genome_kind: Option<GenomeKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltyKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop_error: Option<f64>,
}

/// Preset GA configuration for a problem family (budget and seed unset).
pub fn preset_for(id: ProblemId) -> GaConfig {
    match id {
        ProblemId::Co1 => GaConfig {
            stop_error: 1e-4,
            ..GaConfig::constrained(0)
        },
        ProblemId::Continuous(_) => GaConfig::continuous(0),
        ProblemId::Boolean(_) => GaConfig::boolean(),
    }
}

impl GaTemplate {
    /// Fill every unset field from the preset for `id`.
    pub fn resolved(&self, id: ProblemId) -> GaTemplate {
        let p = preset_for(id);
        GaTemplate {
            population_size: Some(self.population_size.unwrap_or(p.population_size)),
            selection: Some(self.selection.unwrap_or(p.selection)),
            crossover: Some(self.crossover.unwrap_or(p.crossover)),
            mutation: Some(self.mutation.unwrap_or(p.mutation)),
            elitism_fraction: Some(self.elitism_fraction.unwrap_or(p.elitism_fraction)),
            elitism_mode: Some(self.elitism_mode.unwrap_or(p.elitism_mode)),
            genome_kind: Some(self.genome_kind.unwrap_or(p.genome_kind)),
            grid_step: Some(self.grid_step.unwrap_or(p.grid_step)),
            penalty: Some(self.penalty.unwrap_or(p.penalty)),
            stop_error: Some(self.stop_error.unwrap_or(p.stop_error)),
        }
    }

    pub fn to_config(
        &self,
        id: ProblemId,
        max_fes: Budget,
        fes_cap: Option<u64>,
        seed: u64,
    ) -> GaConfig {
        let p = preset_for(id);
        GaConfig {
            population_size: self.population_size.unwrap_or(p.population_size),
            max_fes,
            fes_cap: match max_fes {
                Budget::Unlimited => fes_cap,
                Budget::Limited(_) => None,
            },
            selection: self.selection.unwrap_or(p.selection),
            crossover: self.crossover.unwrap_or(p.crossover),
            mutation: self.mutation.unwrap_or(p.mutation),
            elitism_fraction: self.elitism_fraction.unwrap_or(p.elitism_fraction),
            elitism_mode: self.elitism_mode.unwrap_or(p.elitism_mode),
            genome_kind: self.genome_kind.unwrap_or(p.genome_kind),
            grid_step: self.grid_step.unwrap_or(p.grid_step),
            penalty: self.penalty.unwrap_or(p.penalty),
            stop_error: self.stop_error.unwrap_or(p.stop_error),
            seed,
        }
    }
}

/// One problem swept over dimensions and budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub problem: String,
    /// Name used in output files; defaults to the problem name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dimensions: Vec<usize>,
    pub budgets: Vec<BudgetRule>,
    pub runs: usize,
    #[serde(default)]
    pub master_seed: u64,
    /// Hard stop for unlimited budgets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fes_cap: Option<u64>,
    /// CO1 only: file with one shift value per line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_file: Option<PathBuf>,
    #[serde(default)]
    pub ga: GaTemplate,
}

impl ExperimentSpec {
    pub fn problem_id(&self) -> Result<ProblemId> {
        self.problem.parse()
    }

    pub fn label(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => self
                .problem_id()
                .map(|id| id.name().to_string())
                .unwrap_or_else(|_| self.problem.clone()),
        }
    }

    pub fn effective_fes_cap(&self) -> u64 {
        self.fes_cap.unwrap_or(DEFAULT_FES_CAP)
    }

    /// Build the problem instance for one dimension.
    pub fn build_problem(&self, dim: usize) -> Result<Problem> {
        let id = self.problem_id()?;
        let shift = match &self.shift_file {
            Some(path) => Some(crate::benchmarks::load_shift(path, dim)?),
            None => None,
        };
        Problem::builtin(id, dim, shift)
    }

    pub fn config(&self, dim: usize, budget: BudgetRule, seed: u64) -> Result<GaConfig> {
        let id = self.problem_id()?;
        Ok(self.ga.to_config(
            id,
            budget.resolve(dim),
            Some(self.effective_fes_cap()),
            seed,
        ))
    }

    /// Check everything that can be checked without running.
    pub fn validate(&self) -> Result<()> {
        let id = self.problem_id()?;
        if self.runs == 0 {
            return Err(Error::config(format!(
                "{}: runs must be >= 1",
                self.label()
            )));
        }
        if self.dimensions.is_empty() || self.budgets.is_empty() {
            return Err(Error::config(format!(
                "{}: needs at least one dimension and one budget",
                self.label()
            )));
        }
        if self.label().is_empty() || self.label().contains(['/', '\\', ',']) {
            return Err(Error::config(format!(
                "label '{}' is not usable in file names",
                self.label()
            )));
        }
        for &dim in &self.dimensions {
            if let ProblemId::Continuous(f) = id {
                if dim < f.min_dimension() {
                    return Err(Error::config(format!(
                        "{} needs dimension >= {}",
                        f.name(),
                        f.min_dimension()
                    )));
                }
            }
            if dim == 0 {
                return Err(Error::config("dimension must be >= 1"));
            }
            if self.shift_file.is_some() && id != ProblemId::Co1 {
                return Err(Error::config("shift_file only applies to co1"));
            }
            let mut seen = std::collections::BTreeSet::new();
            for &budget in &self.budgets {
                if !seen.insert(budget.resolve(dim).limit()) {
                    return Err(Error::config(format!(
                        "{}: budget {} repeats another budget at D={dim}",
                        self.label(),
                        budget.resolve(dim)
                    )));
                }
            }
            let problem = self.build_problem(dim)?;
            for &budget in &self.budgets {
                let config = self.config(dim, budget, 0)?;
                GaRun::new(&problem, &config)?;
            }
        }
        Ok(())
    }

    /// The same experiment with every GA default written out.
    pub fn resolved(&self) -> Result<ExperimentSpec> {
        let id = self.problem_id()?;
        Ok(ExperimentSpec {
            label: Some(self.label()),
            fes_cap: if self.budgets.contains(&BudgetRule::Unlimited) {
                Some(self.effective_fes_cap())
            } else {
                self.fes_cap
            },
            ga: self.ga.resolved(id),
            ..self.clone()
        })
    }
}

/// A set of experiments run and reported together.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Campaign {
    pub experiment: Vec<ExperimentSpec>,
}

impl Campaign {
    pub fn parse(text: &str) -> Result<Campaign> {
        let campaign: Campaign = toml::from_str(text)
            .map_err(|e| Error::config(format!("invalid experiment file: {e}")))?;
        if campaign.experiment.is_empty() {
            return Err(Error::config(
                "experiment file defines no [[experiment]] tables",
            ));
        }
        Ok(campaign)
    }

    pub fn load(path: &Path) -> Result<Campaign> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Campaign::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let mut labels = std::collections::BTreeSet::new();
        for e in &self.experiment {
            e.validate()?;
            if !labels.insert(e.label()) {
                return Err(Error::config(format!(
                    "label '{}' is used twice; set distinct `label` values",
                    e.label()
                )));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Harness(format!("cannot serialize campaign: {e}")))
    }
}
