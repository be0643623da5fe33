//! The generational GA loop.
//!
//! One generation: select `N` parents, pair them consecutively, cross every
//! pair, mutate every child, evaluate the children, then let the best of the
//! previous generation replace the worst children. Every objective call is one
//! FE; the initial population counts. A run stops as soon as an evaluation
//! brings the best feasible error under `stop_error`, or when the budget
//! would be exceeded, in which case the unevaluated rest of the generation is
//! dropped.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{Phenotype, Problem, Representation};
use crate::encoding::{bits_per_var, decode_genome, random_genome, Genome, GenomeKind, GridSpec};
use crate::error::{Error, Result};
use crate::fitness::{
    hyperbolic_fitness, penalized_objective, violations, AdaptiveState, PenaltyKind,
};
use crate::operators::{
    apply_elitism, crossover, mutate, select, CrossoverKind, ElitismMode, MutationKind,
    MutationRate, SelectionKind,
};

/// Checkpoint spacing when the budget is unlimited.
pub const UNLIMITED_CHECKPOINT_FES: u64 = 1000;

/// Objective-evaluation budget of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Budget {
    Limited(u64),
    Unlimited,
}

impl Budget {
    pub fn limit(self) -> Option<u64> {
        match self {
            Budget::Limited(n) => Some(n),
            Budget::Unlimited => None,
        }
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Limited(n) => write!(f, "{n}"),
            Budget::Unlimited => f.write_str("unlimited"),
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("unlimited") {
            return Ok(Budget::Unlimited);
        }
        parse_count(s).map(Budget::Limited)
    }
}

/// Parse a non-negative count, accepting `200000`, `2e5` or `2_000`.
pub(crate) fn parse_count(s: &str) -> Result<u64> {
    let clean = s.trim().replace('_', "");
    if let Ok(n) = clean.parse::<u64>() {
        return Ok(n);
    }
    match clean.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < u64::MAX as f64 => Ok(v as u64),
        _ => Err(Error::config(format!("'{s}' is not a whole number"))),
    }
}

impl TryFrom<String> for Budget {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Budget> for String {
    fn from(b: Budget) -> String {
        b.to_string()
    }
}

/// Everything that parameterizes one GA run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_fes: Budget,
    /// Hard stop for unlimited budgets; a run reaching it ends unsolved.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fes_cap: Option<u64>,
    pub selection: SelectionKind,
    pub crossover: CrossoverKind,
    pub mutation: MutationKind,
    pub elitism_fraction: f64,
    #[serde(default)]
    pub elitism_mode: ElitismMode,
    pub genome_kind: GenomeKind,
    /// Lattice step for real-valued problems; ignored otherwise.
    pub grid_step: f64,
    pub penalty: PenaltyKind,
    pub stop_error: f64,
    pub seed: u64,
}

impl GaConfig {
    /// Unconstrained continuous setup: 25 individuals, Gray coding on a 1e-8
    /// grid, tournament of 3, one-point crossover, strong mutation, 5% elitism.
    pub fn continuous(max_fes: u64) -> Self {
        GaConfig {
            population_size: 25,
            max_fes: Budget::Limited(max_fes),
            fes_cap: None,
            selection: SelectionKind::Tournament { size: 3 },
            crossover: CrossoverKind::OnePoint,
            mutation: MutationKind::BitFlip(MutationRate::Strong),
            elitism_fraction: 0.05,
            elitism_mode: ElitismMode::Best,
            genome_kind: GenomeKind::GrayBinary,
            grid_step: 1e-8,
            penalty: PenaltyKind::None,
            stop_error: 1e-8,
            seed: 0,
        }
    }

    /// Constrained setup: as [`GaConfig::continuous`] but with a 1e-4 grid,
    /// ranked selection, two-point crossover and the dynamic penalty.
    pub fn constrained(max_fes: u64) -> Self {
        GaConfig {
            selection: SelectionKind::Ranked,
            crossover: CrossoverKind::TwoPoint,
            grid_step: 1e-4,
            penalty: PenaltyKind::default(),
            ..Self::continuous(max_fes)
        }
    }

    /// Pseudo-Boolean setup: 10 individuals, plain bits, tournament of 3,
    /// uniform crossover, normal mutation, 5% elitism, run until solved.
    pub fn boolean() -> Self {
        GaConfig {
            population_size: 10,
            max_fes: Budget::Unlimited,
            selection: SelectionKind::Tournament { size: 3 },
            crossover: CrossoverKind::Uniform,
            mutation: MutationKind::BitFlip(MutationRate::Normal),
            genome_kind: GenomeKind::PlainBinary,
            grid_step: 1.0,
            ..Self::continuous(0)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::config(format!(
                "population size must be >= 2, got {}",
                self.population_size
            )));
        }
        if let Budget::Limited(n) = self.max_fes {
            if n < self.population_size as u64 {
                return Err(Error::config(format!(
                    "max_fes {n} is smaller than the population size {}",
                    self.population_size
                )));
            }
        }
        if !(0.0..1.0).contains(&self.elitism_fraction) {
            return Err(Error::config(format!(
                "elitism fraction must be in [0, 1), got {}",
                self.elitism_fraction
            )));
        }
        if !(self.stop_error >= 0.0 && self.stop_error.is_finite()) {
            return Err(Error::config(format!(
                "stop error must be >= 0, got {}",
                self.stop_error
            )));
        }
        self.selection.validate()?;
        self.mutation.validate()?;
        self.penalty.validate()?;
        if !self.crossover.supports(self.genome_kind) {
            return Err(Error::config(format!(
                "{} crossover does not apply to {} genomes",
                self.crossover, self.genome_kind
            )));
        }
        if !self.mutation.supports(self.genome_kind) {
            return Err(Error::config(format!(
                "{} mutation does not apply to {} genomes",
                self.mutation, self.genome_kind
            )));
        }
        Ok(())
    }
}

/// An evaluated candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub phenotype: Phenotype,
    /// Raw objective value.
    pub objective: f64,
    pub violations: Vec<f64>,
    pub penalized: f64,
    pub fitness: f64,
    /// `|objective - optimum|` on the raw objective.
    pub error: f64,
}

impl Individual {
    pub fn is_feasible(&self) -> bool {
        self.violations.iter().all(|&v| v == 0.0)
    }

    pub fn total_violation(&self) -> f64 {
        self.violations.iter().sum()
    }

    fn refresh(
        &mut self,
        penalty: &PenaltyKind,
        generation: u64,
        adaptive: &AdaptiveState,
        optimum: f64,
    ) {
        self.penalized = penalized_objective(
            self.objective,
            &self.violations,
            penalty,
            generation,
            adaptive,
        );
        self.fitness = hyperbolic_fitness(self.penalized, optimum);
    }

    /// Feasible beats infeasible; then lower error, or lower violation among infeasible.
    fn is_better_than(&self, other: &Individual) -> bool {
        match (self.is_feasible(), other.is_feasible()) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => self.error < other.error,
            (false, false) => {
                let (a, b) = (self.total_violation(), other.total_violation());
                a < b || (a == b && self.error < other.error)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    /// Percentage of the budget; `None` for unlimited budgets.
    pub pct: Option<f64>,
    pub fes: u64,
    /// Best-so-far feasible error (infinite before any feasible point is seen).
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub fes_used: u64,
    pub final_error: f64,
    pub solved: bool,
    /// False when no feasible individual was ever evaluated.
    pub feasible: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub checkpoints: Vec<Checkpoint>,
    pub terminal: Option<Terminal>,
}

/// Mutable bookkeeping of one run.
#[derive(Clone, Debug)]
pub struct RunState {
    pub generation: u64,
    pub fes_used: u64,
    pub best: Option<Individual>,
    pub trace: RunTrace,
    /// Best-so-far error at the end of every completed generation (index 0 is the initial population).
    pub generation_best: Vec<f64>,
    pub solved: bool,
    pub finished: bool,
    next_checkpoint: u64,
    adaptive: AdaptiveState,
}

impl RunState {
    fn new(config: &GaConfig) -> Self {
        RunState {
            generation: 0,
            fes_used: 0,
            best: None,
            trace: RunTrace::default(),
            generation_best: Vec::new(),
            solved: false,
            finished: false,
            next_checkpoint: 1,
            adaptive: AdaptiveState::new(&config.penalty),
        }
    }

    /// Error reported for the best-so-far individual, zeroed below `stop_error`.
    pub fn best_error(&self, config: &GaConfig) -> f64 {
        match &self.best {
            Some(b) if b.is_feasible() => report_error(b.error, config.stop_error),
            _ => f64::INFINITY,
        }
    }

    /// Append every checkpoint whose FE threshold has now been reached.
    pub fn sample_trace(&mut self, config: &GaConfig) {
        let error = self.best_error(config);
        match config.max_fes {
            Budget::Limited(max) => {
                while self.next_checkpoint <= 100 {
                    let threshold = checkpoint_fes(max, self.next_checkpoint);
                    if self.fes_used < threshold {
                        break;
                    }
                    let pct = Some(self.next_checkpoint as f64);
                    self.next_checkpoint += 1;
                    // Budgets under 100 FEs map several percentages to one count;
                    // keep a single row labelled with the largest of them.
                    if let Some(last) = self
                        .trace
                        .checkpoints
                        .last_mut()
                        .filter(|c| c.fes == threshold)
                    {
                        last.pct = pct;
                        continue;
                    }
                    self.trace.checkpoints.push(Checkpoint {
                        pct,
                        fes: threshold,
                        error,
                    });
                }
            }
            Budget::Unlimited => {
                while self.fes_used >= self.next_checkpoint * UNLIMITED_CHECKPOINT_FES {
                    self.trace.checkpoints.push(Checkpoint {
                        pct: None,
                        fes: self.next_checkpoint * UNLIMITED_CHECKPOINT_FES,
                        error,
                    });
                    self.next_checkpoint += 1;
                }
            }
        }
    }

    fn budget_left(&self, config: &GaConfig) -> bool {
        match config.max_fes {
            Budget::Limited(n) => self.fes_used < n,
            Budget::Unlimited => config.fes_cap.is_none_or(|cap| self.fes_used < cap),
        }
    }
}

/// FE count at checkpoint `k` of 100: `ceil(k * max / 100)`.
pub fn checkpoint_fes(max_fes: u64, k: u64) -> u64 {
    (k as u128 * max_fes as u128).div_ceil(100) as u64
}

fn report_error(error: f64, stop_error: f64) -> f64 {
    if error < stop_error {
        0.0
    } else {
        error
    }
}

/// Outcome of [`run_ga`].
#[derive(Clone, Debug)]
pub struct RunResult {
    pub best: Individual,
    /// Error of `best`, zeroed below the stop threshold.
    pub best_error: f64,
    pub trace: RunTrace,
    pub fes_used: u64,
    pub generations: u64,
    pub solved: bool,
    pub feasible_found: bool,
    pub generation_best: Vec<f64>,
}

/// A GA run in progress. [`run_ga`] drives it to completion; tests and tools
/// can step it generation by generation.
pub struct GaRun<'a> {
    problem: &'a Problem,
    config: &'a GaConfig,
    rng: ChaCha8Rng,
    grid: Option<GridSpec>,
    genome_len: usize,
    mutation_rate: f64,
    pub state: RunState,
    pub population: Vec<Individual>,
}

impl<'a> GaRun<'a> {
    pub fn new(problem: &'a Problem, config: &'a GaConfig) -> Result<Self> {
        config.validate()?;
        let (grid, genome_len) = match problem.representation {
            Representation::Real { lower, upper } => {
                if !config.genome_kind.is_binary() {
                    return Err(Error::config("real-valued problems need a binary genome"));
                }
                let grid = GridSpec::new(lower, upper, config.grid_step)?;
                (Some(grid), problem.dimension * bits_per_var(&grid)?)
            }
            Representation::Bits => {
                if !config.genome_kind.is_binary() {
                    return Err(Error::config(format!(
                        "{} is a bit-string problem",
                        problem.id
                    )));
                }
                (None, problem.dimension)
            }
            Representation::Perm => {
                if config.genome_kind != GenomeKind::Permutation {
                    return Err(Error::config(format!(
                        "{} is a permutation problem",
                        problem.id
                    )));
                }
                (None, problem.dimension)
            }
        };
        if genome_len == 0 {
            return Err(Error::config("problem dimension must be >= 1"));
        }
        let min_len = if config.crossover == CrossoverKind::TwoPoint {
            3
        } else {
            2
        };
        if genome_len < min_len {
            return Err(Error::config(format!(
                "{} crossover needs a genome of at least {min_len} genes, got {genome_len}",
                config.crossover
            )));
        }
        let mutation_rate = match config.mutation {
            MutationKind::BitFlip(rate) => rate.resolve(genome_len),
            _ => 0.0,
        };
        Ok(GaRun {
            problem,
            config,
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            grid,
            genome_len,
            mutation_rate,
            state: RunState::new(config),
            population: Vec::with_capacity(config.population_size),
        })
    }

    pub fn genome_len(&self) -> usize {
        self.genome_len
    }

    pub fn mutation_rate(&self) -> f64 {
        self.mutation_rate
    }

    fn decode(&self, genome: &Genome) -> Result<Phenotype> {
        Ok(match self.problem.representation {
            Representation::Real { .. } => {
                let grid = self.grid.as_ref().expect("grid for real problem");
                Phenotype::Real(decode_genome(genome, grid, self.problem.dimension)?)
            }
            Representation::Bits => Phenotype::Bits(genome.bits().expect("binary genome").to_vec()),
            Representation::Perm => {
                Phenotype::Perm(genome.perm().expect("permutation genome").to_vec())
            }
        })
    }

    fn eval_error(&self, genome: &Genome, message: String) -> Error {
        let mut text = genome.to_string();
        if text.len() > 256 {
            text.truncate(256);
            text.push_str("...");
        }
        Error::Evaluation {
            generation: self.state.generation,
            genome: text,
            message,
        }
    }

    /// Evaluate one genome if budget remains. Updates best, trace and the
    /// solved flag. Returns `None` without evaluating when the budget is spent.
    fn evaluate(&mut self, genome: Genome) -> Result<Option<Individual>> {
        if !self.state.budget_left(self.config) {
            return Ok(None);
        }
        let phenotype = self.decode(&genome)?;
        self.state.fes_used += 1;
        let objective = (self.problem.objective)(&phenotype);
        if !objective.is_finite() {
            return Err(self.eval_error(&genome, format!("objective returned {objective}")));
        }
        let violations = match (&self.problem.constraints, &phenotype) {
            (Some(cs), Phenotype::Real(x)) => {
                violations(x, cs).map_err(|m| self.eval_error(&genome, m))?
            }
            _ => Vec::new(),
        };
        let mut ind = Individual {
            genome,
            phenotype,
            objective,
            violations,
            penalized: objective,
            fitness: 0.0,
            error: self.problem.error(objective),
        };
        ind.refresh(
            &self.config.penalty,
            self.state.generation,
            &self.state.adaptive,
            self.problem.optimum,
        );

        let improved = self
            .state
            .best
            .as_ref()
            .is_none_or(|b| ind.is_better_than(b));
        if improved {
            self.state.best = Some(ind.clone());
        }
        self.state.sample_trace(self.config);
        if ind.is_feasible() && ind.error < self.config.stop_error {
            self.state.solved = true;
            self.state.finished = true;
        }
        Ok(Some(ind))
    }

    /// Create and evaluate the initial population.
    pub fn initialize(&mut self) -> Result<()> {
        for _ in 0..self.config.population_size {
            let genome = random_genome(self.config.genome_kind, self.genome_len, &mut self.rng)?;
            match self.evaluate(genome)? {
                Some(ind) => self.population.push(ind),
                None => {
                    self.state.finished = true;
                    break;
                }
            }
            if self.state.finished {
                break;
            }
        }
        if !self.state.budget_left(self.config) {
            self.state.finished = true;
        }
        let err = self.state.best_error(self.config);
        self.state.generation_best.push(err);
        Ok(())
    }

    /// Produce and evaluate one generation.
    pub fn step_generation(&mut self) -> Result<()> {
        if self.state.finished {
            return Ok(());
        }
        let n = self.config.population_size;
        self.state.generation += 1;
        let (penalty, generation, optimum) = (
            self.config.penalty,
            self.state.generation,
            self.problem.optimum,
        );
        for ind in &mut self.population {
            ind.refresh(&penalty, generation, &self.state.adaptive, optimum);
        }

        let fitnesses: Vec<f64> = self.population.iter().map(|i| i.fitness).collect();
        let parents = select(self.config.selection, &fitnesses, n, &mut self.rng)?;
        let mut children = Vec::with_capacity(n + 1);
        for pair in parents.chunks(2) {
            let a = pair[0];
            let b = *pair.get(1).unwrap_or(&a);
            let (c1, c2) = crossover(
                self.config.crossover,
                &self.population[a].genome,
                &self.population[b].genome,
                &mut self.rng,
            )?;
            children.push(c1);
            children.push(c2);
        }
        children.truncate(n);
        for child in &mut children {
            mutate(
                self.config.mutation,
                child,
                self.mutation_rate,
                &mut self.rng,
            )?;
        }

        let mut offspring = Vec::with_capacity(n);
        for child in children {
            match self.evaluate(child)? {
                Some(ind) => offspring.push(ind),
                None => {
                    self.state.finished = true;
                    break;
                }
            }
            if self.state.finished {
                break;
            }
        }
        if self.state.finished {
            // Truncated generation: nothing replaces the population.
            let err = self.state.best_error(self.config);
            self.state.generation_best.push(err);
            return Ok(());
        }

        let next = apply_elitism(
            &self.population,
            offspring,
            self.config.elitism_fraction,
            self.config.elitism_mode,
            |i: &Individual| i.fitness,
            &mut self.rng,
        )?;
        self.population = next;
        if let Some(best_now) = self
            .population
            .iter()
            .max_by(|a, b| a.fitness.total_cmp(&b.fitness))
        {
            let feasible = best_now.is_feasible();
            self.state.adaptive.observe(&self.config.penalty, feasible);
        }
        if !self.state.budget_left(self.config) {
            self.state.finished = true;
        }
        let err = self.state.best_error(self.config);
        self.state.generation_best.push(err);
        Ok(())
    }

    pub fn is_finished(&self) -> bool {
        self.state.finished
    }

    /// Current adaptive penalty weight (1 for non-adaptive penalties).
    pub fn penalty_weight(&self) -> f64 {
        self.state.adaptive.lambda
    }

    pub fn finish(mut self) -> Result<RunResult> {
        let best = self
            .state
            .best
            .take()
            .ok_or_else(|| Error::config("run finished without evaluating any individual"))?;
        let feasible = best.is_feasible();
        let best_error = report_error(best.error, self.config.stop_error);
        self.state.trace.terminal = Some(Terminal {
            fes_used: self.state.fes_used,
            final_error: best_error,
            solved: self.state.solved,
            feasible,
        });
        Ok(RunResult {
            best,
            best_error,
            trace: self.state.trace,
            fes_used: self.state.fes_used,
            generations: self.state.generation,
            solved: self.state.solved,
            feasible_found: feasible,
            generation_best: self.state.generation_best,
        })
    }
}

/// Run the GA to completion. Deterministic in `(problem, config)`.
pub fn run_ga(problem: &Problem, config: &GaConfig) -> Result<RunResult> {
    let mut run = GaRun::new(problem, config)?;
    run.initialize()?;
    while !run.is_finished() {
        run.step_generation()?;
    }
    run.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{BooleanFn, ContinuousFn, Direction, ProblemId};
    use std::sync::Arc;

    fn onemax(n: usize) -> Problem {
        Problem::builtin(ProblemId::Boolean(BooleanFn::OneMax), n, None).unwrap()
    }

    #[test]
    fn checkpoint_thresholds() {
        assert_eq!(checkpoint_fes(100_000, 1), 1000);
        assert_eq!(checkpoint_fes(100_000, 100), 100_000);
        assert_eq!(checkpoint_fes(250, 1), 3);
        assert_eq!(checkpoint_fes(250, 2), 5);
    }

    #[test]
    fn budget_parsing() {
        assert_eq!("unlimited".parse::<Budget>().unwrap(), Budget::Unlimited);
        assert_eq!("2e5".parse::<Budget>().unwrap(), Budget::Limited(200_000));
        assert_eq!("20_000".parse::<Budget>().unwrap(), Budget::Limited(20_000));
        assert!("1.5".parse::<Budget>().is_err());
        assert!("-3".parse::<Budget>().is_err());
    }

    #[test]
    fn minimal_budget_is_one_generation() {
        let p = onemax(20);
        let cfg = GaConfig {
            population_size: 2,
            max_fes: Budget::Limited(2),
            ..GaConfig::boolean()
        };
        let r = run_ga(&p, &cfg).unwrap();
        assert_eq!(r.fes_used, 2);
        assert_eq!(r.generations, 0);
    }

    #[test]
    fn budget_exhausts_mid_generation() {
        let p = Problem::builtin(ProblemId::Continuous(ContinuousFn::Rastrigin), 3, None).unwrap();
        let cfg = GaConfig {
            population_size: 10,
            ..GaConfig::continuous(37)
        };
        let r = run_ga(&p, &cfg).unwrap();
        assert_eq!(r.fes_used, 37);
        assert!(!r.solved);
        let term = r.trace.terminal.unwrap();
        assert_eq!(term.fes_used, 37);
        let fes: Vec<u64> = r.trace.checkpoints.iter().map(|c| c.fes).collect();
        assert_eq!(fes, (1..=37).collect::<Vec<u64>>());
        assert_eq!(r.trace.checkpoints.last().unwrap().pct, Some(100.0));
    }

    #[test]
    fn same_seed_same_run() {
        let p = Problem::builtin(ProblemId::Continuous(ContinuousFn::Ackley), 4, None).unwrap();
        let cfg = GaConfig::continuous(5000).with_seed(99);
        let a = run_ga(&p, &cfg).unwrap();
        let b = run_ga(&p, &cfg).unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.trace, b.trace);
        let s = Problem::builtin(ProblemId::Continuous(ContinuousFn::Zakharov), 4, None).unwrap();
        let cfg = GaConfig::continuous(500).with_seed(99);
        let c = run_ga(&s, &cfg).unwrap();
        let d = run_ga(&s, &cfg.clone().with_seed(100)).unwrap();
        assert_ne!(c.best.genome, d.best.genome);
    }

    #[test]
    fn rejects_inconsistent_configs() {
        let p = onemax(10);
        let bad = [
            GaConfig {
                population_size: 1,
                ..GaConfig::boolean()
            },
            GaConfig {
                max_fes: Budget::Limited(5),
                ..GaConfig::boolean()
            },
            GaConfig {
                elitism_fraction: 1.0,
                ..GaConfig::boolean()
            },
            GaConfig {
                crossover: CrossoverKind::OrderOx1,
                ..GaConfig::boolean()
            },
            GaConfig {
                mutation: MutationKind::Swap,
                ..GaConfig::boolean()
            },
            GaConfig {
                genome_kind: GenomeKind::Permutation,
                ..GaConfig::boolean()
            },
            GaConfig {
                stop_error: -1.0,
                ..GaConfig::boolean()
            },
        ];
        for cfg in bad {
            assert!(run_ga(&p, &cfg).unwrap_err().is_config(), "{cfg:?}");
        }
        let two_point = GaConfig {
            crossover: CrossoverKind::TwoPoint,
            ..GaConfig::boolean()
        };
        assert!(run_ga(&onemax(2), &two_point).unwrap_err().is_config());
        assert!(run_ga(&onemax(1), &GaConfig::boolean())
            .unwrap_err()
            .is_config());
        let real =
            Problem::builtin(ProblemId::Continuous(ContinuousFn::Rastrigin), 2, None).unwrap();
        let cfg = GaConfig {
            grid_step: 0.0,
            ..GaConfig::continuous(100)
        };
        assert!(run_ga(&real, &cfg).unwrap_err().is_config());
    }

    #[test]
    fn non_finite_objective_aborts() {
        let p = Problem::custom(
            "nan",
            8,
            Representation::Bits,
            Direction::Minimize,
            0.0,
            Arc::new(|_: &Phenotype| f64::NAN),
        );
        let cfg = GaConfig {
            max_fes: Budget::Limited(100),
            ..GaConfig::boolean()
        };
        match run_ga(&p, &cfg) {
            Err(Error::Evaluation {
                generation, genome, ..
            }) => {
                assert_eq!(generation, 0);
                assert_eq!(genome.len(), 8);
            }
            other => panic!("expected evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn early_solve_keeps_few_checkpoints() {
        // OneMax on 4 bits with a 10k budget is solved within the first few percent.
        let p = onemax(4);
        let cfg = GaConfig {
            max_fes: Budget::Limited(10_000),
            ..GaConfig::boolean()
        }
        .with_seed(1);
        let r = run_ga(&p, &cfg).unwrap();
        assert!(r.solved);
        assert!(r.fes_used < 100);
        assert!(r.trace.checkpoints.is_empty());
        assert_eq!(r.best_error, 0.0);
    }

    #[test]
    fn unlimited_checkpoints_every_thousand() {
        let p = onemax(200);
        let cfg = GaConfig::boolean().with_seed(3);
        let r = run_ga(&p, &cfg).unwrap();
        assert!(r.solved);
        for (k, c) in r.trace.checkpoints.iter().enumerate() {
            assert_eq!(c.fes, (k as u64 + 1) * 1000);
            assert_eq!(c.pct, None);
        }
        assert_eq!(r.trace.checkpoints.len() as u64, r.fes_used / 1000);
    }

    #[test]
    fn fes_cap_stops_unlimited_runs() {
        let p = Problem::builtin(ProblemId::Boolean(BooleanFn::Trap), 30, None).unwrap();
        let cfg = GaConfig {
            fes_cap: Some(2_000),
            ..GaConfig::boolean()
        };
        let r = run_ga(&p, &cfg).unwrap();
        assert!(!r.solved);
        assert_eq!(r.fes_used, 2_000);
    }

    #[test]
    fn frozen_population_without_variation() {
        // All-ones start is impossible to force, so use a one-individual-type problem:
        // zero mutation and uniform crossover of identical parents keep genomes fixed.
        let p = onemax(6);
        let cfg = GaConfig {
            population_size: 4,
            max_fes: Budget::Limited(40),
            mutation: MutationKind::BitFlip(MutationRate::Fixed(0.0)),
            ..GaConfig::boolean()
        };
        let mut run = GaRun::new(&p, &cfg).unwrap();
        run.initialize().unwrap();
        let same = run.population[0].clone();
        for ind in &mut run.population {
            *ind = same.clone();
        }
        if !run.is_finished() {
            run.step_generation().unwrap();
            assert!(run.population.iter().all(|i| i.genome == same.genome));
        }
    }

    #[test]
    fn permutation_problem_runs() {
        // Minimize the number of positions where p[i] != i.
        let n = 6;
        let p = Problem::custom(
            "sort",
            n,
            Representation::Perm,
            Direction::Minimize,
            0.0,
            Arc::new(|ph: &Phenotype| match ph {
                Phenotype::Perm(p) => {
                    p.iter().enumerate().filter(|(i, v)| *i != **v).count() as f64
                }
                _ => f64::NAN,
            }),
        );
        for mutation in [
            MutationKind::Inversion,
            MutationKind::Swap,
            MutationKind::Shift,
            MutationKind::Movement,
        ] {
            let cfg = GaConfig {
                genome_kind: GenomeKind::Permutation,
                crossover: CrossoverKind::OrderOx1,
                mutation,
                max_fes: Budget::Limited(20_000),
                ..GaConfig::boolean()
            };
            let r = run_ga(&p, &cfg).unwrap();
            assert!(crate::encoding::is_permutation(
                r.best.genome.perm().unwrap()
            ));
            assert!(r.solved, "{mutation} did not sort 6 elements");
        }
    }

    #[test]
    fn constrained_best_is_feasible() {
        let p = Problem::builtin(ProblemId::Co1, 3, None).unwrap();
        let cfg = GaConfig::constrained(3000).with_seed(4);
        let r = run_ga(&p, &cfg).unwrap();
        assert!(r.feasible_found);
        let x = r.best.phenotype.as_real().unwrap();
        let (_, g) = crate::benchmarks::eval_co1(x, &[0.0; 3]).unwrap();
        assert!(g <= 0.0);
    }

    #[test]
    fn adaptive_penalty_tracks_feasibility() {
        // Constraint x0 >= 50 is feasible for a quarter of the box; the optimum of
        // the sphere sits outside it, so best individuals flip between states.
        let cs = crate::fitness::ConstraintSet {
            inequalities: vec![Arc::new(|x: &[f64]| 50.0 - x[0])],
            ..Default::default()
        };
        let p = Problem::custom(
            "sphere",
            2,
            Representation::Real {
                lower: -100.0,
                upper: 100.0,
            },
            Direction::Minimize,
            2500.0,
            Arc::new(|ph: &Phenotype| ph.as_real().unwrap().iter().map(|v| v * v).sum()),
        )
        .with_constraints(cs);
        let kind = PenaltyKind::Adaptive {
            lambda0: 1.0,
            shrink: 2.0,
            grow: 2.0,
            window: 3,
        };
        let cfg = GaConfig {
            penalty: kind,
            grid_step: 1e-3,
            ..GaConfig::constrained(5000)
        };
        let mut run = GaRun::new(&p, &cfg).unwrap();
        run.initialize().unwrap();
        while !run.is_finished() {
            run.step_generation().unwrap();
            let lambda = run.penalty_weight();
            assert!(lambda > 0.0);
            // Always an integer power of two.
            assert_eq!(lambda.log2().fract(), 0.0);
        }
        let r = run.finish().unwrap();
        assert!(r.feasible_found);
        assert!(r.best.phenotype.as_real().unwrap()[0] >= 50.0);
    }
}
