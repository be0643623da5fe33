use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use gridga::benchmarks::{ContinuousFn, Direction, Phenotype, Problem, ProblemId, Representation};
use gridga::engine::{run_ga, Budget, GaConfig};
use gridga::operators::{CrossoverKind, MutationKind, MutationRate, SelectionKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Wrap a built-in problem so every objective call is counted.
pub fn counting(id: ProblemId, dim: usize) -> (Problem, Arc<AtomicU64>) {
    let mut problem = Problem::builtin(id, dim, None).unwrap();
    let calls = Arc::new(AtomicU64::new(0));
    let inner = Arc::clone(&problem.objective);
    let counter = Arc::clone(&calls);
    problem.objective = Arc::new(move |p: &Phenotype| {
        counter.fetch_add(1, Ordering::Relaxed);
        inner(p)
    });
    (problem, calls)
}

/// Run `n` randomized small configurations; return the first mismatch between
/// `fes_used` and the number of objective calls, if any.
pub fn fes_oracle(n: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids = [
        ProblemId::Co1,
        ProblemId::Continuous(ContinuousFn::Rastrigin),
        ProblemId::Continuous(ContinuousFn::Zakharov),
        "onemax".parse().unwrap(),
        "trap".parse().unwrap(),
    ];
    for case in 0..n {
        let id = ids[rng.gen_range(0..ids.len())];
        let dim = rng.gen_range(3..8);
        let pop = rng.gen_range(2..16);
        let mut config = if id.is_boolean() {
            GaConfig::boolean()
        } else {
            GaConfig::continuous(0)
        };
        if id == ProblemId::Co1 {
            config = GaConfig::constrained(0);
        }
        config.population_size = pop;
        config.grid_step = if id.is_boolean() { 1.0 } else { 1e-3 };
        config.max_fes = if id.is_boolean() && rng.gen_bool(0.5) {
            Budget::Unlimited
        } else {
            Budget::Limited(rng.gen_range(pop as u64..2000))
        };
        config.fes_cap = Some(3000);
        config.selection = [
            SelectionKind::Tournament { size: 2 },
            SelectionKind::Ranked,
            SelectionKind::Roulette,
        ][rng.gen_range(0..3)];
        config.crossover = [
            CrossoverKind::OnePoint,
            CrossoverKind::TwoPoint,
            CrossoverKind::Uniform,
        ][rng.gen_range(0..3)];
        config.mutation = MutationKind::BitFlip(if rng.gen_bool(0.5) {
            MutationRate::Normal
        } else {
            MutationRate::Strong
        });
        config.elitism_fraction = rng.gen_range(0.0..0.5);
        config.seed = rng.gen();
        let (problem, calls) = counting(id, dim);
        let result = run_ga(&problem, &config).map_err(|e| format!("case {case}: {e}"))?;
        let counted = calls.load(Ordering::Relaxed);
        if result.fes_used != counted {
            return Err(format!(
                "case {case} ({id} D{dim}): fes_used {} but {counted} calls",
                result.fes_used
            ));
        }
        if let Some(max) = config.max_fes.limit() {
            if result.fes_used > max {
                return Err(format!(
                    "case {case}: fes_used {} exceeds budget {max}",
                    result.fes_used
                ));
            }
        }
    }
    Ok(())
}

/// A minimization problem with no constraints over `[-5, 5]^dim`.
#[allow(dead_code)]
pub fn sphere(dim: usize) -> Problem {
    Problem::custom(
        "sphere",
        dim,
        Representation::Real {
            lower: -5.0,
            upper: 5.0,
        },
        Direction::Minimize,
        0.0,
        Arc::new(|p: &Phenotype| p.as_real().unwrap().iter().map(|x| x * x).sum()),
    )
}
