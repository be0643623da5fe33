//! Experiment campaigns: many seeded runs per (problem, dimension, budget)
//! cell, dispatched over a thread pool and reported as CSV files.

mod output;
mod repro;
mod spec;
mod stats;

use std::path::Path;

use rayon::prelude::*;

use crate::engine::{run_ga, Budget, RunTrace};
use crate::error::{Error, Result};

pub use output::{format_real, prepare_dir, trace_csv, trace_file_name, write_outputs};
pub use repro::{builtin_campaign, BUILTIN_CAMPAIGNS};
pub use spec::{preset_for, BudgetRule, Campaign, ExperimentSpec, GaTemplate, DEFAULT_FES_CAP};
pub use stats::{aggregate, aggregate_fes, SummaryStats};

/// Outcome of a single run that completed.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub final_error: f64,
    pub fes_used: u64,
    pub solved: bool,
    pub feasible: bool,
    pub trace: RunTrace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run_index: usize,
    pub seed: u64,
    /// `Err` holds the message of a run that aborted.
    pub outcome: std::result::Result<RunSummary, String>,
}

/// All runs of one (experiment, dimension, budget) combination.
#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub label: String,
    pub dimension: usize,
    pub budget: Budget,
    pub stop_error: f64,
    pub runs: Vec<RunRecord>,
}

impl CellResult {
    pub fn completed(&self) -> impl Iterator<Item = &RunSummary> {
        self.runs.iter().filter_map(|r| r.outcome.as_ref().ok())
    }

    pub fn failed(&self) -> usize {
        self.runs.iter().filter(|r| r.outcome.is_err()).count()
    }

    pub fn final_errors(&self) -> Vec<f64> {
        self.completed().map(|r| r.final_error).collect()
    }

    pub fn solved(&self) -> usize {
        self.completed().filter(|r| r.solved).count()
    }

    /// FEs used by the solved runs.
    pub fn fes_to_solve(&self) -> Vec<u64> {
        self.completed()
            .filter(|r| r.solved)
            .map(|r| r.fes_used)
            .collect()
    }

    pub fn stats(&self) -> Option<SummaryStats> {
        aggregate(&self.final_errors(), self.stop_error).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignResult {
    pub campaign: Campaign,
    pub cells: Vec<CellResult>,
}

impl CampaignResult {
    pub fn failed_runs(&self) -> usize {
        self.cells.iter().map(CellResult::failed).sum()
    }

    pub fn total_runs(&self) -> usize {
        self.cells.iter().map(|c| c.runs.len()).sum()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Seed of one run; depends only on the cell coordinates, never on scheduling.
pub fn run_seed(
    master_seed: u64,
    label: &str,
    dimension: usize,
    budget: Budget,
    run_index: usize,
) -> u64 {
    let budget_code = budget.limit().unwrap_or(u64::MAX);
    [
        fnv1a(label),
        dimension as u64,
        budget_code,
        run_index as u64,
    ]
    .into_iter()
    .fold(splitmix64(master_seed), |acc, part| splitmix64(acc ^ part))
}

struct Task {
    cell: usize,
    experiment: usize,
    dimension: usize,
    rule: BudgetRule,
    run_index: usize,
    seed: u64,
}

fn execute(spec: &ExperimentSpec, task: &Task) -> std::result::Result<RunSummary, String> {
    let run = || -> Result<RunSummary> {
        let problem = spec.build_problem(task.dimension)?;
        let config = spec.config(task.dimension, task.rule, task.seed)?;
        let result = run_ga(&problem, &config)?;
        Ok(RunSummary {
            final_error: result.best_error,
            fes_used: result.fes_used,
            solved: result.solved,
            feasible: result.feasible_found,
            trace: result.trace,
        })
    };
    run().map_err(|e| e.to_string())
}

/// Run every cell of `campaign` on `jobs` worker threads.
///
/// Results do not depend on `jobs`. A run that fails is recorded in its cell
/// and the campaign carries on.
pub fn run_campaign(campaign: &Campaign, jobs: usize) -> Result<CampaignResult> {
    run_campaign_with(campaign, jobs, execute)
}

fn run_campaign_with<F>(campaign: &Campaign, jobs: usize, exec: F) -> Result<CampaignResult>
where
    F: Fn(&ExperimentSpec, &Task) -> std::result::Result<RunSummary, String> + Sync,
{
    campaign.validate()?;
    if jobs == 0 {
        return Err(Error::config("--jobs must be >= 1"));
    }
    let mut cells = Vec::new();
    let mut tasks = Vec::new();
    for (experiment, spec) in campaign.experiment.iter().enumerate() {
        let label = spec.label();
        let stop_error = spec
            .ga
            .resolved(spec.problem_id()?)
            .stop_error
            .unwrap_or_default();
        for &dimension in &spec.dimensions {
            for &rule in &spec.budgets {
                let budget = rule.resolve(dimension);
                let cell = cells.len();
                cells.push(CellResult {
                    label: label.clone(),
                    dimension,
                    budget,
                    stop_error,
                    runs: Vec::new(),
                });
                for run_index in 0..spec.runs {
                    let seed = run_seed(spec.master_seed, &label, dimension, budget, run_index);
                    tasks.push(Task {
                        cell,
                        experiment,
                        dimension,
                        rule,
                        run_index,
                        seed,
                    });
                }
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Harness(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<_> = pool.install(|| {
        tasks
            .par_iter()
            .map(|t| exec(&campaign.experiment[t.experiment], t))
            .collect()
    });
    for (task, outcome) in tasks.iter().zip(outcomes) {
        cells[task.cell].runs.push(RunRecord {
            run_index: task.run_index,
            seed: task.seed,
            outcome,
        });
    }
    Ok(CampaignResult {
        campaign: campaign.clone(),
        cells,
    })
}

/// Validate, check that `out` is writable, run, then write all output files.
pub fn run_to_dir(campaign: &Campaign, out: &Path, jobs: usize) -> Result<CampaignResult> {
    campaign.validate()?;
    output::prepare_dir(out)?;
    let result = run_campaign(campaign, jobs)?;
    write_outputs(&result, out)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Campaign {
        Campaign::parse(
            r#"
[[experiment]]
problem = "onemax"
dimensions = [12, 16]
budgets = [400, "unlimited"]
runs = 4
master_seed = 5
"#,
        )
        .unwrap()
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a = run_seed(1, "co1", 10, Budget::Limited(20_000), 0);
        assert_eq!(a, run_seed(1, "co1", 10, Budget::Limited(20_000), 0));
        let others = [
            run_seed(2, "co1", 10, Budget::Limited(20_000), 0),
            run_seed(1, "co2", 10, Budget::Limited(20_000), 0),
            run_seed(1, "co1", 30, Budget::Limited(20_000), 0),
            run_seed(1, "co1", 10, Budget::Limited(100_000), 0),
            run_seed(1, "co1", 10, Budget::Unlimited, 0),
            run_seed(1, "co1", 10, Budget::Limited(20_000), 1),
        ];
        assert!(others.iter().all(|&s| s != a));
    }

    #[test]
    fn job_count_does_not_change_results() {
        let one = run_campaign(&small(), 1).unwrap();
        let four = run_campaign(&small(), 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.cells.len(), 4);
        assert_eq!(one.total_runs(), 16);
        assert_eq!(one.failed_runs(), 0);
        for cell in &one.cells {
            let idx: Vec<usize> = cell.runs.iter().map(|r| r.run_index).collect();
            assert_eq!(idx, vec![0, 1, 2, 3]);
        }
        assert!(one
            .cells
            .iter()
            .filter(|c| c.budget == Budget::Unlimited)
            .all(|c| c.solved() == 4));
        assert!(run_campaign(&small(), 0).unwrap_err().is_config());
    }

    #[test]
    fn failed_runs_are_recorded() {
        let result = run_campaign_with(&small(), 3, |spec, task| {
            if task.run_index == 1 {
                Err("injected".into())
            } else {
                execute(spec, task)
            }
        })
        .unwrap();
        assert_eq!(result.failed_runs(), 4);
        for cell in &result.cells {
            assert_eq!(cell.failed(), 1);
            assert_eq!(cell.final_errors().len(), 3);
            assert_eq!(cell.runs[1].outcome, Err("injected".to_string()));
        }
    }
}
