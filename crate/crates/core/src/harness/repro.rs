use super::{BudgetRule, Campaign, ExperimentSpec, GaTemplate};
use crate::benchmarks::{BooleanFn, ContinuousFn, ProblemId};
use crate::error::{Error, Result};

/// Names accepted by [`builtin_campaign`].
pub const BUILTIN_CAMPAIGNS: [&str; 4] = ["table1", "grid", "table4", "table5"];

const MASTER_SEED: u64 = 2024;
const SCALED_MAX_DIM: usize = 30;
const SCALED_MIN_RUNS: usize = 5;

fn experiment(
    id: ProblemId,
    dimensions: &[usize],
    budgets: &[BudgetRule],
    runs: usize,
) -> ExperimentSpec {
    ExperimentSpec {
        problem: id.name().to_string(),
        label: None,
        dimensions: dimensions.to_vec(),
        budgets: budgets.to_vec(),
        runs,
        master_seed: MASTER_SEED,
        fes_cap: None,
        shift_file: None,
        ga: GaTemplate::default(),
    }
}

fn table1() -> Vec<ExperimentSpec> {
    let budgets = [20_000, 100_000, 200_000].map(BudgetRule::Fixed);
    vec![experiment(ProblemId::Co1, &[10, 30, 50, 100], &budgets, 30)]
}

fn grid() -> Vec<ExperimentSpec> {
    let budgets = [20_000, 100_000, 200_000].map(BudgetRule::Fixed);
    [
        (1e-3, "co1_step1e-3"),
        (1e-4, "co1_step1e-4"),
        (1e-5, "co1_step1e-5"),
    ]
    .into_iter()
    .map(|(step, label)| ExperimentSpec {
        label: Some(label.to_string()),
        ga: GaTemplate {
            grid_step: Some(step),
            ..GaTemplate::default()
        },
        ..experiment(ProblemId::Co1, &[10], &budgets, 30)
    })
    .collect()
}

fn table4() -> Vec<ExperimentSpec> {
    ContinuousFn::ALL
        .iter()
        .map(|&f| {
            experiment(
                ProblemId::Continuous(f),
                &[10, 30, 50, 100],
                &[BudgetRule::PerDimension(10_000)],
                51,
            )
        })
        .collect()
}

fn table5() -> Vec<ExperimentSpec> {
    BooleanFn::ALL
        .iter()
        .map(|&f| {
            experiment(
                ProblemId::Boolean(f),
                &[50, 100, 200, 500, 1000],
                &[BudgetRule::Unlimited],
                51,
            )
        })
        .collect()
}

/// Built-in campaign `name`. `scale > 1` divides run counts (minimum 5)
/// and caps dimensions at 30.
pub fn builtin_campaign(name: &str, scale: usize) -> Result<Campaign> {
    let experiments = match name {
        "table1" => table1(),
        "grid" => grid(),
        "table4" => table4(),
        "table5" => table5(),
        other => {
            return Err(Error::config(format!(
                "unknown built-in campaign '{other}' (expected one of {})",
                BUILTIN_CAMPAIGNS.join(", ")
            )))
        }
    };
    if scale == 0 {
        return Err(Error::config("--scale must be >= 1"));
    }
    let experiment = experiments
        .into_iter()
        .map(|mut e| {
            if scale > 1 {
                e.runs = (e.runs / scale).max(SCALED_MIN_RUNS);
                let mut dims: Vec<usize> = e
                    .dimensions
                    .iter()
                    .map(|&d| d.min(SCALED_MAX_DIM))
                    .collect();
                dims.dedup();
                e.dimensions = dims;
            }
            e
        })
        .collect();
    Ok(Campaign { experiment })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_CAMPAIGNS {
            for scale in [1, 10] {
                builtin_campaign(name, scale).unwrap().validate().unwrap();
            }
        }
        assert!(builtin_campaign("table9", 1).unwrap_err().is_config());
        assert!(builtin_campaign("table1", 0).unwrap_err().is_config());
    }

    #[test]
    fn scaling() {
        let full = builtin_campaign("table4", 1).unwrap();
        assert_eq!(full.experiment.len(), 14);
        assert_eq!(full.experiment[0].runs, 51);
        let scaled = builtin_campaign("table4", 4).unwrap();
        assert_eq!(scaled.experiment[0].runs, 12);
        assert_eq!(scaled.experiment[0].dimensions, vec![10, 30]);
        let tiny = builtin_campaign("table5", 100).unwrap();
        assert_eq!(tiny.experiment[0].runs, 5);
        assert_eq!(tiny.experiment[0].dimensions, vec![30]);
    }
}
