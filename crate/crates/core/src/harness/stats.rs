use serde::Serialize;

use crate::error::{Error, Result};

/// Best/worst/mean/median/std over per-run final values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (divisor `n - 1`, 0 for a single value).
    pub std: f64,
    pub count: usize,
}

/// Aggregate final values; anything below `stop_error` counts as 0.
pub fn aggregate(values: &[f64], stop_error: f64) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::Harness(
            "cannot aggregate an empty set of runs".into(),
        ));
    }
    let mut sorted: Vec<f64> = values
        .iter()
        .map(|&v| if v.abs() < stop_error { 0.0 } else { v })
        .collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let std = if n > 1 {
        (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(SummaryStats {
        best: sorted[0],
        worst: sorted[n - 1],
        mean,
        median,
        std,
        count: n,
    })
}

/// Same statistics over FE counts (solved runs only).
pub fn aggregate_fes(fes: &[u64]) -> Option<SummaryStats> {
    let values: Vec<f64> = fes.iter().map(|&f| f as f64).collect();
    aggregate(&values, 0.0).ok()
}
