use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{aggregate_fes, CampaignResult, CellResult, ExperimentSpec};
use crate::engine::{Budget, RunTrace};
use crate::error::{Error, Result};

pub const SUMMARY_HEADER: &str = "problem,dimension,max_fes,runs,best,worst,mean,median,std,solved";
pub const FES_SUMMARY_HEADER: &str =
    "problem,dimension,max_fes,runs,solved,min_fes,max_fes_used,mean_fes,median_fes,std_fes";
pub const TRACE_HEADER: &str = "checkpoint_pct,fes,error";

/// Shortest round-trip decimal form (`inf` for infinity).
pub fn format_real(x: f64) -> String {
    format!("{x}")
}

pub fn trace_file_name(label: &str, dimension: usize, budget: Budget, run_index: usize) -> String {
    format!("{label}_{dimension}_{budget}_run{run_index}.csv")
}

/// Create `out/traces` and check that `out` accepts writes.
pub fn prepare_dir(out: &Path) -> Result<()> {
    let traces = out.join("traces");
    fs::create_dir_all(&traces).map_err(|e| Error::io(&traces, e))?;
    let probe = out.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn summary_csv(result: &CampaignResult) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for cell in &result.cells {
        let ok = cell.final_errors().len();
        let _ = write!(
            out,
            "{},{},{},{},",
            cell.label, cell.dimension, cell.budget, ok
        );
        match cell.stats() {
            Some(s) => {
                let fields = [s.best, s.worst, s.mean, s.median, s.std].map(format_real);
                let _ = write!(out, "{}", fields.join(","));
            }
            None => out.push_str(",,,,"),
        }
        let _ = writeln!(out, ",{}", cell.solved());
    }
    out
}

fn fes_summary_csv(result: &CampaignResult) -> String {
    let mut out = format!("{FES_SUMMARY_HEADER}\n");
    for cell in &result.cells {
        let ok = cell.final_errors().len();
        let _ = write!(
            out,
            "{},{},{},{},{},",
            cell.label,
            cell.dimension,
            cell.budget,
            ok,
            cell.solved()
        );
        match aggregate_fes(&cell.fes_to_solve()) {
            Some(s) => {
                let fields = [s.best, s.worst, s.mean, s.median, s.std].map(format_real);
                let _ = writeln!(out, "{}", fields.join(","));
            }
            None => out.push_str(",,,,\n"),
        }
    }
    out
}

/// Trace rows: the checkpoints, then the terminal point if it lies beyond them.
pub fn trace_csv(trace: &RunTrace, budget: Budget) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    let mut last_fes = 0;
    for c in &trace.checkpoints {
        let pct = c.pct.map(format_real).unwrap_or_default();
        let _ = writeln!(out, "{pct},{},{}", c.fes, format_real(c.error));
        last_fes = c.fes;
    }
    if let Some(t) = trace.terminal.filter(|t| t.fes_used > last_fes) {
        let pct = budget
            .limit()
            .map(|max| format_real(t.fes_used as f64 * 100.0 / max as f64))
            .unwrap_or_default();
        let error = if t.feasible {
            t.final_error
        } else {
            f64::INFINITY
        };
        let _ = writeln!(out, "{pct},{},{}", t.fes_used, format_real(error));
    }
    out
}

#[derive(Serialize)]
struct Manifest<'a> {
    generator: String,
    total_runs: usize,
    failed: usize,
    experiment: Vec<ExperimentSpec>,
    cell: Vec<ManifestCell<'a>>,
}

#[derive(Serialize)]
struct ManifestCell<'a> {
    problem: &'a str,
    dimension: usize,
    max_fes: String,
    runs: usize,
    failed: usize,
    /// Seeds by run index, in hex so the full u64 range fits.
    seeds: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failure: Vec<ManifestFailure<'a>>,
}

#[derive(Serialize)]
struct ManifestFailure<'a> {
    run: usize,
    message: &'a str,
}

fn manifest_cell(cell: &CellResult) -> ManifestCell<'_> {
    ManifestCell {
        problem: &cell.label,
        dimension: cell.dimension,
        max_fes: cell.budget.to_string(),
        runs: cell.runs.len(),
        failed: cell.failed(),
        seeds: cell
            .runs
            .iter()
            .map(|r| format!("{:#018x}", r.seed))
            .collect(),
        failure: cell
            .runs
            .iter()
            .filter_map(|r| {
                r.outcome.as_ref().err().map(|m| ManifestFailure {
                    run: r.run_index,
                    message: m,
                })
            })
            .collect(),
    }
}

fn manifest_toml(result: &CampaignResult) -> Result<String> {
    let experiment = result
        .campaign
        .experiment
        .iter()
        .map(ExperimentSpec::resolved)
        .collect::<Result<_>>()?;
    let manifest = Manifest {
        generator: format!("gridga {}", env!("CARGO_PKG_VERSION")),
        total_runs: result.total_runs(),
        failed: result.failed_runs(),
        experiment,
        cell: result.cells.iter().map(manifest_cell).collect(),
    };
    toml::to_string(&manifest)
        .map_err(|e| Error::Harness(format!("cannot serialize manifest: {e}")))
}

/// Write `summary.csv`, `fes_summary.csv`, `manifest.toml` and one trace per completed run.
pub fn write_outputs(result: &CampaignResult, dir: &Path) -> Result<()> {
    if result.cells.is_empty() {
        return Err(Error::Harness("no results to write".into()));
    }
    prepare_dir(dir)?;
    write_file(&dir.join("summary.csv"), &summary_csv(result))?;
    write_file(&dir.join("fes_summary.csv"), &fes_summary_csv(result))?;
    write_file(&dir.join("manifest.toml"), &manifest_toml(result)?)?;
    let traces = dir.join("traces");
    for cell in &result.cells {
        for run in &cell.runs {
            if let Ok(summary) = &run.outcome {
                let name = trace_file_name(&cell.label, cell.dimension, cell.budget, run.run_index);
                write_file(&traces.join(name), &trace_csv(&summary.trace, cell.budget))?;
            }
        }
    }
    Ok(())
}
