use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn gridga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridga"))
        .args(args)
        .env_remove("GRIDGA_OUT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SPEC: &str = r#"
[[experiment]]
problem = "onemax"
dimensions = [10]
budgets = ["unlimited"]
runs = 1
master_seed = 1
"#;

#[test]
fn list_names_everything() {
    let o = gridga(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in [
        "co1",
        "bent_cigar",
        "hgbat",
        "onemax",
        "trap",
        "tournament",
        "ox1",
        "adaptive",
        "table5",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn single_run_solves_onemax() {
    let o = gridga(&["run", "--problem", "onemax", "--dim", "20", "--seed", "4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("solved       true"));
}

#[test]
fn single_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = gridga(&[
        "run",
        "--problem",
        "f4",
        "--dim",
        "3",
        "--max-fes",
        "2000",
        "--pop",
        "20",
        "--selection",
        "ranked",
        "--crossover",
        "two-point",
        "--mutation-rate",
        "normal",
        "--elitism",
        "0.1",
        "--grid-step",
        "1e-3",
        "--encoding",
        "plain",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with(
        "problem,dimension,max_fes,runs,best,worst,mean,median,std,solved\nrastrigin,3,2000,1,"
    ));
    let trace = fs::read_to_string(out.join("traces/rastrigin_3_2000_run0.csv")).unwrap();
    assert!(trace.starts_with("checkpoint_pct,fes,error\n1,20,"));
    assert_eq!(trace.lines().count(), 101);
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    assert!(manifest.contains("selection = \"ranked\""));
    assert!(manifest.contains("genome_kind = \"plain-binary\""));
}

#[test]
fn configuration_errors_exit_1() {
    for args in [
        vec!["run", "--problem", "nope", "--dim", "3"],
        vec![
            "run",
            "--problem",
            "co1",
            "--dim",
            "3",
            "--selection",
            "best",
        ],
        vec!["run", "--problem", "co1", "--dim", "3", "--grid-step", "0"],
        vec![
            "run",
            "--problem",
            "onemax",
            "--dim",
            "10",
            "--crossover",
            "ox1",
        ],
        vec!["run", "--problem", "rosenbrock", "--dim", "1"],
        vec!["bench", "--spec", "/no/such/spec.toml"],
        vec!["repro", "table9"],
        vec!["frobnicate"],
    ] {
        let o = gridga(&args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn unwritable_output_exits_2_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let spec = dir.path().join("spec.toml");
    fs::write(&spec, SPEC).unwrap();
    let out = blocker.join("sub");
    let o = gridga(&[
        "bench",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!stdout(&o).contains("runs,"));
}

fn bench(spec: &Path, out: &Path, jobs: &str) {
    let o = gridga(&[
        "bench",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--jobs",
        jobs,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bench_is_reproducible_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    fs::write(
        &spec,
        r#"
[[experiment]]
problem = "zakharov"
dimensions = [2, 4]
budgets = [1000, "1000*D"]
runs = 3
master_seed = 11

[[experiment]]
problem = "leadingones"
dimensions = [16]
budgets = ["unlimited"]
runs = 4
"#,
    )
    .unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    bench(&spec, &a, "1");
    bench(&spec, &b, "4");
    for file in ["summary.csv", "fes_summary.csv", "manifest.toml"] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
    let mut names: Vec<_> = fs::read_dir(a.join("traces"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 3 * 4 + 4);
    for name in names {
        assert_eq!(
            fs::read(a.join("traces").join(&name)).unwrap(),
            fs::read(b.join("traces").join(&name)).unwrap()
        );
    }
    let summary = fs::read_to_string(a.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 1 + 4 + 1);
    assert!(summary.contains("\nzakharov,4,4000,3,"));
    assert!(summary.contains("\nleadingones,16,unlimited,4,0,0,0,0,0,4\n"));
}

#[test]
fn out_dir_defaults_to_env() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.toml");
    fs::write(&spec, SPEC).unwrap();
    let out = dir.path().join("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_gridga"))
        .args(["bench", "--spec", spec.to_str().unwrap()])
        .env("GRIDGA_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(out.join("traces/onemax_10_unlimited_run0.csv").exists());
}

#[test]
fn repro_print_spec() {
    let o = gridga(&["repro", "table1", "--scale", "6", "--print-spec"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("problem = \"co1\""));
    assert!(text.contains("runs = 5"));
    assert!(text.contains("dimensions = [10, 30]"));
}
