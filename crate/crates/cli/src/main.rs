use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gridga::benchmarks::ProblemId;
use gridga::encoding::GenomeKind;
use gridga::engine::{run_ga, Budget};
use gridga::fitness::PenaltyKind;
use gridga::harness::{
    self, builtin_campaign, BudgetRule, Campaign, CampaignResult, CellResult, ExperimentSpec,
    GaTemplate, RunRecord, RunSummary, BUILTIN_CAMPAIGNS,
};
use gridga::operators::{CrossoverKind, MutationKind, SelectionKind};
use gridga::Error;

/// Environment variable naming the default output directory.
const OUT_ENV: &str = "GRIDGA_OUT";
const DEFAULT_OUT: &str = "results";

#[derive(Parser)]
#[command(
    name = "gridga",
    version,
    about = "Grid-encoded binary genetic algorithm and experiment harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List problems and operator names.
    List,
    /// Run the GA once and print the result.
    Run(RunArgs),
    /// Run a campaign described by a TOML spec file.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        /// Output directory (default: $GRIDGA_OUT or ./results).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Run a built-in campaign: table1, grid, table4 or table5.
    Repro {
        name: String,
        /// Divide run counts by this factor (minimum 5 runs) and cap dimensions at 30.
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print the resolved campaign as TOML instead of running it.
        #[arg(long)]
        print_spec: bool,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    dim: usize,
    /// Evaluation budget: a count such as 100000 or 1e5, or `unlimited`.
    #[arg(long)]
    max_fes: Option<Budget>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    pop: Option<usize>,
    /// tournament[:k], ranked or roulette.
    #[arg(long)]
    selection: Option<SelectionKind>,
    /// one-point, two-point, uniform or ox1.
    #[arg(long)]
    crossover: Option<CrossoverKind>,
    /// normal (1/L), strong (3/L), bitflip:<rate>, or a permutation move.
    #[arg(long)]
    mutation_rate: Option<MutationKind>,
    /// Elite fraction of the population.
    #[arg(long)]
    elitism: Option<f64>,
    #[arg(long)]
    grid_step: Option<f64>,
    /// plain, gray or permutation.
    #[arg(long)]
    encoding: Option<GenomeKind>,
    /// none, static:w, dynamic[:c,alpha,beta] or adaptive:l0,shrink,grow,window.
    #[arg(long)]
    penalty: Option<PenaltyKind>,
    #[arg(long)]
    stop_error: Option<f64>,
    /// Hard stop for unlimited budgets.
    #[arg(long)]
    fes_cap: Option<u64>,
    /// CO1 shift vector file (one value per line).
    #[arg(long)]
    shift_file: Option<PathBuf>,
    /// Write summary, trace and manifest files here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_out() -> PathBuf {
    std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
}

fn list() {
    println!("problems:");
    for id in ProblemId::all() {
        let kind = match id {
            ProblemId::Co1 => "constrained".to_string(),
            ProblemId::Continuous(f) => format!(
                "f{}, {}",
                f.number(),
                if f.is_unimodal() {
                    "unimodal"
                } else {
                    "multimodal"
                }
            ),
            ProblemId::Boolean(_) => "boolean".to_string(),
        };
        println!("  {:<18} {kind}", id.name());
    }
    println!("selection:  tournament[:k] ranked roulette");
    println!("crossover:  one-point two-point uniform ox1");
    println!("mutation:   normal strong bitflip:<rate> inversion swap shift movement");
    println!("encoding:   plain gray permutation");
    println!(
        "penalty:    none static:<w> dynamic[:c,alpha,beta] adaptive:<l0>,<shrink>,<grow>,<window>"
    );
    println!("campaigns:  {}", BUILTIN_CAMPAIGNS.join(" "));
}

fn run_once(args: RunArgs) -> Result<bool, Error> {
    let id: ProblemId = args.problem.parse()?;
    let budget = args.max_fes.unwrap_or(if id.is_boolean() {
        Budget::Unlimited
    } else {
        Budget::Limited(10_000 * args.dim as u64)
    });
    let rule = match budget {
        Budget::Limited(n) => BudgetRule::Fixed(n),
        Budget::Unlimited => BudgetRule::Unlimited,
    };
    let spec = ExperimentSpec {
        problem: args.problem.clone(),
        label: None,
        dimensions: vec![args.dim],
        budgets: vec![rule],
        runs: 1,
        master_seed: args.seed,
        fes_cap: args.fes_cap,
        shift_file: args.shift_file,
        ga: GaTemplate {
            population_size: args.pop,
            selection: args.selection,
            crossover: args.crossover,
            mutation: args.mutation_rate,
            elitism_fraction: args.elitism,
            elitism_mode: None,
            genome_kind: args.encoding,
            grid_step: args.grid_step,
            penalty: args.penalty,
            stop_error: args.stop_error,
        },
    };
    spec.validate()?;
    if let Some(out) = &args.out {
        harness::prepare_dir(out)?;
    }
    let problem = spec.build_problem(args.dim)?;
    let config = spec.config(args.dim, rule, args.seed)?;
    let result = run_ga(&problem, &config)?;

    println!("problem      {} D{}", id.name(), args.dim);
    println!("budget       {budget}");
    println!("seed         {}", args.seed);
    println!("fes_used     {}", result.fes_used);
    println!("generations  {}", result.generations);
    println!("error        {}", result.best_error);
    println!("objective    {}", result.best.objective);
    println!("feasible     {}", result.feasible_found);
    println!("solved       {}", result.solved);
    if let Some(x) = result.best.phenotype.as_real().filter(|x| x.len() <= 10) {
        let x: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        println!("x            [{}]", x.join(", "));
    }

    if let Some(out) = &args.out {
        let cell = CellResult {
            label: spec.label(),
            dimension: args.dim,
            budget,
            stop_error: config.stop_error,
            runs: vec![RunRecord {
                run_index: 0,
                seed: args.seed,
                outcome: Ok(RunSummary {
                    final_error: result.best_error,
                    fes_used: result.fes_used,
                    solved: result.solved,
                    feasible: result.feasible_found,
                    trace: result.trace,
                }),
            }],
        };
        let campaign = Campaign {
            experiment: vec![spec],
        };
        harness::write_outputs(
            &CampaignResult {
                campaign,
                cells: vec![cell],
            },
            out,
        )?;
        println!("wrote        {}", out.display());
    }
    Ok(true)
}

fn campaign(campaign: &Campaign, out: &Path, jobs: usize) -> Result<bool, Error> {
    let result = harness::run_to_dir(campaign, out, jobs)?;
    for cell in &result.cells {
        let stats = cell.stats();
        println!(
            "{:<20} D{:<5} {:>10}  runs {:>3}  solved {:>3}  median {}",
            cell.label,
            cell.dimension,
            cell.budget.to_string(),
            cell.final_errors().len(),
            cell.solved(),
            stats
                .map(|s| s.median.to_string())
                .unwrap_or_else(|| "-".into()),
        );
    }
    let failed = result.failed_runs();
    println!(
        "{} runs, {failed} failed; results in {}",
        result.total_runs(),
        out.display()
    );
    if failed > 0 {
        eprintln!("error: {failed} run(s) failed; see manifest.toml");
    }
    Ok(failed == 0)
}

fn dispatch(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::List => {
            list();
            Ok(true)
        }
        Command::Run(args) => run_once(args),
        Command::Bench { spec, out, jobs } => {
            // An unreadable spec file is a configuration problem, not a runtime one.
            let c = Campaign::load(&spec).map_err(|e| match e {
                Error::Io { .. } => Error::Config(e.to_string()),
                e => e,
            })?;
            campaign(&c, &out.unwrap_or_else(default_out), jobs)
        }
        Command::Repro {
            name,
            scale,
            out,
            jobs,
            print_spec,
        } => {
            let c = builtin_campaign(&name, scale)?;
            if print_spec {
                print!("{}", c.to_toml()?);
                return Ok(true);
            }
            campaign(&c, &out.unwrap_or_else(default_out), jobs)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
