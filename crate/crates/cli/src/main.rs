use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use tousched::bench::{
    emit_eaf, emit_metrics, generate_instance, read_front_csv, read_instance, run_experiment,
    write_experiment, write_instance, Algorithm, BackendChoice, GeneratorParams, RunConfig,
};
use tousched::exact::{import_lp, write_solution, BranchAndBound, SolveLimits, SolverBackend};
use tousched::metrics::{default_reference_point, Point};
use tousched::{pareto_filter, Objectives};

#[derive(Parser)]
#[command(
    name = "tousched",
    version,
    about = "Bi-objective parallel machine scheduling under time-of-use prices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random instance.
    Generate(GenerateArgs),
    /// Compute Pareto fronts for an instance.
    Solve(SolveArgs),
    /// Quality indicators for a set of fronts.
    Metrics(MetricsArgs),
    /// Empirical attainment of query points over a set of fronts.
    Eaf(EafArgs),
    /// Solve an LP file with the built-in solver and write a solution file.
    #[command(hide = true)]
    LpSolve(LpSolveArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = GeneratorParams::DEFAULT_P_MAX)]
    p_max: u32,
    #[arg(long, default_value_t = GeneratorParams::DEFAULT_U_MAX)]
    u_max: u32,
    #[arg(long, default_value_t = GeneratorParams::DEFAULT_C_MAX)]
    c_max: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    algo: Algorithm,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Seconds for the whole exact sweep.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    warm_start: bool,
    /// `builtin` or `external:PATH`.
    #[arg(long, default_value = "builtin")]
    backend: BackendChoice,
    /// First horizon to try.
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    fronts: String,
    /// Reference front; defaults to the non-dominated union of all fronts.
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["MAKESPAN", "TEC"])]
    ref_point: Option<Vec<f64>>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EafArgs {
    #[arg(long)]
    fronts: String,
    #[arg(long)]
    queries: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LpSolveArgs {
    model: PathBuf,
    solution: PathBuf,
    #[arg(long)]
    time_limit: Option<f64>,
}

enum Failure {
    Usage(anyhow::Error),
    Empty(String),
    Runtime(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Empty(_) | Failure::Runtime(_) => 1,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn seconds(value: Option<f64>) -> Result<Option<Duration>, Failure> {
    match value {
        None => Ok(None),
        Some(s) if s > 0.0 && s.is_finite() => Ok(Some(Duration::from_secs_f64(s))),
        Some(s) => Err(usage(anyhow!(
            "time limit must be a positive number of seconds, got {s}"
        ))),
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(runtime)?;
    }
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(runtime)
}

fn generate(args: GenerateArgs) -> Outcome {
    let params = GeneratorParams {
        n: args.n,
        m: args.m,
        k: args.k,
        p_max: args.p_max,
        u_max: args.u_max,
        c_max: args.c_max,
        seed: args.seed,
    };
    if [params.p_max, params.u_max, params.c_max].contains(&0) {
        return Err(usage(anyhow!("range maxima must be positive")));
    }
    let instance = generate_instance(&params).map_err(usage)?;
    write_instance(&instance, &args.out).map_err(runtime)
}

fn solve(args: SolveArgs) -> Outcome {
    let instance = read_instance(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))
        .map_err(usage)?;
    let config = RunConfig {
        algorithm: args.algo,
        seed: args.seed,
        runs: args.runs,
        time_limit: seconds(args.time_limit)?,
        warm_start: args.warm_start,
        backend: args.backend,
        k_max: args.kmax,
    };
    config.validate().map_err(usage)?;
    let result = run_experiment(&config, &instance).map_err(runtime)?;
    write_experiment(&result, &args.out_dir).map_err(runtime)?;
    for run in &result.runs {
        println!(
            "{} run {} seed {}: {} points in {:.3}s{}",
            result.algorithm,
            run.index,
            run.seed,
            run.front.len(),
            run.elapsed.as_secs_f64(),
            if run.truncated { " (time limit)" } else { "" }
        );
    }
    if result.runs.iter().all(|r| r.front.is_empty()) {
        return Err(Failure::Empty(format!(
            "{} found no feasible schedule",
            result.algorithm
        )));
    }
    Ok(())
}

fn read_fronts(pattern: &str) -> Result<Vec<(String, Vec<Point>)>, Failure> {
    let mut paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(usage)?
        .collect::<Result<_, _>>()
        .map_err(runtime)?;
    paths.sort();
    if paths.is_empty() {
        return Err(usage(anyhow!("no files match '{pattern}'")));
    }
    paths
        .iter()
        .map(|p| {
            let label = p
                .file_stem()
                .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into());
            let points = read_front_csv(p)
                .with_context(|| format!("reading {}", p.display()))
                .map_err(usage)?;
            Ok((label, points))
        })
        .collect()
}

fn non_dominated(points: impl IntoIterator<Item = Point>) -> Vec<Point> {
    let objectives: Vec<Objectives> = points
        .into_iter()
        .map(|p| Objectives::new(p[0] as usize, p[1]))
        .collect();
    pareto_filter(&objectives)
        .objectives()
        .into_iter()
        .map(|o| [o.makespan as f64, o.tec])
        .collect()
}

fn metrics(args: MetricsArgs) -> Outcome {
    let fronts = read_fronts(&args.fronts)?;
    let reference = match &args.reference {
        Some(path) => read_front_csv(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(usage)?,
        None => non_dominated(fronts.iter().flat_map(|(_, f)| f.iter().copied())),
    };
    if reference.is_empty() {
        return Err(Failure::Empty("reference front is empty".into()));
    }
    let ref_point = match args.ref_point.as_deref() {
        Some([x, y]) => [*x, *y],
        Some(_) => return Err(usage(anyhow!("--ref-point takes two values"))),
        None => default_reference_point(
            &fronts
                .iter()
                .flat_map(|(_, f)| f.iter().copied())
                .chain(reference.iter().copied())
                .collect::<Vec<_>>(),
        ),
    };
    let csv = emit_metrics(&fronts, &reference, ref_point, 1)
        .map_err(|e| Failure::Empty(e.to_string()))?;
    write_file(&args.out, &csv)
}

fn eaf(args: EafArgs) -> Outcome {
    let runs: Vec<Vec<Point>> = read_fronts(&args.fronts)?
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    let queries = read_front_csv(&args.queries)
        .with_context(|| format!("reading {}", args.queries.display()))
        .map_err(usage)?;
    let csv = emit_eaf(&runs, &queries).map_err(|e| Failure::Empty(e.to_string()))?;
    write_file(&args.out, &csv)
}

fn lp_solve(args: LpSolveArgs) -> Outcome {
    let text = std::fs::read_to_string(&args.model)
        .with_context(|| format!("reading {}", args.model.display()))
        .map_err(usage)?;
    let model = import_lp(&text).map_err(usage)?;
    let limits = SolveLimits {
        time_limit: seconds(args.time_limit)?,
        ..SolveLimits::default()
    };
    let result = BranchAndBound
        .solve(&model, None, &limits)
        .map_err(runtime)?;
    write_file(&args.solution, &write_solution(&model, &result))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Metrics(a) => metrics(a),
        Command::Eaf(a) => eaf(a),
        Command::LpSolve(a) => lp_solve(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(e) | Failure::Runtime(e) => eprintln!("error: {e:#}"),
                Failure::Empty(msg) => eprintln!("{msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}
