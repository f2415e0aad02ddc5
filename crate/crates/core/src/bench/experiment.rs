use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use thiserror::Error;

use super::io::{format_front_csv, format_sidecar};
use crate::exact::{
    exact_pareto, oracle_pareto, BranchAndBound, ExactError, ExactOptions, ExternalBackend,
    OracleError, SolverBackend,
};
use crate::heuristics::{ch_j_from, sgh, split_greedy_scheduler};
use crate::model::{Front, FrontPoint, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Sgh,
    Sgs,
    SgsEs,
    Ch,
    Exact,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Self::Sgh,
        Self::Sgs,
        Self::SgsEs,
        Self::Ch,
        Self::Exact,
        Self::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sgh => "sgh",
            Self::Sgs => "sgs",
            Self::SgsEs => "sgs-es",
            Self::Ch => "ch",
            Self::Exact => "exact",
            Self::Oracle => "oracle",
        }
    }

    /// Exact methods give the same front every time, so they run once.
    pub fn is_deterministic(self) -> bool {
        matches!(self, Self::Exact | Self::Oracle)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum BackendChoice {
    #[default]
    Builtin,
    External(PathBuf),
}

impl FromStr for BackendChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "builtin" => Ok(Self::Builtin),
            Some(("external", path)) if !path.is_empty() => Ok(Self::External(path.into())),
            _ => Err(format!("expected 'builtin' or 'external:PATH', got '{s}'")),
        }
    }
}

impl BackendChoice {
    pub fn backend(&self) -> Box<dyn SolverBackend> {
        match self {
            Self::Builtin => Box::new(BranchAndBound),
            Self::External(path) => Box::new(ExternalBackend::new(path.clone())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Run `i` uses seed `seed + i`.
    pub seed: u64,
    pub runs: usize,
    pub time_limit: Option<Duration>,
    pub warm_start: bool,
    pub backend: BackendChoice,
    pub k_max: Option<usize>,
}

impl RunConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            seed: 0,
            runs: 1,
            time_limit: None,
            warm_start: false,
            backend: BackendChoice::Builtin,
            k_max: None,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.runs == 0 {
            return Err(ExperimentError::Config("runs must be at least 1".into()));
        }
        if self.time_limit.is_some_and(|t| t.is_zero()) {
            return Err(ExperimentError::Config(
                "time limit must be positive".into(),
            ));
        }
        if self.k_max == Some(0) {
            return Err(ExperimentError::Config("horizon must be positive".into()));
        }
        Ok(())
    }

    fn effective_runs(&self) -> usize {
        if self.algorithm.is_deterministic() {
            1
        } else {
            self.runs
        }
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub index: usize,
    pub seed: u64,
    pub front: Front,
    pub elapsed: Duration,
    /// The exact sweep stopped on its time limit.
    pub truncated: bool,
    /// At least one exact level was given a warm start.
    pub warm_start_used: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub algorithm: Algorithm,
    pub runs: Vec<RunRecord>,
}

fn run_once(
    config: &RunConfig,
    instance: &Instance,
    index: usize,
) -> Result<RunRecord, ExperimentError> {
    let seed = config.seed.wrapping_add(index as u64);
    let k_max = config
        .k_max
        .unwrap_or(instance.n_slots())
        .min(instance.n_slots());
    let started = Instant::now();
    let mut truncated = false;
    let mut warm_start_used = false;
    let front = match config.algorithm {
        Algorithm::Sgh => {
            let points = sgh(instance, k_max, seed)
                .map(|s| FrontPoint::new(s.objectives(instance), Some(s)))
                .into_iter()
                .collect();
            Front::from_points(points)
        }
        Algorithm::Sgs => split_greedy_scheduler(instance, k_max, seed, false),
        Algorithm::SgsEs => split_greedy_scheduler(instance, k_max, seed, true),
        Algorithm::Ch => ch_j_from(instance, k_max, seed),
        Algorithm::Oracle => oracle_pareto(instance)?,
        Algorithm::Exact => {
            let backend = config.backend.backend();
            let options = ExactOptions {
                warm_start: config.warm_start,
                seed,
                time_limit: config.time_limit,
                k_max: config.k_max,
            };
            let outcome = exact_pareto(instance, backend.as_ref(), &options)?;
            truncated = outcome.truncated;
            warm_start_used = outcome
                .levels
                .iter()
                .any(|l| l.warm_start_objective.is_some());
            outcome.front
        }
    };
    Ok(RunRecord {
        index,
        seed,
        front,
        elapsed: started.elapsed(),
        truncated,
        warm_start_used,
    })
}

/// Runs the configured algorithm once per seed `seed, seed+1, ...`, each
/// run on its own worker thread.
pub fn run_experiment(
    config: &RunConfig,
    instance: &Instance,
) -> Result<ExperimentResult, ExperimentError> {
    config.validate()?;
    let results: Vec<Result<RunRecord, ExperimentError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..config.effective_runs())
            .map(|i| scope.spawn(move || run_once(config, instance, i)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    });
    Ok(ExperimentResult {
        algorithm: config.algorithm,
        runs: results.into_iter().collect::<Result<_, _>>()?,
    })
}

pub fn run_file_stem(algorithm: Algorithm, index: usize) -> String {
    format!("{algorithm}_run{index}")
}

/// One row per run: `algorithm,run,seed,points,elapsed_s,truncated,warm_start`.
pub fn format_summary(result: &ExperimentResult) -> String {
    let mut out = String::from("algorithm,run,seed,points,elapsed_s,truncated,warm_start\n");
    for r in &result.runs {
        out.push_str(&format!(
            "{},{},{},{},{:.6},{},{}\n",
            result.algorithm,
            r.index,
            r.seed,
            r.front.len(),
            r.elapsed.as_secs_f64(),
            r.truncated,
            r.warm_start_used
        ));
    }
    out
}

/// Writes `<algo>_run<i>.csv`, its `.schedules` sidecar and
/// `<algo>_summary.csv` into `dir`. Returns the front CSV paths.
pub fn write_experiment(
    result: &ExperimentResult,
    dir: &Path,
) -> Result<Vec<PathBuf>, ExperimentError> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for r in &result.runs {
        let stem = run_file_stem(result.algorithm, r.index);
        let csv = dir.join(format!("{stem}.csv"));
        std::fs::write(&csv, format_front_csv(&r.front))?;
        std::fs::write(
            dir.join(format!("{stem}.schedules")),
            format_sidecar(&r.front),
        )?;
        paths.push(csv);
    }
    std::fs::write(
        dir.join(format!("{}_summary.csv", result.algorithm)),
        format_summary(result),
    )?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::io::{format_front_csv, parse_sidecar};
    use crate::model::Schedule;

    fn three_jobs() -> Instance {
        Instance::new(
            vec![3, 2, 1],
            vec![1.0],
            vec![1.0, 5.0, 2.0, 3.0, 9.0, 4.0, 8.0, 13.0, 7.0, 6.0],
        )
        .unwrap()
    }

    fn six_pairs() -> Instance {
        Instance::new(
            vec![2; 6],
            vec![1.0, 2.0],
            vec![10.0, 1.0, 1.0, 10.0, 1.0, 1.0, 10.0],
        )
        .unwrap()
    }

    #[test]
    fn parse_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("tabu".parse::<Algorithm>().is_err());
        assert_eq!(
            "builtin".parse::<BackendChoice>().unwrap(),
            BackendChoice::Builtin
        );
        assert_eq!(
            "external:/usr/bin/x".parse::<BackendChoice>().unwrap(),
            BackendChoice::External("/usr/bin/x".into())
        );
        assert!("external:".parse::<BackendChoice>().is_err());
    }

    #[test]
    fn invalid_configs() {
        let mut c = RunConfig::new(Algorithm::Sgs);
        c.runs = 0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Algorithm::Sgs);
        c.time_limit = Some(Duration::ZERO);
        assert!(run_experiment(&c, &three_jobs()).is_err());
    }

    #[test]
    fn oracle_on_three_jobs() {
        let mut c = RunConfig::new(Algorithm::Oracle);
        c.runs = 5;
        let res = run_experiment(&c, &three_jobs()).unwrap();
        assert_eq!(res.runs.len(), 1);
        assert_eq!(
            format_front_csv(&res.runs[0].front),
            "makespan,tec\n6,24.000000\n7,23.000000\n"
        );
    }

    #[test]
    fn seeded_runs_repeat() {
        let inst = six_pairs();
        let mut c = RunConfig::new(Algorithm::SgsEs);
        c.runs = 2;
        c.seed = 11;
        let a = run_experiment(&c, &inst).unwrap();
        let b = run_experiment(&c, &inst).unwrap();
        assert_eq!(a.runs.len(), 2);
        assert_eq!(a.runs[1].seed, 12);
        for (x, y) in a.runs.iter().zip(&b.runs) {
            assert_eq!(format_front_csv(&x.front), format_front_csv(&y.front));
        }
    }

    #[test]
    fn exact_with_warm_start() {
        let mut c = RunConfig::new(Algorithm::Exact);
        c.warm_start = true;
        let res = run_experiment(&c, &six_pairs()).unwrap();
        let run = &res.runs[0];
        assert_eq!(format_front_csv(&run.front), "makespan,tec\n6,72.000000\n");
        assert!(run.warm_start_used);
        assert!(!run.truncated);
    }

    #[test]
    fn written_sidecar_reproduces_rows() {
        let inst = three_jobs();
        let dir = tempfile::tempdir().unwrap();
        let mut c = RunConfig::new(Algorithm::Sgs);
        c.runs = 2;
        let res = run_experiment(&c, &inst).unwrap();
        let paths = write_experiment(&res, dir.path()).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(dir.path().join("sgs_summary.csv").exists());
        for p in paths {
            let rows = std::fs::read_to_string(&p).unwrap();
            let side = std::fs::read_to_string(p.with_extension("schedules")).unwrap();
            let mut rebuilt = String::from("makespan,tec\n");
            for e in parse_sidecar(&side).unwrap() {
                let s = Schedule::new(&inst, e.placements.clone()).unwrap();
                let obj = s.objectives(&inst);
                assert_eq!((obj.makespan, obj.tec), (e.makespan, e.tec));
                rebuilt.push_str(&format!("{},{:.6}\n", obj.makespan, obj.tec));
            }
            assert_eq!(rows, rebuilt);
        }
    }
}
