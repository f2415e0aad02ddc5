use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::backend::{BackendError, SolveLimits, SolveStatus, SolverBackend};
use super::bnb::Presolved;
use super::formulation::build_f2;
use super::milp::{MilpModel, VarKind, VarRole};
use crate::heuristics::sgh_with_rng;
use crate::model::{
    derive, lower_bound_makespan, Front, FrontPoint, Instance, InstanceError, Placement, Schedule,
    ScheduleError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feasibility {
    Pass,
    /// Total processing exceeds machines times slots.
    FailCapacity,
    /// Too many distinct processing times to fit.
    FailDistinct,
}

/// Largest `n` with `n (n + 1) / 2 <= machines * slots`.
pub fn distinct_ptime_bound(n_machines: usize, n_slots: usize) -> usize {
    let cap = n_machines as u128 * n_slots as u128;
    // exact integer form of floor((sqrt(1 + 8 cap) - 1) / 2)
    let mut n = (((1.0 + 8.0 * cap as f64).sqrt() - 1.0) / 2.0) as u128;
    while n * (n + 1) / 2 > cap {
        n -= 1;
    }
    while (n + 1) * (n + 2) / 2 <= cap {
        n += 1;
    }
    n as usize
}

/// Cheap conditions every feasible instance meets. `Pass` does not
/// guarantee a schedule exists.
pub fn necessary_feasibility(instance: &Instance) -> Feasibility {
    if instance.total_processing() > instance.n_machines() * instance.n_slots() {
        return Feasibility::FailCapacity;
    }
    let distinct: BTreeSet<usize> = instance.processing_times().iter().copied().collect();
    if distinct.len() > distinct_ptime_bound(instance.n_machines(), instance.n_slots()) {
        return Feasibility::FailDistinct;
    }
    Feasibility::Pass
}

/// Set window variables `(ptime, machine, start)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct YValues {
    pub ones: BTreeSet<(usize, usize, usize)>,
}

impl YValues {
    pub fn from_solution(model: &MilpModel, values: &[f64]) -> Self {
        let ones = model
            .variables
            .iter()
            .zip(values)
            .filter(|(_, &x)| x > 0.5)
            .filter_map(|(v, _)| match v.role {
                VarRole::Window {
                    ptime,
                    machine,
                    start,
                } => Some((ptime, machine, start)),
                _ => None,
            })
            .collect();
        Self { ones }
    }

    /// One value per model variable; continuous ones take the values the
    /// window choice implies.
    pub fn to_model_values(&self, model: &MilpModel) -> Result<Vec<f64>, BackendError> {
        let mut values: Vec<f64> = model
            .variables
            .iter()
            .map(|v| match v.role {
                VarRole::Window {
                    ptime,
                    machine,
                    start,
                } if v.kind == VarKind::Binary && self.ones.contains(&(ptime, machine, start)) => {
                    1.0
                }
                _ => 0.0,
            })
            .collect();
        let p = Presolved::new(model)?;
        values = p.recover(&p.bits_from_values(&values));
        Ok(values)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("{got} windows of length {ptime}, but {expected} jobs have that processing time")]
    Cardinality {
        ptime: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Assigns jobs to the set windows; jobs of equal processing time are
/// consumed in ascending index order, windows in `(machine, start)` order.
pub fn schedule_from_y(instance: &Instance, y: &YValues) -> Result<Schedule, GenerateError> {
    let dd = derive(instance, instance.n_slots()).expect("full horizon is valid");
    let mut placements = vec![
        Placement {
            machine: 0,
            start: 0
        };
        instance.n_jobs()
    ];
    for &d in dd.distinct_ptimes.iter().chain(y.ones.iter().map(|w| &w.0)) {
        let windows: Vec<(usize, usize)> = y
            .ones
            .iter()
            .filter(|w| w.0 == d)
            .map(|&(_, h, t)| (h, t))
            .collect();
        let jobs = dd.jobs_with(d);
        if windows.len() != jobs.len() {
            return Err(GenerateError::Cardinality {
                ptime: d,
                expected: jobs.len(),
                got: windows.len(),
            });
        }
        for (&job, &(machine, start)) in jobs.iter().zip(&windows) {
            placements[job] = Placement { machine, start };
        }
    }
    Ok(Schedule::new(instance, placements)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("schedule makespan {makespan} exceeds horizon {horizon}")]
pub struct WarmStartError {
    pub makespan: usize,
    pub horizon: usize,
}

pub fn warm_start_from_schedule(
    instance: &Instance,
    schedule: &Schedule,
    horizon: usize,
) -> Result<YValues, WarmStartError> {
    let makespan = schedule.makespan(instance);
    if makespan > horizon {
        return Err(WarmStartError { makespan, horizon });
    }
    let ones = schedule
        .placements()
        .iter()
        .enumerate()
        .map(|(j, pl)| (instance.processing_time(j), pl.machine, pl.start))
        .collect();
    Ok(YValues { ones })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExactOptions {
    /// Seed each level with an SGH schedule.
    pub warm_start: bool,
    pub seed: u64,
    /// Budget for the whole sweep.
    pub time_limit: Option<Duration>,
    /// First horizon; defaults to the instance's slot count.
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub horizon: usize,
    pub status: SolveStatus,
    pub optimum: Option<f64>,
    pub warm_start_objective: Option<f64>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome {
    pub front: Front,
    /// A solve hit the time limit; the front may be incomplete.
    pub truncated: bool,
    pub levels: Vec<LevelRecord>,
}

#[derive(Debug, Error)]
pub enum ExactError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("solver returned an unusable assignment: {0}")]
    Reconstruct(#[from] GenerateError),
}

/// Epsilon-constraint sweep: minimise the energy cost under horizon `K`,
/// then under one slot less than the makespan found, until the horizon
/// drops below the makespan lower bound or a level is infeasible.
pub fn exact_pareto(
    instance: &Instance,
    backend: &dyn SolverBackend,
    options: &ExactOptions,
) -> Result<ExactOutcome, ExactError> {
    let mut outcome = ExactOutcome {
        front: Front::default(),
        truncated: false,
        levels: Vec::new(),
    };
    if necessary_feasibility(instance) != Feasibility::Pass {
        return Ok(outcome);
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let k_lower = lower_bound_makespan(instance);
    let mut horizon = options
        .k_max
        .unwrap_or(instance.n_slots())
        .min(instance.n_slots());
    let mut points = Vec::new();
    while horizon >= k_lower && horizon > 0 {
        let model = build_f2(instance, horizon, true)?;
        let warm = if options.warm_start {
            match sgh_with_rng(instance, horizon, &mut rng) {
                Some(s) => {
                    let y = warm_start_from_schedule(instance, &s, horizon)
                        .expect("SGH respects its horizon");
                    Some(y.to_model_values(&model)?)
                }
                None => None,
            }
        } else {
            None
        };
        let limits = SolveLimits {
            time_limit: options
                .time_limit
                .map(|t| t.saturating_sub(started.elapsed())),
            ..SolveLimits::default()
        };
        let result = backend.solve(&model, warm.as_deref(), &limits)?;
        outcome.levels.push(LevelRecord {
            horizon,
            status: result.status,
            optimum: result
                .objective
                .filter(|_| result.status == SolveStatus::Optimal),
            warm_start_objective: result.warm_start_objective,
            nodes: result.nodes,
        });
        match result.status {
            SolveStatus::Infeasible => break,
            SolveStatus::TimeLimit => {
                outcome.truncated = true;
                break;
            }
            SolveStatus::Optimal => {}
        }
        let values = result
            .values
            .ok_or_else(|| BackendError::Solution("optimal status without values".into()))?;
        let schedule = schedule_from_y(instance, &YValues::from_solution(&model, &values))?;
        let objectives = schedule.objectives(instance);
        points.push(FrontPoint::new(objectives, Some(schedule)));
        horizon = objectives.makespan - 1;
    }
    outcome.front = Front::from_points(points);
    Ok(outcome)
}
