use thiserror::Error;

use super::convert::convert_unchecked;
use super::eps::{touched_range, update_with, EpsIndex, EpsKind, EpsRecord, Occupancy};
use crate::model::{Assignment, Instance, Placement, Schedule, SlotSchedule, TEC_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("windows have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("first window must hold an idle slot and second window exactly one job")]
    WrongKinds,
    #[error("windows overlap")]
    Overlapping,
}

/// Lower-bound test: `true` when the move might lower the energy cost.
/// Equality prunes.
pub fn passes_bound(eps_i: &EpsRecord, eps_j: &EpsRecord) -> bool {
    let current = eps_i.sub_tec + eps_j.sub_tec;
    let best_case = eps_i.window_sum + eps_j.sorted_prefix[eps_i.assigned_count];
    current > best_case + TEC_TOLERANCE
}

/// Swaps the job of `eps_j` into the window of `eps_i` and packs the jobs
/// of `eps_i` into the freed window, largest first, each on the cheapest
/// run of free slots (earliest on ties). Returns the new schedule and its
/// change in energy cost. Pruned moves, and moves that would push the
/// makespan up, return the input with delta 0.
pub fn evaluate_eps_move(
    instance: &Instance,
    schedule: &Schedule,
    eps_i: &EpsRecord,
    eps_j: &EpsRecord,
) -> Result<(Schedule, f64), MoveError> {
    if eps_i.length != eps_j.length {
        return Err(MoveError::LengthMismatch(eps_i.length, eps_j.length));
    }
    if eps_i.kind != EpsKind::I || eps_j.kind != EpsKind::J {
        return Err(MoveError::WrongKinds);
    }
    if eps_i.overlaps(eps_j) {
        return Err(MoveError::Overlapping);
    }
    match plan_move(instance, schedule.makespan(instance), eps_i, eps_j) {
        Some(plan) => Ok((
            apply_move(instance, schedule, eps_i, eps_j, plan.packed),
            plan.delta,
        )),
        None => Ok((schedule.clone(), 0.0)),
    }
}

struct MovePlan {
    delta: f64,
    packed: Vec<Assignment>,
}

/// Packing and cost change of a move, or `None` when it is pruned or would
/// end after `makespan`.
fn plan_move(
    instance: &Instance,
    makespan: usize,
    eps_i: &EpsRecord,
    eps_j: &EpsRecord,
) -> Option<MovePlan> {
    if !passes_bound(eps_i, eps_j) || eps_i.end() > makespan {
        return None;
    }
    let mut evicted = eps_i.member_jobs.clone();
    evicted.sort_by(|&a, &b| {
        instance
            .processing_time(b)
            .cmp(&instance.processing_time(a))
            .then(a.cmp(&b))
    });
    let h = eps_j.machine;
    let mut free: Vec<usize> = eps_j.slots().collect();
    let mut packed = Vec::with_capacity(evicted.len());
    let mut packed_cost = 0.0;
    for &job in &evicted {
        let d = instance.processing_time(job);
        let mut best = (f64::INFINITY, 0);
        for i in 0..=free.len() - d {
            let cost: f64 = free[i..i + d].iter().map(|&t| instance.slot_cost(t)).sum();
            if cost < best.0 - TEC_TOLERANCE {
                best = (cost, i);
            }
        }
        let slots: Vec<usize> = free.drain(best.1..best.1 + d).collect();
        packed_cost += instance.rate(h) * best.0;
        packed.push(Assignment::new(job, h, slots));
    }
    Some(MovePlan {
        delta: (eps_i.window_sum + packed_cost) - (eps_i.sub_tec + eps_j.sub_tec),
        packed,
    })
}

fn apply_move(
    instance: &Instance,
    schedule: &Schedule,
    eps_i: &EpsRecord,
    eps_j: &EpsRecord,
    packed: Vec<Assignment>,
) -> Schedule {
    let moved = eps_j.member_jobs[0];
    let mut assignments: Vec<Assignment> = schedule
        .placements()
        .iter()
        .enumerate()
        .filter(|(j, _)| !eps_i.member_jobs.contains(j))
        .map(|(j, pl)| {
            let pl = if j == moved {
                Placement {
                    machine: eps_i.machine,
                    start: eps_i.start,
                }
            } else {
                *pl
            };
            Assignment::contiguous(j, pl.machine, pl.start, instance.processing_time(j))
        })
        .collect();
    assignments.extend(packed);
    convert_unchecked(instance, &SlotSchedule::new(assignments))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EsOptions {
    /// Compare the incrementally updated index with a full rescan after
    /// every accepted move.
    pub verify_index: bool,
    /// Defaults to ten times the horizon.
    pub max_sweeps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EsStats {
    pub moves: usize,
    pub sweeps: usize,
    pub hit_sweep_cap: bool,
    /// Accepted moves after which the index differed from a rescan.
    pub index_mismatches: usize,
    /// Energy cost after each accepted move.
    pub tec_trace: Vec<f64>,
    /// Makespan after each accepted move.
    pub makespan_trace: Vec<usize>,
}

/// Exchange search with first-improvement moves until a full sweep finds
/// none. Never raises the makespan or the energy cost.
pub fn exchange_search(instance: &Instance, schedule: &Schedule, horizon: usize) -> Schedule {
    exchange_search_with(instance, schedule, horizon, EsOptions::default()).0
}

pub fn exchange_search_with(
    instance: &Instance,
    schedule: &Schedule,
    horizon: usize,
    options: EsOptions,
) -> (Schedule, EsStats) {
    let horizon = horizon
        .max(schedule.makespan(instance))
        .min(instance.n_slots());
    let mut ptimes: Vec<usize> = instance.processing_times().to_vec();
    ptimes.sort_unstable();
    ptimes.dedup();
    let p_max = *ptimes.last().unwrap();
    let mut index = EpsIndex::build(instance, schedule, horizon, &ptimes);
    let mut current = schedule.clone();
    let mut stats = EsStats::default();
    let cap = options.max_sweeps.unwrap_or(10 * horizon);

    loop {
        if stats.sweeps == cap {
            log::warn!("exchange search stopped after {cap} sweeps");
            stats.hit_sweep_cap = true;
            break;
        }
        stats.sweeps += 1;
        let Some((next, eps_i, eps_j)) = first_improvement(instance, &current, &index, &ptimes)
        else {
            break;
        };
        current = next;
        stats.moves += 1;
        stats.tec_trace.push(current.tec(instance));
        stats.makespan_trace.push(current.makespan(instance));
        let occ = Occupancy::new(instance, &current, horizon);
        for rec in [&eps_i, &eps_j] {
            update_with(
                &occ,
                &mut index,
                rec.machine,
                touched_range(horizon, p_max, rec.start, rec.end()),
            );
        }
        if options.verify_index && index != EpsIndex::build(instance, &current, horizon, &ptimes) {
            stats.index_mismatches += 1;
        }
    }
    (current, stats)
}

fn first_improvement(
    instance: &Instance,
    schedule: &Schedule,
    index: &EpsIndex,
    ptimes: &[usize],
) -> Option<(Schedule, EpsRecord, EpsRecord)> {
    let makespan = schedule.makespan(instance);
    for &p in ptimes.iter().rev() {
        for key in 0..index.n_keys() {
            let Some(eps_j) = index.j_at(p, key) else {
                continue;
            };
            for eps_i in index.i_records(p) {
                if eps_i.overlaps(eps_j) {
                    continue;
                }
                let Some(plan) = plan_move(instance, makespan, eps_i, eps_j) else {
                    continue;
                };
                if plan.delta < -TEC_TOLERANCE {
                    let next = apply_move(instance, schedule, eps_i, eps_j, plan.packed);
                    return Some((next, eps_i.clone(), eps_j.clone()));
                }
            }
        }
    }
    None
}
