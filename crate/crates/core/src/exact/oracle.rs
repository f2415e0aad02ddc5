use thiserror::Error;

use crate::model::{Front, FrontPoint, Instance, Objectives, Placement, Schedule};

/// Size guard for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_jobs: usize,
    /// Bound on machines times slots.
    pub max_machine_slots: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self {
            max_jobs: 6,
            max_machine_slots: 24,
        }
    }
}

impl OracleLimits {
    pub fn unlimited() -> Self {
        Self {
            max_jobs: usize::MAX,
            max_machine_slots: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large to enumerate: {n_jobs} jobs, {machine_slots} machine slots")]
    TooLarge { n_jobs: usize, machine_slots: usize },
}

/// Cheapest schedule for every exact makespan, found by enumeration.
#[derive(Debug, Clone)]
pub struct OracleTable {
    best: Vec<Option<(f64, Schedule)>>,
}

impl OracleTable {
    /// Least energy cost among schedules finishing by `horizon`.
    pub fn min_tec_within(&self, horizon: usize) -> Option<f64> {
        self.best
            .iter()
            .take(horizon + 1)
            .flatten()
            .map(|(tec, _)| *tec)
            .min_by(f64::total_cmp)
    }

    pub fn best_at(&self, makespan: usize) -> Option<&(f64, Schedule)> {
        self.best.get(makespan)?.as_ref()
    }

    pub fn front(&self) -> Front {
        Front::from_points(
            self.best
                .iter()
                .enumerate()
                .filter_map(|(c, e)| {
                    e.as_ref()
                        .map(|(tec, s)| FrontPoint::new(Objectives::new(c, *tec), Some(s.clone())))
                })
                .collect(),
        )
    }
}

struct Enumerator<'a> {
    instance: &'a Instance,
    order: Vec<usize>,
    busy: Vec<Vec<bool>>,
    placements: Vec<Placement>,
    best: Vec<Option<(f64, Schedule)>>,
}

impl Enumerator<'_> {
    fn go(&mut self, depth: usize, makespan: usize, tec: f64) {
        if depth == self.order.len() {
            let slot = &mut self.best[makespan];
            if slot.as_ref().is_none_or(|(t, _)| tec < *t) {
                *slot = Some((
                    tec,
                    Schedule::from_placements_unchecked(self.placements.clone()),
                ));
            }
            return;
        }
        let inst = self.instance;
        let job = self.order[depth];
        let p = inst.processing_time(job);
        let k = inst.n_slots();
        // jobs with equal processing times are interchangeable: keep them in placement order
        let floor = (depth > 0 && inst.processing_time(self.order[depth - 1]) == p)
            .then(|| self.placements[self.order[depth - 1]]);
        for h in 0..inst.n_machines() {
            for t in 1..=k + 1 - p {
                let here = Placement {
                    machine: h,
                    start: t,
                };
                if floor.is_some_and(|f| here <= f) {
                    continue;
                }
                if self.busy[h][t - 1..t - 1 + p].iter().any(|&b| b) {
                    continue;
                }
                self.busy[h][t - 1..t - 1 + p]
                    .iter_mut()
                    .for_each(|b| *b = true);
                self.placements[job] = here;
                let cost = inst.window_cost(h, t, p);
                self.go(depth + 1, makespan.max(t + p - 1), tec + cost);
                self.busy[h][t - 1..t - 1 + p]
                    .iter_mut()
                    .for_each(|b| *b = false);
            }
        }
    }
}

pub fn oracle_table(instance: &Instance, limits: OracleLimits) -> Result<OracleTable, OracleError> {
    let machine_slots = instance.n_machines() * instance.n_slots();
    if instance.n_jobs() > limits.max_jobs || machine_slots > limits.max_machine_slots {
        return Err(OracleError::TooLarge {
            n_jobs: instance.n_jobs(),
            machine_slots,
        });
    }
    let mut order: Vec<usize> = (0..instance.n_jobs()).collect();
    order.sort_by_key(|&j| (std::cmp::Reverse(instance.processing_time(j)), j));
    let mut e = Enumerator {
        instance,
        order,
        busy: vec![vec![false; instance.n_slots()]; instance.n_machines()],
        placements: vec![
            Placement {
                machine: 0,
                start: 0
            };
            instance.n_jobs()
        ],
        best: vec![None; instance.n_slots() + 1],
    };
    if instance.total_processing() <= machine_slots {
        e.go(0, 0, 0.0);
    }
    Ok(OracleTable { best: e.best })
}

/// Exact front by exhaustive enumeration, refused beyond the default
/// size guard.
pub fn oracle_pareto(instance: &Instance) -> Result<Front, OracleError> {
    oracle_pareto_with(instance, OracleLimits::default())
}

pub fn oracle_pareto_with(instance: &Instance, limits: OracleLimits) -> Result<Front, OracleError> {
    Ok(oracle_table(instance, limits)?.front())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_jobs_front() {
        let inst = Instance::new(
            vec![3, 2, 1],
            vec![1.0],
            vec![1.0, 5.0, 2.0, 3.0, 9.0, 4.0, 8.0, 13.0, 7.0, 6.0],
        )
        .unwrap();
        let f = oracle_pareto(&inst).unwrap();
        assert_eq!(
            f.objectives(),
            vec![Objectives::new(6, 24.0), Objectives::new(7, 23.0)]
        );
        for p in f.points() {
            assert_eq!(p.schedule.as_ref().unwrap().objectives(&inst), p.objectives);
        }
    }

    #[test]
    fn single_unit_job() {
        let inst = Instance::new(vec![1], vec![1.0], vec![3.0, 1.0, 2.0]).unwrap();
        let f = oracle_pareto(&inst).unwrap();
        assert_eq!(
            f.objectives(),
            vec![Objectives::new(1, 3.0), Objectives::new(2, 1.0)]
        );
    }

    #[test]
    fn over_capacity_is_empty() {
        let inst = Instance::new(vec![2, 2], vec![1.0], vec![1.0; 3]).unwrap();
        assert!(oracle_pareto(&inst).unwrap().is_empty());
    }

    #[test]
    fn guard_refuses_large_instances() {
        let inst = Instance::new(vec![1; 7], vec![1.0], vec![1.0; 7]).unwrap();
        assert!(oracle_pareto(&inst).is_err());
        assert!(oracle_pareto_with(&inst, OracleLimits::unlimited()).is_ok());
    }

    #[test]
    fn example_31_front() {
        let inst = Instance::new(
            vec![2; 6],
            vec![1.0, 2.0],
            vec![10.0, 1.0, 1.0, 10.0, 1.0, 1.0, 10.0],
        )
        .unwrap();
        let f = oracle_pareto(&inst).unwrap();
        assert_eq!(f.objectives(), vec![Objectives::new(6, 72.0)]);
    }
}
