use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::convert::convert_unchecked;
use crate::model::{Assignment, Instance, Schedule, SlotSchedule, TEC_TOLERANCE};

/// Free slots of one machine and its cheapest free locations for the
/// processing time currently being placed.
struct MachineState {
    free: Vec<usize>,
    best_cost: f64,
    /// Offsets into `free` of every location tied at `best_cost`.
    best: Vec<usize>,
}

impl MachineState {
    fn refresh(&mut self, instance: &Instance, machine: usize, d: usize) {
        self.best.clear();
        self.best_cost = f64::INFINITY;
        if self.free.len() < d {
            return;
        }
        let mut prefix = Vec::with_capacity(self.free.len() + 1);
        prefix.push(0.0);
        for &t in &self.free {
            prefix.push(prefix.last().unwrap() + instance.slot_cost(t));
        }
        let u = instance.rate(machine);
        let costs: Vec<f64> = (0..=self.free.len() - d)
            .map(|i| u * (prefix[i + d] - prefix[i]))
            .collect();
        self.best_cost = costs.iter().copied().fold(f64::INFINITY, f64::min);
        self.best = (0..costs.len())
            .filter(|&i| costs[i] <= self.best_cost + TEC_TOLERANCE)
            .collect();
    }
}

/// Split-greedy heuristic: places jobs by decreasing processing time on a
/// cheapest free location, where a location may jump over slots already
/// taken by other jobs, then repairs the result into a feasible schedule.
/// Returns `None` when some job finds no free location within `horizon`.
pub fn sgh(instance: &Instance, horizon: usize, seed: u64) -> Option<Schedule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sgh_with_rng(instance, horizon, &mut rng)
}

pub fn sgh_with_rng<R: Rng + ?Sized>(
    instance: &Instance,
    horizon: usize,
    rng: &mut R,
) -> Option<Schedule> {
    let horizon = horizon.min(instance.n_slots());
    if horizon == 0 || instance.max_processing_time() > horizon {
        return None;
    }
    let m = instance.n_machines();
    let mut machines: Vec<MachineState> = (0..m)
        .map(|_| MachineState {
            free: (1..=horizon).collect(),
            best_cost: f64::INFINITY,
            best: Vec::new(),
        })
        .collect();
    let mut order: Vec<usize> = (0..instance.n_jobs()).collect();
    order.sort_by(|&a, &b| {
        instance
            .processing_time(b)
            .cmp(&instance.processing_time(a))
            .then(a.cmp(&b))
    });
    let mut assignments = Vec::with_capacity(order.len());
    let mut current_d = 0;
    for job in order {
        let d = instance.processing_time(job);
        if d != current_d {
            current_d = d;
            for (h, state) in machines.iter_mut().enumerate() {
                state.refresh(instance, h, d);
            }
        }
        let global = machines
            .iter()
            .map(|s| s.best_cost)
            .fold(f64::INFINITY, f64::min);
        if !global.is_finite() {
            return None;
        }
        let tied: Vec<(usize, usize)> = machines
            .iter()
            .enumerate()
            .filter(|(_, s)| s.best_cost <= global + TEC_TOLERANCE)
            .flat_map(|(h, s)| s.best.iter().map(move |&i| (h, i)))
            .collect();
        let (h, i) = if tied.len() == 1 {
            tied[0]
        } else {
            tied[rng.gen_range(0..tied.len())]
        };
        let slots: Vec<usize> = machines[h].free.drain(i..i + d).collect();
        assignments.push(Assignment::new(job, h, slots));
        machines[h].refresh(instance, h, d);
    }
    let split = SlotSchedule::new(assignments);
    debug_assert!(matches!(
        crate::model::classify(instance, &split),
        crate::model::ScheduleClass::Feasible | crate::model::ScheduleClass::Split
    ));
    Some(convert_unchecked(instance, &split))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_31() -> Instance {
        Instance::new(
            vec![2; 6],
            vec![1.0, 2.0],
            vec![10.0, 1.0, 1.0, 10.0, 1.0, 1.0, 10.0],
        )
        .unwrap()
    }

    #[test]
    fn schedules_all_jobs_where_contiguous_greedy_strands_them() {
        let inst = example_31();
        for seed in 0..50 {
            let s = sgh(&inst, 7, seed).expect("feasible schedule exists");
            s.validate(&inst).unwrap();
            let obj = s.objectives(&inst);
            assert!(obj.makespan <= 7);
            assert!(obj.tec >= 72.0 - 1e-9);
        }
    }

    #[test]
    fn job_longer_than_horizon_is_empty() {
        let inst = Instance::new(vec![3], vec![1.0], vec![1.0; 5]).unwrap();
        assert_eq!(sgh(&inst, 2, 0), None);
    }

    #[test]
    fn over_capacity_is_empty() {
        let inst = Instance::new(vec![2, 2], vec![1.0], vec![1.0; 3]).unwrap();
        assert_eq!(sgh(&inst, 3, 0), None);
    }

    #[test]
    fn same_seed_same_schedule() {
        let inst = example_31();
        assert_eq!(sgh(&inst, 7, 11), sgh(&inst, 7, 11));
    }

    #[test]
    fn picks_cheapest_window() {
        let inst = Instance::new(vec![2], vec![1.0], vec![5.0, 1.0, 1.0, 5.0]).unwrap();
        let s = sgh(&inst, 4, 0).unwrap();
        assert_eq!(s.placement(0).start, 2);
    }
}
