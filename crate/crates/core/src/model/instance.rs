use thiserror::Error;

/// Errors raised when instance data violates the problem invariants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("instance needs at least one job, one machine and one slot")]
    Empty,
    #[error("job {job} has processing time {ptime}, outside [1, {n_slots}]")]
    ProcessingTime {
        job: usize,
        ptime: usize,
        n_slots: usize,
    },
    #[error("machine {machine} has invalid consumption rate {rate}")]
    Rate { machine: usize, rate: f64 },
    #[error("slot {slot} has invalid cost {cost}")]
    SlotCost { slot: usize, cost: f64 },
    #[error("horizon {horizon} outside [1, {n_slots}]")]
    Horizon { horizon: usize, n_slots: usize },
}

/// A problem instance: jobs with integer processing times, identical
/// machines with energy consumption rates, and per-slot energy prices.
///
/// Jobs and machines are indexed from 0. Slots are indexed from 1 to `K`,
/// so `slot_cost(t)` is the price of slot `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    processing_times: Vec<usize>,
    consumption_rates: Vec<f64>,
    slot_costs: Vec<f64>,
}

impl Instance {
    pub fn new(
        processing_times: Vec<usize>,
        consumption_rates: Vec<f64>,
        slot_costs: Vec<f64>,
    ) -> Result<Self, InstanceError> {
        if processing_times.is_empty() || consumption_rates.is_empty() || slot_costs.is_empty() {
            return Err(InstanceError::Empty);
        }
        let n_slots = slot_costs.len();
        for (job, &ptime) in processing_times.iter().enumerate() {
            if ptime == 0 || ptime > n_slots {
                return Err(InstanceError::ProcessingTime {
                    job,
                    ptime,
                    n_slots,
                });
            }
        }
        for (machine, &rate) in consumption_rates.iter().enumerate() {
            if !(rate.is_finite() && rate >= 0.0) {
                return Err(InstanceError::Rate { machine, rate });
            }
        }
        for (i, &cost) in slot_costs.iter().enumerate() {
            if !(cost.is_finite() && cost >= 0.0) {
                return Err(InstanceError::SlotCost { slot: i + 1, cost });
            }
        }
        Ok(Self {
            processing_times,
            consumption_rates,
            slot_costs,
        })
    }

    pub fn n_jobs(&self) -> usize {
        self.processing_times.len()
    }

    pub fn n_machines(&self) -> usize {
        self.consumption_rates.len()
    }

    pub fn n_slots(&self) -> usize {
        self.slot_costs.len()
    }

    pub fn processing_times(&self) -> &[usize] {
        &self.processing_times
    }

    pub fn processing_time(&self, job: usize) -> usize {
        self.processing_times[job]
    }

    pub fn consumption_rates(&self) -> &[f64] {
        &self.consumption_rates
    }

    pub fn rate(&self, machine: usize) -> f64 {
        self.consumption_rates[machine]
    }

    pub fn slot_costs(&self) -> &[f64] {
        &self.slot_costs
    }

    /// Price of slot `t` (1-based).
    pub fn slot_cost(&self, t: usize) -> f64 {
        self.slot_costs[t - 1]
    }

    pub fn total_processing(&self) -> usize {
        self.processing_times.iter().sum()
    }

    pub fn max_processing_time(&self) -> usize {
        self.processing_times.iter().copied().max().unwrap_or(0)
    }

    /// Energy cost of running a job on `machine` during slots `start..start+len`.
    pub fn window_cost(&self, machine: usize, start: usize, len: usize) -> f64 {
        let sum: f64 = self.slot_costs[start - 1..start - 1 + len].iter().sum();
        self.rate(machine) * sum
    }

    pub(crate) fn check_horizon(&self, horizon: usize) -> Result<(), InstanceError> {
        if horizon == 0 || horizon > self.n_slots() {
            return Err(InstanceError::Horizon {
                horizon,
                n_slots: self.n_slots(),
            });
        }
        Ok(())
    }
}

/// `max(floor(sum p / M), max p)`: no schedule can finish earlier.
pub fn lower_bound_makespan(instance: &Instance) -> usize {
    let by_load = instance.total_processing() / instance.n_machines();
    by_load.max(instance.max_processing_time())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_processing_time_beyond_horizon() {
        let err = Instance::new(vec![4], vec![1.0], vec![1.0; 3]).unwrap_err();
        assert!(matches!(
            err,
            InstanceError::ProcessingTime {
                job: 0,
                ptime: 4,
                ..
            }
        ));
        assert!(Instance::new(vec![0], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn rejects_negative_prices_and_empty_sets() {
        assert!(Instance::new(vec![1], vec![-1.0], vec![1.0]).is_err());
        assert!(Instance::new(vec![1], vec![1.0], vec![f64::NAN]).is_err());
        assert_eq!(
            Instance::new(vec![], vec![1.0], vec![1.0]),
            Err(InstanceError::Empty)
        );
    }

    #[test]
    fn lower_bound_examples() {
        let inst = Instance::new(vec![2, 9, 9, 10], vec![1.0; 3], vec![1.0; 10]).unwrap();
        assert_eq!(lower_bound_makespan(&inst), 10);
        let inst = Instance::new(vec![3], vec![1.0], vec![1.0; 5]).unwrap();
        assert_eq!(lower_bound_makespan(&inst), 3);
        let inst = Instance::new(vec![2, 2, 2], vec![1.0; 3], vec![1.0; 5]).unwrap();
        assert_eq!(lower_bound_makespan(&inst), 2);
    }
}
