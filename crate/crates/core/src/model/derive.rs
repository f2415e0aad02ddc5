use std::collections::BTreeMap;

use super::{lower_bound_makespan, Instance, InstanceError};

/// Quantities shared by the heuristics and the models, restricted to the
/// first `horizon` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedData {
    pub horizon: usize,
    /// Distinct processing times, ascending.
    pub distinct_ptimes: Vec<usize>,
    /// Jobs of each processing time, ascending job index.
    pub jobs_by_ptime: BTreeMap<usize, Vec<usize>>,
    /// `window_cost[&d][t - 1]` = sum of `c_t..c_{t+d-1}` for `t <= horizon - d + 1`.
    pub window_cost: BTreeMap<usize, Vec<f64>>,
    /// `cum_price[h][t]` = `u_h * (c_1 + .. + c_t)`, with `cum_price[h][0] = 0`.
    pub cum_price: Vec<Vec<f64>>,
    pub p_max: usize,
    pub k_lower: usize,
    /// Largest number of jobs that can sit on one machine.
    pub omega: usize,
}

impl DerivedData {
    /// Sum of slot prices over `t..t+d-1`, or `None` if the window leaves the horizon.
    pub fn window_cost(&self, d: usize, t: usize) -> Option<f64> {
        self.window_cost.get(&d)?.get(t.checked_sub(1)?).copied()
    }

    /// Cost of running `d` slots from `t` on machine `h`, via prefix differences.
    pub fn location_cost(&self, h: usize, t: usize, d: usize) -> f64 {
        self.cum_price[h][t + d - 1] - self.cum_price[h][t - 1]
    }

    pub fn jobs_with(&self, d: usize) -> &[usize] {
        self.jobs_by_ptime.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn derive(instance: &Instance, horizon: usize) -> Result<DerivedData, InstanceError> {
    instance.check_horizon(horizon)?;
    let mut jobs_by_ptime: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, &p) in instance.processing_times().iter().enumerate() {
        jobs_by_ptime.entry(p).or_default().push(j);
    }
    let distinct_ptimes: Vec<usize> = jobs_by_ptime.keys().copied().collect();
    let costs = &instance.slot_costs()[..horizon];
    let mut prefix = Vec::with_capacity(horizon + 1);
    prefix.push(0.0);
    for &c in costs {
        prefix.push(prefix.last().unwrap() + c);
    }
    let window_cost = distinct_ptimes
        .iter()
        .map(|&d| {
            let row = if d > horizon {
                Vec::new()
            } else {
                (1..=horizon - d + 1)
                    .map(|t| costs[t - 1..t - 1 + d].iter().sum())
                    .collect()
            };
            (d, row)
        })
        .collect();
    let cum_price = instance
        .consumption_rates()
        .iter()
        .map(|&u| prefix.iter().map(|&s| u * s).collect())
        .collect();
    Ok(DerivedData {
        horizon,
        p_max: *distinct_ptimes.last().unwrap(),
        distinct_ptimes,
        jobs_by_ptime,
        window_cost,
        cum_price,
        k_lower: lower_bound_makespan(instance),
        omega: instance.n_jobs().min(horizon),
    })
}
