use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::exchange::exchange_search;
use super::sgh::sgh_with_rng;
use crate::model::{lower_bound_makespan, Front, FrontPoint, Instance};

/// Runs SGH for horizons `K, K-1, ...` and keeps the non-dominated results.
pub fn sgs(instance: &Instance, seed: u64) -> Front {
    split_greedy_scheduler(instance, instance.n_slots(), seed, false)
}

/// [`sgs`] with exchange search applied to every SGH schedule.
pub fn sgs_es(instance: &Instance, seed: u64) -> Front {
    split_greedy_scheduler(instance, instance.n_slots(), seed, true)
}

/// Horizon sweep starting at `k_max`. Stops at the first horizon where SGH
/// fails or once the horizon drops below the makespan lower bound. Both
/// variants draw from one RNG stream, so for equal seeds they see the same
/// SGH schedules.
pub fn split_greedy_scheduler(
    instance: &Instance,
    k_max: usize,
    seed: u64,
    with_es: bool,
) -> Front {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_lower = lower_bound_makespan(instance);
    let mut horizon = k_max.min(instance.n_slots());
    let mut points = Vec::new();
    while horizon >= k_lower && horizon > 0 {
        let Some(mut schedule) = sgh_with_rng(instance, horizon, &mut rng) else {
            break;
        };
        if with_es {
            schedule = exchange_search(instance, &schedule, horizon);
        }
        points.push(FrontPoint::new(
            schedule.objectives(instance),
            Some(schedule),
        ));
        horizon -= 1;
    }
    Front::from_points(points)
}
