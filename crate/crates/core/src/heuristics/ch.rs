use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::timeline::MachineTimeline;
use crate::model::{Front, FrontPoint, Instance, Placement, Schedule, TEC_TOLERANCE};

/// Constructive baseline: jobs in LPT order (random ties) each take the
/// cheapest contiguous free window, then whole runs of adjacent jobs are
/// shifted while that lowers the energy cost. A level where some job finds
/// no window emits nothing and the horizon drops by one; after a success
/// the horizon drops below the makespan found.
pub fn ch_j(instance: &Instance, seed: u64) -> Front {
    ch_j_from(instance, instance.n_slots(), seed)
}

pub fn ch_j_from(instance: &Instance, k_max: usize, seed: u64) -> Front {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..instance.n_jobs()).collect();
    order.shuffle(&mut rng);
    order.sort_by_key(|&j| std::cmp::Reverse(instance.processing_time(j)));

    let k_min = instance.total_processing() as f64 / instance.n_machines() as f64;
    let mut horizon = k_max.min(instance.n_slots());
    let mut points = Vec::new();
    while horizon >= instance.max_processing_time() && horizon as f64 >= k_min {
        match place_lpt(instance, &order, horizon) {
            Some(schedule) => {
                let schedule = shift_blocks(instance, schedule);
                let makespan = schedule.makespan(instance);
                points.push(FrontPoint::new(
                    schedule.objectives(instance),
                    Some(schedule),
                ));
                horizon = makespan - 1;
            }
            None => horizon -= 1,
        }
    }
    Front::from_points(points)
}

fn place_lpt(instance: &Instance, order: &[usize], horizon: usize) -> Option<Schedule> {
    let mut timelines = vec![MachineTimeline::new(); instance.n_machines()];
    let mut placements = vec![
        Placement {
            machine: 0,
            start: 0
        };
        instance.n_jobs()
    ];
    for &job in order {
        let d = instance.processing_time(job);
        let mut best: Option<(f64, usize, usize)> = None;
        for (h, tl) in timelines.iter().enumerate() {
            for (a, b) in tl.gaps(horizon) {
                if b + 1 < a + d {
                    continue;
                }
                for t in a..=b + 1 - d {
                    let cost = instance.window_cost(h, t, d);
                    let better = match best {
                        None => true,
                        Some((bc, bt, bh)) => {
                            cost < bc - TEC_TOLERANCE
                                || (cost <= bc + TEC_TOLERANCE && (t, h) < (bt, bh))
                        }
                    };
                    if better {
                        best = Some((cost, t, h));
                    }
                }
            }
        }
        let (_, start, machine) = best?;
        timelines[machine].insert(job, start, start + d - 1);
        placements[job] = Placement { machine, start };
    }
    Some(Schedule::from_placements_unchecked(placements))
}

/// A candidate shift of the jobs `seq[from..to]` on one machine by
/// `offset` slots.
struct Shift {
    machine: usize,
    from: usize,
    to: usize,
    offset: isize,
    delta: f64,
}

fn shift_blocks(instance: &Instance, mut schedule: Schedule) -> Schedule {
    loop {
        let limit = schedule.makespan(instance);
        let mut best: Option<Shift> = None;
        for h in 0..instance.n_machines() {
            let seq = schedule.jobs_on(h);
            let span = |j: usize| {
                let s = schedule.placement(j).start;
                (s, s + instance.processing_time(j) - 1)
            };
            let mut b0 = 0;
            while b0 < seq.len() {
                let mut b1 = b0 + 1;
                while b1 < seq.len() && span(seq[b1]).0 == span(seq[b1 - 1]).1 + 1 {
                    b1 += 1;
                }
                let left_room = span(seq[b0]).0 - if b0 == 0 { 1 } else { span(seq[b0 - 1]).1 + 1 };
                let right_edge = if b1 == seq.len() {
                    limit
                } else {
                    span(seq[b1]).0 - 1
                };
                let right_room = right_edge - span(seq[b1 - 1]).1;
                let mut consider = |from: usize, to: usize, offset: isize| {
                    let (a, _) = span(seq[from]);
                    let (_, b) = span(seq[to - 1]);
                    let len = b - a + 1;
                    let moved = (a as isize + offset) as usize;
                    let delta =
                        instance.window_cost(h, moved, len) - instance.window_cost(h, a, len);
                    if delta < -TEC_TOLERANCE
                        && best
                            .as_ref()
                            .is_none_or(|s| delta < s.delta - TEC_TOLERANCE)
                    {
                        best = Some(Shift {
                            machine: h,
                            from,
                            to,
                            offset,
                            delta,
                        });
                    }
                };
                for q in b0 + 1..=b1 {
                    for step in 1..=left_room {
                        consider(b0, q, -(step as isize));
                    }
                }
                for q in b0..b1 {
                    for step in 1..=right_room {
                        consider(q, b1, step as isize);
                    }
                }
                b0 = b1;
            }
        }
        let Some(shift) = best else {
            return schedule;
        };
        let seq = schedule.jobs_on(shift.machine);
        let mut placements = schedule.placements().to_vec();
        for &j in &seq[shift.from..shift.to] {
            placements[j].start = (placements[j].start as isize + shift.offset) as usize;
        }
        schedule = Schedule::from_placements_unchecked(placements);
    }
}
