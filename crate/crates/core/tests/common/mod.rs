#![allow(dead_code)]

pub mod support;

pub use support::*;

use proptest::prelude::*;
use tousched::{Instance, Placement, Schedule};

/// Instances with at most `max_n` jobs, `max_m` machines and `max_k`
/// slots. Rates and prices are small integers.
pub fn instance_strategy(
    max_n: usize,
    max_m: usize,
    max_k: usize,
) -> impl Strategy<Value = Instance> {
    (1..=max_k, 1..=max_n, 1..=max_m).prop_flat_map(|(k, n, m)| {
        (
            prop::collection::vec(1..=k.min(4), n),
            prop::collection::vec(1u32..=3, m),
            prop::collection::vec(0u32..=9, k),
        )
            .prop_map(|(p, u, c)| {
                Instance::new(
                    p,
                    u.into_iter().map(f64::from).collect(),
                    c.into_iter().map(f64::from).collect(),
                )
                .unwrap()
            })
    })
}

/// A feasible schedule drawn by packing jobs in `order` left to right on
/// `machines[j]`, with `gaps[j]` idle slots before each, dropping the
/// attempt if it does not fit.
pub fn packed_schedule(inst: &Instance, machines: &[usize], gaps: &[usize]) -> Option<Schedule> {
    let mut next = vec![1usize; inst.n_machines()];
    let mut placements = Vec::with_capacity(inst.n_jobs());
    for j in 0..inst.n_jobs() {
        let h = machines[j] % inst.n_machines();
        let start = next[h] + gaps[j];
        let end = start + inst.processing_time(j) - 1;
        if end > inst.n_slots() {
            return None;
        }
        next[h] = end + 1;
        placements.push(Placement { machine: h, start });
    }
    Schedule::new(inst, placements).ok()
}

/// Instance plus a random feasible schedule on it. The horizon is sized
/// so that the drawn layout always fits, with up to `slack` extra slots.
pub fn instance_with_schedule(
    max_n: usize,
    max_m: usize,
    slack: usize,
) -> impl Strategy<Value = (Instance, Schedule)> {
    (1..=max_n, 1..=max_m)
        .prop_flat_map(move |(n, m)| {
            (
                prop::collection::vec(1usize..=4, n),
                prop::collection::vec(1u32..=3, m),
                prop::collection::vec(0..m, n),
                prop::collection::vec(0usize..3, n),
                0..=slack,
            )
        })
        .prop_flat_map(|(p, u, machines, gaps, extra)| {
            let mut load = vec![0usize; u.len()];
            for j in 0..p.len() {
                load[machines[j]] += p[j] + gaps[j];
            }
            let k = load.into_iter().max().unwrap() + extra;
            (
                Just((p, u, machines, gaps)),
                prop::collection::vec(0u32..=9, k),
            )
        })
        .prop_map(|((p, u, machines, gaps), c)| {
            let inst = Instance::new(
                p,
                u.into_iter().map(f64::from).collect(),
                c.into_iter().map(f64::from).collect(),
            )
            .unwrap();
            let s = packed_schedule(&inst, &machines, &gaps).unwrap();
            (inst, s)
        })
}
