//! Fixtures and a brute-force reference solver that works on raw vectors
//! and shares no code with the library's solvers.
#![allow(dead_code)]

use tousched::bench::{generate_instance, GeneratorParams};
use tousched::{Instance, Placement, Schedule};

pub const TOL: f64 = 1e-9;

pub fn three_jobs() -> Instance {
    Instance::new(
        vec![3, 2, 1],
        vec![1.0],
        vec![1.0, 5.0, 2.0, 3.0, 9.0, 4.0, 8.0, 13.0, 7.0, 6.0],
    )
    .unwrap()
}

pub fn six_pairs() -> Instance {
    Instance::new(
        vec![2; 6],
        vec![1.0, 2.0],
        vec![10.0, 1.0, 1.0, 10.0, 1.0, 1.0, 10.0],
    )
    .unwrap()
}

/// Instance and the initial schedule A@2, B@6, C@8.
pub fn one_swap() -> (Instance, Schedule) {
    let inst = Instance::new(
        vec![3, 1, 1],
        vec![1.0],
        vec![7.0, 1.0, 1.0, 10.0, 6.0, 4.0, 5.0, 4.0, 6.0],
    )
    .unwrap();
    let at = |start| Placement { machine: 0, start };
    let s = Schedule::new(&inst, vec![at(2), at(6), at(8)]).unwrap();
    (inst, s)
}

/// Fifty small generated instances: up to five jobs, two machines and
/// eight slots.
pub fn small_instances() -> Vec<Instance> {
    (0..50u64)
        .map(|i| {
            let k = 4 + (i as usize * 3) % 5;
            let params = GeneratorParams {
                n: 1 + i as usize % 5,
                m: 1 + (i as usize / 5) % 2,
                k,
                p_max: 3,
                u_max: 3,
                c_max: 9,
                seed: 1000 + i,
            };
            generate_instance(&params).unwrap()
        })
        .collect()
}

/// Minimum TEC for each exact makespan (index = makespan), found by trying
/// every start on every machine for every job.
pub fn brute_force_by_makespan(p: &[usize], u: &[f64], c: &[f64]) -> Vec<Option<f64>> {
    let k = c.len();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(p[j]));
    let mut busy = vec![vec![false; k + 1]; u.len()];
    let mut best = vec![None; k + 1];
    let mut last = Vec::new();
    dfs(p, u, c, &order, 0, &mut busy, 0.0, 0, &mut last, &mut best);
    best
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    p: &[usize],
    u: &[f64],
    c: &[f64],
    order: &[usize],
    depth: usize,
    busy: &mut Vec<Vec<bool>>,
    cost: f64,
    makespan: usize,
    last: &mut Vec<(usize, usize)>,
    best: &mut Vec<Option<f64>>,
) {
    if depth == order.len() {
        let slot = &mut best[makespan];
        if slot.is_none_or(|b: f64| cost < b) {
            *slot = Some(cost);
        }
        return;
    }
    let j = order[depth];
    let d = p[j];
    let k = c.len();
    for h in 0..u.len() {
        for s in 1..=k + 1 - d {
            // jobs of equal length are interchangeable: keep them in (h, s) order
            if depth > 0 && p[order[depth - 1]] == d && (h, s) <= last[depth - 1] {
                continue;
            }
            if (s..s + d).any(|t| busy[h][t]) {
                continue;
            }
            let window: f64 = c[s - 1..s - 1 + d].iter().sum();
            busy[h][s..s + d].fill(true);
            last.push((h, s));
            dfs(
                p,
                u,
                c,
                order,
                depth + 1,
                busy,
                cost + u[h] * window,
                makespan.max(s + d - 1),
                last,
                best,
            );
            last.pop();
            busy[h][s..s + d].fill(false);
        }
    }
}

pub fn brute_table(inst: &Instance) -> Vec<Option<f64>> {
    brute_force_by_makespan(
        inst.processing_times(),
        inst.consumption_rates(),
        inst.slot_costs(),
    )
}

/// Cheapest TEC over schedules that finish by `horizon`.
pub fn min_within(table: &[Option<f64>], horizon: usize) -> Option<f64> {
    table[..=horizon]
        .iter()
        .flatten()
        .copied()
        .fold(None, |acc: Option<f64>, x| {
            Some(acc.map_or(x, |a| a.min(x)))
        })
}

/// Non-dominated `(makespan, tec)` pairs of the table.
pub fn brute_front(table: &[Option<f64>]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for (m, tec) in table.iter().enumerate() {
        if let Some(t) = *tec {
            if out.last().is_none_or(|&(_, prev)| t < prev - TOL) {
                out.push((m, t));
            }
        }
    }
    out
}

pub fn same_front(a: &[(usize, f64)], b: &[(usize, f64)], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.0 == y.0 && (x.1 - y.1).abs() <= tol)
}

pub fn pairs(front: &tousched::Front) -> Vec<(usize, f64)> {
    front
        .objectives()
        .iter()
        .map(|o| (o.makespan, o.tec))
        .collect()
}
