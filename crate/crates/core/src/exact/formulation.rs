use super::milp::{Constraint, Family, Formulation, MilpModel, Sense, VarKind, VarRole, Variable};
use crate::model::{derive, Instance, InstanceError};

fn binary(name: String, role: VarRole, usable: bool) -> Variable {
    Variable {
        name,
        kind: VarKind::Binary,
        lower: 0.0,
        upper: if usable { 1.0 } else { 0.0 },
        role,
    }
}

fn continuous(name: &str, role: VarRole) -> Variable {
    Variable {
        name: name.to_string(),
        kind: VarKind::Continuous,
        lower: 0.0,
        upper: f64::INFINITY,
        role,
    }
}

fn row(
    name: String,
    family: Family,
    terms: Vec<(usize, f64)>,
    sense: Sense,
    rhs: f64,
) -> Constraint {
    Constraint {
        name,
        family,
        terms,
        sense,
        rhs,
    }
}

/// Model with one binary per job, machine and start slot. Starts whose
/// job would run past the horizon are fixed to zero. The reduced model
/// drops the makespan rows.
pub fn build_f1(
    instance: &Instance,
    horizon: usize,
    reduced: bool,
) -> Result<MilpModel, InstanceError> {
    instance.check_horizon(horizon)?;
    let (n, m, k) = (instance.n_jobs(), instance.n_machines(), horizon);
    let idx = |j: usize, h: usize, t: usize| (j * m + h) * k + (t - 1);
    let mut variables = Vec::with_capacity(n * m * k + 2);
    for j in 0..n {
        let p = instance.processing_time(j);
        for h in 0..m {
            for t in 1..=k {
                variables.push(binary(
                    format!("x_{j}_{h}_{t}"),
                    VarRole::Start {
                        job: j,
                        machine: h,
                        start: t,
                    },
                    t + p - 1 <= k,
                ));
            }
        }
    }
    let cmax = variables.len();
    variables.push(continuous("Cmax", VarRole::Makespan));
    let energy = variables.len();
    variables.push(continuous("E", VarRole::Energy));

    let mut constraints = Vec::new();
    let mut terms = vec![(energy, 1.0)];
    for j in 0..n {
        let p = instance.processing_time(j);
        for h in 0..m {
            for t in 1..=(k + 1).saturating_sub(p) {
                terms.push((idx(j, h, t), -instance.window_cost(h, t, p)));
            }
        }
    }
    constraints.push(row("energy".into(), Family::Energy, terms, Sense::Eq, 0.0));
    for j in 0..n {
        let terms = (0..m)
            .flat_map(|h| (1..=k).map(move |t| (idx(j, h, t), 1.0)))
            .collect();
        constraints.push(row(
            format!("start_{j}"),
            Family::OneStart,
            terms,
            Sense::Eq,
            1.0,
        ));
    }
    for h in 0..m {
        for t in 1..=k {
            let mut terms = Vec::new();
            for j in 0..n {
                let p = instance.processing_time(j);
                for s in (t + 1).saturating_sub(p).max(1)..=t {
                    terms.push((idx(j, h, s), 1.0));
                }
            }
            constraints.push(row(
                format!("overlap_{h}_{t}"),
                Family::NoOverlap,
                terms,
                Sense::Le,
                1.0,
            ));
        }
    }
    if !reduced {
        for j in 0..n {
            let p = instance.processing_time(j);
            let mut terms: Vec<(usize, f64)> = (0..m)
                .flat_map(|h| (1..=k).map(move |t| (idx(j, h, t), (t + p - 1) as f64)))
                .collect();
            terms.push((cmax, -1.0));
            constraints.push(row(
                format!("compl_{j}"),
                Family::Completion,
                terms,
                Sense::Le,
                0.0,
            ));
        }
        constraints.push(row(
            "cmax".into(),
            Family::HorizonCap,
            vec![(cmax, 1.0)],
            Sense::Le,
            k as f64,
        ));
    }
    Ok(MilpModel {
        variables,
        objective: vec![(energy, 1.0)],
        constraints,
        formulation: Formulation::PerJob,
        horizon,
        reduced,
    })
}

/// Model with one binary per distinct processing time, machine and start
/// slot. Jobs sharing a processing time are interchangeable, so only the
/// number of windows of each length is constrained.
pub fn build_f2(
    instance: &Instance,
    horizon: usize,
    reduced: bool,
) -> Result<MilpModel, InstanceError> {
    let dd = derive(instance, horizon)?;
    let (m, k) = (instance.n_machines(), horizon);
    let ptimes = &dd.distinct_ptimes;
    let idx = |di: usize, h: usize, t: usize| (di * m + h) * k + (t - 1);
    let mut variables = Vec::with_capacity(ptimes.len() * m * k + 2);
    for &d in ptimes {
        for h in 0..m {
            for t in 1..=k {
                variables.push(binary(
                    format!("y_{d}_{h}_{t}"),
                    VarRole::Window {
                        ptime: d,
                        machine: h,
                        start: t,
                    },
                    t + d - 1 <= k,
                ));
            }
        }
    }
    let cmax = variables.len();
    variables.push(continuous("Cmax", VarRole::Makespan));
    let energy = variables.len();
    variables.push(continuous("E", VarRole::Energy));

    let usable = |d: usize| 1..=(k + 1).saturating_sub(d);
    let mut constraints = Vec::new();
    let mut terms = vec![(energy, 1.0)];
    for (di, &d) in ptimes.iter().enumerate() {
        for h in 0..m {
            for t in usable(d) {
                let b = dd.window_cost(d, t).expect("window inside horizon");
                terms.push((idx(di, h, t), -instance.rate(h) * b));
            }
        }
    }
    constraints.push(row("energy".into(), Family::Energy, terms, Sense::Eq, 0.0));
    for (di, &d) in ptimes.iter().enumerate() {
        let terms = (0..m)
            .flat_map(|h| (1..=k).map(move |t| (idx(di, h, t), 1.0)))
            .collect();
        let count = dd.jobs_with(d).len() as f64;
        constraints.push(row(
            format!("card_{d}"),
            Family::Cardinality,
            terms,
            Sense::Eq,
            count,
        ));
    }
    for h in 0..m {
        for t in 1..=k {
            let mut terms = Vec::new();
            for (di, &d) in ptimes.iter().enumerate() {
                for s in (t + 1).saturating_sub(d).max(1)..=t {
                    terms.push((idx(di, h, s), 1.0));
                }
            }
            constraints.push(row(
                format!("overlap_{h}_{t}"),
                Family::NoOverlap,
                terms,
                Sense::Le,
                1.0,
            ));
        }
    }
    if !reduced {
        for (di, &d) in ptimes.iter().enumerate() {
            for h in 0..m {
                for t in usable(d) {
                    constraints.push(row(
                        format!("compl_{d}_{h}_{t}"),
                        Family::Completion,
                        vec![(idx(di, h, t), (t + d - 1) as f64), (cmax, -1.0)],
                        Sense::Le,
                        0.0,
                    ));
                }
            }
        }
        constraints.push(row(
            "cmax".into(),
            Family::HorizonCap,
            vec![(cmax, 1.0)],
            Sense::Le,
            k as f64,
        ));
    }
    Ok(MilpModel {
        variables,
        objective: vec![(energy, 1.0)],
        constraints,
        formulation: Formulation::PerPtime,
        horizon,
        reduced,
    })
}
