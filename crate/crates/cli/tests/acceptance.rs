//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

#[path = "../../core/tests/common/support.rs"]
mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;
use tousched::bench::{generate_instance, write_instance, GeneratorParams};
use tousched::exact::{
    build_f1, build_f2, distinct_ptime_bound, exact_pareto, oracle_pareto, BranchAndBound,
    ExactOptions, MilpModel, SolveLimits, SolveStatus, SolverBackend,
};
use tousched::heuristics::{
    convert_schedule, exchange_search_with, find_eps, passes_bound, sgh, EsOptions,
};
use tousched::metrics::{d_r, fm1, fm2, hypervolume, purity, spacing, Normalization, PointStatus};
use tousched::{classify, evaluate, Assignment, Instance, ScheduleClass, SlotSchedule};

type Check = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn optimum(model: &MilpModel) -> Option<f64> {
    let r = BranchAndBound
        .solve(model, None, &SolveLimits::default())
        .expect("built-in solver does not fail on valid models");
    match r.status {
        SolveStatus::Optimal => r.objective,
        _ => None,
    }
}

fn approx(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        (None, None) => true,
        _ => false,
    }
}

fn criterion_1() -> Check {
    let inst = three_jobs();
    let started = Instant::now();
    let exact = exact_pareto(&inst, &BranchAndBound, &ExactOptions::default())
        .map_err(|e| e.to_string())?;
    let oracle = oracle_pareto(&inst).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed().as_secs_f64();
    let expected = [(6, 24.0), (7, 23.0)];
    ensure(same_front(&pairs(&exact.front), &expected, TOL), || {
        format!("exact {:?}", pairs(&exact.front))
    })?;
    ensure(same_front(&pairs(&oracle), &expected, TOL), || {
        format!("oracle {:?}", pairs(&oracle))
    })?;
    let table = brute_table(&inst);
    ensure(min_within(&table, 10) == Some(23.0), || {
        "23 is not the enumerated minimum".into()
    })?;
    ensure(elapsed < 1.0, || format!("took {elapsed:.3}s"))
}

fn criterion_2() -> Check {
    let inst = six_pairs();
    let started = Instant::now();
    let feasible = (0..100u64)
        .filter(|&seed| {
            sgh(&inst, 7, seed).is_some_and(|s| {
                s.n_jobs() == 6
                    && s.makespan(&inst) <= 7
                    && classify(&inst, &s.to_slot_schedule(&inst)) == ScheduleClass::Feasible
            })
        })
        .count();
    let exact = exact_pareto(&inst, &BranchAndBound, &ExactOptions::default())
        .map_err(|e| e.to_string())?;
    let elapsed = started.elapsed().as_secs_f64();
    ensure(feasible >= 99, || {
        format!("{feasible} of 100 seeds feasible")
    })?;
    ensure(same_front(&pairs(&exact.front), &[(6, 72.0)], TOL), || {
        format!("exact {:?}", pairs(&exact.front))
    })?;
    ensure(
        same_front(&brute_front(&brute_table(&inst)), &[(6, 72.0)], TOL),
        || "enumeration disagrees".into(),
    )?;
    ensure(elapsed < 1.0, || format!("took {elapsed:.3}s"))
}

fn criterion_3() -> Check {
    let (inst, s) = one_swap();
    ensure(s.tec(&inst) == 20.0, || {
        format!("initial TEC {}", s.tec(&inst))
    })?;
    let (js, is) = find_eps(&inst, &s, 9, &[0], 1..=9, &[3]);
    ensure(js.len() == 1 && is.len() == 3, || {
        format!("{} J and {} I windows", js.len(), is.len())
    })?;
    let admitted: Vec<(usize, f64, f64)> = is
        .iter()
        .filter(|i| passes_bound(i, &js[0]))
        .map(|i| {
            (
                i.start,
                i.window_sum + js[0].sorted_prefix[i.assigned_count],
                i.sub_tec + js[0].sub_tec,
            )
        })
        .collect();
    ensure(admitted == vec![(6, 15.0, 20.0)], || {
        format!("admitted {admitted:?}")
    })?;
    for i in is.iter().filter(|i| i.start != 6) {
        let bound = i.window_sum + js[0].sorted_prefix[i.assigned_count];
        let current = i.sub_tec + js[0].sub_tec;
        ensure(bound == 16.0 && current == 16.0, || {
            format!("window at {}: {bound} vs {current}", i.start)
        })?;
    }
    let opts = EsOptions {
        verify_index: true,
        ..EsOptions::default()
    };
    let (out, stats) = exchange_search_with(&inst, &s, 9, opts);
    ensure(stats.moves == 1, || format!("{} moves", stats.moves))?;
    ensure(out.tec(&inst) == 15.0, || {
        format!("final TEC {}", out.tec(&inst))
    })
}

fn criterion_4(instances: &[Instance]) -> Check {
    let started = Instant::now();
    for (i, inst) in instances.iter().enumerate() {
        let table = brute_table(inst);
        for horizon in 1..=inst.n_slots() {
            let expected = min_within(&table, horizon);
            let f1 = optimum(&build_f1(inst, horizon, true).map_err(|e| e.to_string())?);
            let f2 = optimum(&build_f2(inst, horizon, true).map_err(|e| e.to_string())?);
            ensure(
                approx(f1, expected, 1e-6) && approx(f2, expected, 1e-6),
                || {
                    format!("instance {i} horizon {horizon}: F1 {f1:?} F2 {f2:?} enumeration {expected:?}")
                },
            )?;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    ensure(elapsed < 60.0, || format!("took {elapsed:.1}s"))
}

fn criterion_5(instances: &[Instance]) -> Check {
    for (i, inst) in instances.iter().enumerate() {
        let exact = exact_pareto(inst, &BranchAndBound, &ExactOptions::default())
            .map_err(|e| e.to_string())?;
        let oracle = oracle_pareto(inst).map_err(|e| e.to_string())?;
        ensure(
            same_front(&pairs(&exact.front), &pairs(&oracle), TOL),
            || {
                format!(
                    "instance {i}: exact {:?} oracle {:?}",
                    pairs(&exact.front),
                    pairs(&oracle)
                )
            },
        )?;
        let brute = brute_front(&brute_table(inst));
        ensure(same_front(&pairs(&oracle), &brute, TOL), || {
            format!("instance {i}: enumeration {brute:?}")
        })?;
    }
    Ok(())
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for shape in 0..20 {
        let k = rng.gen_range(5..40);
        let params = GeneratorParams {
            p_max: rng.gen_range(1..=5),
            ..GeneratorParams::new(rng.gen_range(1..10), rng.gen_range(1..5), k, shape)
        };
        let inst = generate_instance(&params).map_err(|e| e.to_string())?;
        let horizon = rng.gen_range(1..=k);
        let distinct: BTreeSet<usize> = inst.processing_times().iter().copied().collect();
        let (n, m) = (inst.n_jobs(), inst.n_machines());
        for reduced in [true, false] {
            let f1 = build_f1(&inst, horizon, reduced)
                .map_err(|e| e.to_string())?
                .n_variables();
            let f2 = build_f2(&inst, horizon, reduced)
                .map_err(|e| e.to_string())?
                .n_variables();
            ensure(f1 == n * m * horizon + 2, || {
                format!("shape {shape}: F1 has {f1} variables")
            })?;
            ensure(f2 == distinct.len() * m * horizon + 2, || {
                format!("shape {shape}: F2 has {f2} variables")
            })?;
        }
    }
    let bound = distinct_ptime_bound(10, 200);
    ensure(bound == 62, || format!("bound is {bound}"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pairs_seen = 0;
    let mut moves = 0;
    while pairs_seen < 200 {
        let n = rng.gen_range(2..9);
        let m = rng.gen_range(1..4);
        let k = rng.gen_range(6..20);
        let params = GeneratorParams {
            p_max: rng.gen_range(1..=4),
            c_max: 9,
            ..GeneratorParams::new(n, m, k, rng.gen())
        };
        let inst = generate_instance(&params).map_err(|e| e.to_string())?;
        let Some(s) = sgh(&inst, k, rng.gen()) else {
            continue;
        };
        pairs_seen += 1;
        let opts = EsOptions {
            verify_index: true,
            ..EsOptions::default()
        };
        let (out, stats) = exchange_search_with(&inst, &s, k, opts);
        moves += stats.moves;
        ensure(stats.index_mismatches == 0, || {
            format!("pair {pairs_seen}: index drifted")
        })?;
        let mut tec = s.tec(&inst);
        let mut makespan = s.makespan(&inst);
        for (&t, &c) in stats.tec_trace.iter().zip(&stats.makespan_trace) {
            ensure(t <= tec + TOL && c <= makespan, || {
                format!("pair {pairs_seen}: ({c}, {t}) after ({makespan}, {tec})")
            })?;
            tec = t;
            makespan = c;
        }
        ensure(
            out.tec(&inst) <= s.tec(&inst) + TOL && out.makespan(&inst) <= s.makespan(&inst),
            || format!("pair {pairs_seen}: final schedule is worse"),
        )?;
    }
    ensure(moves > 0, || "no move was ever accepted".into())
}

/// Jobs of each machine cut into unit pieces, shuffled and laid back to
/// back, with idle gaps only where no job straddles the cut.
fn random_split(rng: &mut ChaCha8Rng) -> (Instance, SlotSchedule) {
    let n = rng.gen_range(1..8);
    let m = rng.gen_range(1..4);
    let p: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
    let machines: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut k = 1;
    for h in 0..m {
        let mut units: Vec<usize> = (0..n)
            .filter(|&j| machines[j] == h)
            .flat_map(|j| std::iter::repeat_n(j, p[j]))
            .collect();
        units.shuffle(rng);
        let mut t = 1 + rng.gen_range(0..3);
        for (i, &j) in units.iter().enumerate() {
            slots[j].push(t);
            t += 1;
            let done: BTreeSet<usize> = units[..=i].iter().copied().collect();
            if units[i + 1..].iter().all(|x| !done.contains(x)) {
                t += rng.gen_range(0..3);
            }
        }
        k = k.max(t);
    }
    let c: Vec<f64> = (0..k).map(|_| f64::from(rng.gen_range(0..10u32))).collect();
    let u: Vec<f64> = (0..m).map(|_| f64::from(rng.gen_range(1..4u32))).collect();
    let inst = Instance::new(p, u, c).expect("horizon covers every job");
    let assignments = slots
        .into_iter()
        .enumerate()
        .map(|(j, s)| Assignment::new(j, machines[j], s))
        .collect();
    (inst, SlotSchedule::new(assignments))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut split = 0;
    for case in 0..200 {
        let (inst, schedule) = random_split(&mut rng);
        let class = classify(&inst, &schedule);
        ensure(
            matches!(class, ScheduleClass::Feasible | ScheduleClass::Split),
            || format!("case {case}: {class:?}"),
        )?;
        split += usize::from(class == ScheduleClass::Split);
        let out = convert_schedule(&inst, &schedule).map_err(|e| format!("case {case}: {e}"))?;
        let out_class = classify(&inst, &out.to_slot_schedule(&inst));
        ensure(out_class == ScheduleClass::Feasible, || {
            format!("case {case}: output {out_class:?}")
        })?;
        let before = evaluate(&inst, &schedule).map_err(|e| e.to_string())?;
        ensure(before == out.objectives(&inst), || {
            format!("case {case}: {before:?} vs {:?}", out.objectives(&inst))
        })?;
        for h in 0..inst.n_machines() {
            let mut order_in: Vec<(usize, usize)> = schedule
                .assignments
                .iter()
                .filter(|a| a.machine == h)
                .map(|a| (a.slots[0], a.job))
                .collect();
            let mut order_out: Vec<(usize, usize)> = (0..inst.n_jobs())
                .filter(|&j| out.placement(j).machine == h)
                .map(|j| (out.placement(j).start, j))
                .collect();
            order_in.sort_unstable();
            order_out.sort_unstable();
            let a: Vec<usize> = order_in.into_iter().map(|x| x.1).collect();
            let b: Vec<usize> = order_out.into_iter().map(|x| x.1).collect();
            ensure(a == b, || {
                format!("case {case} machine {h}: order {a:?} became {b:?}")
            })?;
        }
    }
    ensure(split > 0, || "no split schedule was generated".into())
}

fn criterion_9(instances: &[Instance]) -> Check {
    for (i, inst) in instances.iter().enumerate() {
        let cold = exact_pareto(inst, &BranchAndBound, &ExactOptions::default())
            .map_err(|e| e.to_string())?;
        let opts = ExactOptions {
            warm_start: true,
            seed: i as u64,
            ..ExactOptions::default()
        };
        let warm = exact_pareto(inst, &BranchAndBound, &opts).map_err(|e| e.to_string())?;
        ensure(
            same_front(&pairs(&cold.front), &pairs(&warm.front), TOL),
            || format!("instance {i}: fronts differ"),
        )?;
        for level in &warm.levels {
            if let (Some(w), Some(opt)) = (level.warm_start_objective, level.optimum) {
                ensure(w >= opt - TOL, || {
                    format!(
                        "instance {i} horizon {}: warm {w} below optimum {opt}",
                        level.horizon
                    )
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_10() -> Check {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9;
    let hv = hypervolume(&[[1.0, 0.0], [0.0, 1.0]], [2.0, 2.0]);
    ensure(close(hv, 3.0), || format!("hypervolume {hv}"))?;
    let f = [[1.0, 9.0], [3.0, 5.0], [6.0, 2.0]];
    let dr = d_r(&f, &f, Normalization::None).map_err(|e| e.to_string())?;
    ensure(dr == 0.0, || format!("d_r {dr}"))?;
    let p1 = purity(&f, &f).map_err(|e| e.to_string())?;
    let p0 = purity(&[[2.0, 9.5]], &f).map_err(|e| e.to_string())?;
    ensure(close(p1, 1.0) && close(p0, 0.0), || {
        format!("purity {p1} and {p0}")
    })?;
    let statuses = [
        PointStatus::Feasible,
        PointStatus::Feasible,
        PointStatus::Feasible,
        PointStatus::Infeasible { unscheduled: 2 },
    ];
    let (a, b) = (
        fm1(&statuses).map_err(|e| e.to_string())?,
        fm2(&statuses, 10).map_err(|e| e.to_string())?,
    );
    ensure(close(a, 0.25) && close(b, 0.2), || {
        format!("fm1 {a} fm2 {b}")
    })?;
    let sp = spacing(&[[0.0, 3.0], [1.0, 2.0], [2.0, 1.0], [3.0, 0.0]]);
    ensure(sp.is_some_and(|s| close(s, 0.0)), || {
        format!("spacing {sp:?}")
    })
}

fn criterion_11() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inst = generate_instance(&GeneratorParams {
        p_max: 6,
        ..GeneratorParams::new(14, 3, 40, 11)
    })
    .map_err(|e| e.to_string())?;
    let path = dir.path().join("instance.txt");
    write_instance(&inst, &path).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out_dir = dir.path().join(format!("out{run}"));
        let status = Command::new(env!("CARGO_BIN_EXE_tousched"))
            .args([
                "solve",
                "--algo",
                "sgs-es",
                "--seed",
                "7",
                "--runs",
                "2",
                "--instance",
            ])
            .arg(&path)
            .arg("--out-dir")
            .arg(&out_dir)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!("exit {:?}", status.status.code())
        })?;
        let files: Vec<String> = (0..2)
            .map(|i| std::fs::read_to_string(out_dir.join(format!("sgs-es_run{i}.csv"))))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        outputs.push(files);
    }
    ensure(outputs[0][0].lines().count() > 2, || {
        "front has fewer than two points".into()
    })?;
    ensure(outputs[0] == outputs[1], || {
        "front CSVs differ between invocations".into()
    })
}

fn main() {
    let instances = small_instances();
    let criteria: Vec<Criterion<'_>> = vec![
        (
            "three-job fixture: exact and oracle fronts",
            Box::new(criterion_1),
        ),
        (
            "six-pair fixture: SGH feasibility and exact front",
            Box::new(criterion_2),
        ),
        (
            "single-exchange fixture: TEC 20 to 15",
            Box::new(criterion_3),
        ),
        (
            "reduced F1 = reduced F2 = enumeration per horizon",
            Box::new(|| criterion_4(&instances)),
        ),
        (
            "exact front = oracle front",
            Box::new(|| criterion_5(&instances)),
        ),
        (
            "variable counts and distinct-length bound",
            Box::new(criterion_6),
        ),
        (
            "exchange search monotone with consistent index",
            Box::new(criterion_7),
        ),
        ("split schedule conversion", Box::new(criterion_8)),
        (
            "warm start leaves fronts unchanged",
            Box::new(|| criterion_9(&instances)),
        ),
        ("metric golden values", Box::new(criterion_10)),
        ("CLI determinism", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
