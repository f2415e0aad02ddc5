use std::collections::BTreeMap;
use std::time::Instant;

use super::backend::{BackendError, SolveLimits, SolveResult, SolveStatus, SolverBackend};
use super::milp::{MilpModel, Sense, VarKind};

const EPS: f64 = 1e-9;

/// `constant + sum(coef * value)` over model variables.
#[derive(Debug, Clone, Default)]
struct Affine {
    constant: f64,
    terms: Vec<(usize, f64)>,
}

impl Affine {
    fn eval(&self, values: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, a)| a * values[v]).sum::<f64>()
    }

    fn scaled(&self, k: f64) -> Affine {
        Affine {
            constant: self.constant * k,
            terms: self.terms.iter().map(|&(v, a)| (v, a * k)).collect(),
        }
    }

    fn add(&mut self, other: &Affine, k: f64) {
        self.constant += other.constant * k;
        self.terms
            .extend(other.terms.iter().map(|&(v, a)| (v, a * k)));
    }

    fn coef(&self, var: usize) -> f64 {
        self.terms.iter().filter(|t| t.0 == var).map(|t| t.1).sum()
    }

    fn without(&self, var: usize) -> Affine {
        Affine {
            constant: self.constant,
            terms: self.terms.iter().copied().filter(|t| t.0 != var).collect(),
        }
    }
}

/// `expr <= 0` or `expr = 0`.
#[derive(Debug, Clone)]
struct WorkRow {
    expr: Affine,
    equality: bool,
}

#[derive(Debug, Clone)]
enum Recovery {
    Defined {
        var: usize,
        value: Affine,
    },
    Lowest {
        var: usize,
        lowers: Vec<Affine>,
        fallback: f64,
    },
}

#[derive(Debug, Clone)]
struct LeRow {
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

/// The model rewritten over its binaries alone: continuous variables are
/// substituted through their defining equalities or eliminated pairwise.
#[derive(Debug, Clone)]
pub(crate) struct Presolved {
    n_model_vars: usize,
    binaries: Vec<usize>,
    cost: Vec<f64>,
    constant: f64,
    rows: Vec<LeRow>,
    /// `sum x = k` rows with unit coefficients, as (binaries, k).
    cardinality: Vec<(Vec<usize>, usize)>,
    /// Indices into `cardinality` with pairwise disjoint supports.
    disjoint: Vec<usize>,
    fixed: Vec<(usize, i8)>,
    recovery: Vec<Recovery>,
    trivially_infeasible: bool,
}

fn normalise(model: &MilpModel) -> Vec<WorkRow> {
    model
        .constraints
        .iter()
        .map(|c| {
            let expr = Affine {
                constant: -c.rhs,
                terms: c.terms.clone(),
            };
            match c.sense {
                Sense::Le => WorkRow {
                    expr,
                    equality: false,
                },
                Sense::Ge => WorkRow {
                    expr: expr.scaled(-1.0),
                    equality: false,
                },
                Sense::Eq => WorkRow {
                    expr,
                    equality: true,
                },
            }
        })
        .collect()
}

impl Presolved {
    pub(crate) fn new(model: &MilpModel) -> Result<Self, BackendError> {
        let n = model.n_variables();
        let mut rows = normalise(model);
        let mut objective = Affine {
            constant: 0.0,
            terms: model.objective.clone(),
        };
        let mut recovery = Vec::new();
        let continuous: Vec<usize> = (0..n)
            .filter(|&v| model.variables[v].kind == VarKind::Continuous)
            .collect();
        let mut eliminated = vec![false; n];

        // substitute objective variables through a defining equality
        for &v in &continuous {
            if objective.coef(v) == 0.0 {
                continue;
            }
            let Some(pos) = rows
                .iter()
                .position(|r| r.equality && r.expr.coef(v) != 0.0)
            else {
                return Err(BackendError::Unsupported(format!(
                    "objective variable {} has no defining equality",
                    model.variables[v].name
                )));
            };
            let row = rows.remove(pos);
            let a = row.expr.coef(v);
            let value = row.expr.without(v).scaled(-1.0 / a);
            for r in rows.iter_mut() {
                let c = r.expr.coef(v);
                if c != 0.0 {
                    r.expr = r.expr.without(v);
                    r.expr.add(&value, c);
                }
            }
            let c = objective.coef(v);
            objective = objective.without(v);
            objective.add(&value, c);
            let var = &model.variables[v];
            if var.lower.is_finite() {
                let mut e = value.scaled(-1.0);
                e.constant += var.lower;
                rows.push(WorkRow {
                    expr: e,
                    equality: false,
                });
            }
            if var.upper.is_finite() {
                let mut e = value.clone();
                e.constant -= var.upper;
                rows.push(WorkRow {
                    expr: e,
                    equality: false,
                });
            }
            recovery.push(Recovery::Defined { var: v, value });
            eliminated[v] = true;
        }

        // eliminate the rest pairwise
        for &v in &continuous {
            if eliminated[v] {
                continue;
            }
            if objective.coef(v) != 0.0 {
                return Err(BackendError::Unsupported(format!(
                    "continuous variable {} in objective",
                    model.variables[v].name
                )));
            }
            let var = &model.variables[v];
            let mut lowers: Vec<Affine> = Vec::new();
            let mut uppers: Vec<Affine> = Vec::new();
            if var.lower.is_finite() {
                lowers.push(Affine {
                    constant: var.lower,
                    terms: vec![],
                });
            }
            if var.upper.is_finite() {
                uppers.push(Affine {
                    constant: var.upper,
                    terms: vec![],
                });
            }
            let mut kept = Vec::with_capacity(rows.len());
            for r in rows.drain(..) {
                let a = r.expr.coef(v);
                if a == 0.0 {
                    kept.push(r);
                    continue;
                }
                // rest + a v <= 0  =>  v <= -rest / a (a > 0) or v >= -rest / a (a < 0)
                let bound = r.expr.without(v).scaled(-1.0 / a);
                if r.equality {
                    lowers.push(bound.clone());
                    uppers.push(bound);
                } else if a > 0.0 {
                    uppers.push(bound);
                } else {
                    lowers.push(bound);
                }
            }
            rows = kept;
            for lo in &lowers {
                for hi in &uppers {
                    let mut e = lo.clone();
                    e.add(hi, -1.0);
                    rows.push(WorkRow {
                        expr: e,
                        equality: false,
                    });
                }
            }
            let fallback = if var.lower.is_finite() {
                var.lower
            } else if var.upper.is_finite() {
                var.upper.min(0.0)
            } else {
                0.0
            };
            recovery.push(Recovery::Lowest {
                var: v,
                lowers,
                fallback,
            });
            eliminated[v] = true;
        }

        let binaries: Vec<usize> = (0..n)
            .filter(|&v| model.variables[v].kind == VarKind::Binary)
            .collect();
        let mut bin_of = vec![usize::MAX; n];
        for (b, &v) in binaries.iter().enumerate() {
            bin_of[v] = b;
        }
        let merge = |expr: &Affine| -> Vec<(usize, f64)> {
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            for &(v, a) in &expr.terms {
                *acc.entry(bin_of[v]).or_insert(0.0) += a;
            }
            acc.into_iter().filter(|&(_, a)| a != 0.0).collect()
        };

        let mut cost = vec![0.0; binaries.len()];
        for (b, a) in merge(&objective) {
            cost[b] = a;
        }
        let mut le_rows = Vec::new();
        let mut cardinality: Vec<(Vec<usize>, usize)> = Vec::new();
        let mut trivially_infeasible = false;
        for r in &rows {
            let terms = merge(&r.expr);
            let rhs = -r.expr.constant;
            if terms.is_empty() {
                let ok = if r.equality {
                    rhs.abs() <= EPS
                } else {
                    rhs >= -EPS
                };
                trivially_infeasible |= !ok;
                continue;
            }
            if r.equality {
                if terms.iter().all(|&(_, a)| a == 1.0) && rhs >= 0.0 && rhs.fract() == 0.0 {
                    cardinality.push((terms.iter().map(|t| t.0).collect(), rhs as usize));
                }
                le_rows.push(LeRow {
                    terms: terms.iter().map(|&(b, a)| (b, -a)).collect(),
                    rhs: -rhs,
                });
            }
            le_rows.push(LeRow { terms, rhs });
        }
        let mut used = vec![false; binaries.len()];
        let mut disjoint = Vec::new();
        for (i, (vars, _)) in cardinality.iter().enumerate() {
            if vars.iter().all(|&b| !used[b]) {
                vars.iter().for_each(|&b| used[b] = true);
                disjoint.push(i);
            }
        }
        let mut fixed = Vec::new();
        for (b, &v) in binaries.iter().enumerate() {
            let var = &model.variables[v];
            if var.upper < 0.5 {
                fixed.push((b, 0));
            } else if var.lower > 0.5 {
                fixed.push((b, 1));
            }
        }
        Ok(Self {
            n_model_vars: n,
            binaries,
            cost,
            constant: objective.constant,
            rows: le_rows,
            cardinality,
            disjoint,
            fixed,
            recovery,
            trivially_infeasible,
        })
    }

    /// Full model vector from binary values; continuous variables take
    /// their defined value or the smallest feasible one.
    pub(crate) fn recover(&self, bits: &[i8]) -> Vec<f64> {
        let mut values = vec![0.0; self.n_model_vars];
        for (b, &v) in self.binaries.iter().enumerate() {
            values[v] = f64::from(bits[b].max(0));
        }
        for rec in self.recovery.iter().rev() {
            match rec {
                Recovery::Defined { var, value } => values[*var] = value.eval(&values),
                Recovery::Lowest {
                    var,
                    lowers,
                    fallback,
                } => {
                    values[*var] = lowers
                        .iter()
                        .map(|e| e.eval(&values))
                        .fold(*fallback, f64::max);
                }
            }
        }
        values
    }

    pub(crate) fn bits_from_values(&self, values: &[f64]) -> Vec<i8> {
        self.binaries
            .iter()
            .map(|&v| i8::from(values[v] > 0.5))
            .collect()
    }

    fn is_feasible(&self, bits: &[i8]) -> bool {
        self.rows.iter().all(|r| {
            let act: f64 = r.terms.iter().map(|&(b, a)| a * f64::from(bits[b])).sum();
            act <= r.rhs + EPS
        })
    }

    fn cost_of(&self, bits: &[i8]) -> f64 {
        self.constant
            + bits
                .iter()
                .zip(&self.cost)
                .map(|(&x, &c)| c * f64::from(x))
                .sum::<f64>()
    }
}

struct Search<'a> {
    p: &'a Presolved,
    var_rows: Vec<Vec<(usize, f64)>>,
    in_disjoint: Vec<bool>,
    val: Vec<i8>,
    min_act: Vec<f64>,
    trail: Vec<usize>,
    fixed_cost: f64,
    best: Option<(f64, Vec<i8>)>,
    nodes: u64,
    started: Instant,
    limits: SolveLimits,
    timed_out: bool,
}

impl<'a> Search<'a> {
    fn new(p: &'a Presolved, limits: SolveLimits) -> Self {
        let nb = p.binaries.len();
        let mut var_rows = vec![Vec::new(); nb];
        let mut min_act = vec![0.0; p.rows.len()];
        for (r, row) in p.rows.iter().enumerate() {
            for &(b, a) in &row.terms {
                var_rows[b].push((r, a));
                min_act[r] += a.min(0.0);
            }
        }
        let mut in_disjoint = vec![false; nb];
        for &i in &p.disjoint {
            for &b in &p.cardinality[i].0 {
                in_disjoint[b] = true;
            }
        }
        Self {
            p,
            var_rows,
            in_disjoint,
            val: vec![-1; nb],
            min_act,
            trail: Vec::new(),
            fixed_cost: p.constant,
            best: None,
            nodes: 0,
            started: Instant::now(),
            limits,
            timed_out: false,
        }
    }

    fn assign(&mut self, b: usize, x: i8) {
        self.val[b] = x;
        self.trail.push(b);
        self.fixed_cost += self.p.cost[b] * f64::from(x);
        for &(r, a) in &self.var_rows[b] {
            self.min_act[r] += a * f64::from(x) - a.min(0.0);
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let b = self.trail.pop().unwrap();
            let x = self.val[b];
            self.val[b] = -1;
            self.fixed_cost -= self.p.cost[b] * f64::from(x);
            for &(r, a) in &self.var_rows[b] {
                self.min_act[r] -= a * f64::from(x) - a.min(0.0);
            }
        }
    }

    /// Fixes `b` to `x` and everything it implies. `false` on conflict;
    /// the caller undoes to its mark either way.
    fn fix(&mut self, b: usize, x: i8) -> bool {
        if self.val[b] != -1 {
            return self.val[b] == x;
        }
        self.assign(b, x);
        let mut queue: Vec<usize> = self.var_rows[b].iter().map(|&(r, _)| r).collect();
        self.propagate(&mut queue)
    }

    fn propagate(&mut self, queue: &mut Vec<usize>) -> bool {
        while let Some(r) = queue.pop() {
            let row = &self.p.rows[r];
            let slack = row.rhs + EPS - self.min_act[r];
            if slack < 0.0 {
                return false;
            }
            let mut forced = Vec::new();
            for &(u, a) in &row.terms {
                if self.val[u] == -1 && a.abs() > slack {
                    forced.push((u, i8::from(a < 0.0)));
                }
            }
            for (u, x) in forced {
                if self.val[u] == -1 {
                    self.assign(u, x);
                    queue.extend(self.var_rows[u].iter().map(|&(r2, _)| r2));
                } else if self.val[u] != x {
                    return false;
                }
            }
        }
        true
    }

    fn lower_bound(&self) -> f64 {
        let mut bound = self.fixed_cost;
        for &i in &self.p.disjoint {
            let (vars, k) = &self.p.cardinality[i];
            let ones = vars.iter().filter(|&&b| self.val[b] == 1).count();
            if ones > *k {
                return f64::INFINITY;
            }
            let mut free: Vec<f64> = vars
                .iter()
                .filter(|&&b| self.val[b] == -1)
                .map(|&b| self.p.cost[b])
                .collect();
            let need = k - ones;
            if free.len() < need {
                return f64::INFINITY;
            }
            free.sort_by(f64::total_cmp);
            bound += free[..need].iter().sum::<f64>();
        }
        for (b, &x) in self.val.iter().enumerate() {
            if x == -1 && !self.in_disjoint[b] && self.p.cost[b] < 0.0 {
                bound += self.p.cost[b];
            }
        }
        bound
    }

    fn out_of_time(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if let Some(limit) = self.limits.time_limit {
            if self.nodes % 256 == 1 && self.started.elapsed() >= limit {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    fn branch(&mut self, b: usize, order: [i8; 2]) {
        for x in order {
            let mark = self.trail.len();
            if self.fix(b, x) {
                self.dfs();
            }
            self.undo(mark);
            if self.timed_out {
                return;
            }
        }
    }

    fn record(&mut self) {
        if self
            .best
            .as_ref()
            .is_none_or(|(c, _)| self.fixed_cost < c - EPS)
        {
            self.best = Some((self.fixed_cost, self.val.clone()));
        }
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.out_of_time() {
            return;
        }
        let bound = self.lower_bound();
        if !bound.is_finite() {
            return;
        }
        if let Some((best, _)) = &self.best {
            if bound >= best - EPS {
                return;
            }
        }
        for (vars, k) in &self.p.cardinality {
            let ones = vars.iter().filter(|&&b| self.val[b] == 1).count();
            if ones >= *k {
                continue;
            }
            let pick = vars
                .iter()
                .copied()
                .filter(|&b| self.val[b] == -1)
                .min_by(|&a, &b| self.p.cost[a].total_cmp(&self.p.cost[b]).then(a.cmp(&b)));
            if let Some(b) = pick {
                self.branch(b, [1, 0]);
            }
            return;
        }
        if let Some(b) = (0..self.val.len()).find(|&b| self.val[b] == -1 && self.p.cost[b] < 0.0) {
            self.branch(b, [1, 0]);
            return;
        }
        let mark = self.trail.len();
        let before = self.fixed_cost;
        let mut ok = true;
        for b in 0..self.val.len() {
            if self.val[b] == -1 && !self.fix(b, 0) {
                ok = false;
                break;
            }
        }
        let settled = ok && (self.fixed_cost - before).abs() <= EPS;
        if ok {
            self.record();
        }
        self.undo(mark);
        if settled {
            return;
        }
        if let Some(b) = (0..self.val.len()).find(|&b| self.val[b] == -1) {
            self.branch(b, [0, 1]);
        }
    }
}

/// Depth-first branch and bound over the binaries with bound propagation.
/// The bound adds, for each group of variables that must hold exactly `k`
/// ones, the `k` cheapest still-free costs. Solves to a zero gap.
#[derive(Debug, Clone, Copy, Default)]
pub struct BranchAndBound;

impl SolverBackend for BranchAndBound {
    fn name(&self) -> &str {
        "builtin"
    }

    fn solve(
        &self,
        model: &MilpModel,
        warm_start: Option<&[f64]>,
        limits: &SolveLimits,
    ) -> Result<SolveResult, BackendError> {
        let p = Presolved::new(model)?;
        let infeasible = SolveResult {
            status: SolveStatus::Infeasible,
            objective: None,
            values: None,
            warm_start_objective: None,
            nodes: 0,
        };
        if p.trivially_infeasible {
            return Ok(infeasible);
        }
        let mut search = Search::new(&p, *limits);
        let mut warm_start_objective = None;
        if let Some(ws) = warm_start {
            let bits = p.bits_from_values(ws);
            if p.is_feasible(&bits) && p.fixed.iter().all(|&(b, x)| bits[b] == x) {
                let c = p.cost_of(&bits);
                warm_start_objective = Some(c);
                search.best = Some((c, bits));
            }
        }
        let mut queue: Vec<usize> = (0..p.rows.len()).collect();
        let mut ok = true;
        for &(b, x) in &p.fixed {
            if search.val[b] == -1 {
                search.assign(b, x);
            } else if search.val[b] != x {
                ok = false;
            }
        }
        ok = ok && search.propagate(&mut queue);
        if ok {
            search.dfs();
        }
        let status = if search.timed_out {
            SolveStatus::TimeLimit
        } else if search.best.is_some() {
            SolveStatus::Optimal
        } else {
            SolveStatus::Infeasible
        };
        let nodes = search.nodes;
        let best = search.best.take();
        Ok(SolveResult {
            status,
            objective: best.as_ref().map(|b| b.0),
            values: best.map(|(_, bits)| p.recover(&bits)),
            warm_start_objective,
            nodes,
        })
    }
}
