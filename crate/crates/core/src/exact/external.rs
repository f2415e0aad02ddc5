use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::Command;
use std::thread;
use std::time::{Duration, Instant};

use super::backend::{BackendError, SolveLimits, SolveResult, SolveStatus, SolverBackend};
use super::bnb::Presolved;
use super::lp::export_lp;
use super::milp::MilpModel;

/// Runs `program [args..] <model.lp> <solution.txt>` and reads the
/// solution file back. Warm starts are not forwarded.
///
/// The solution file holds `name value` lines and an optional
/// `status optimal|infeasible|time_limit` line. Unknown names are ignored
/// and missing binaries read as 0.
#[derive(Debug, Clone)]
pub struct ExternalBackend {
    program: PathBuf,
    args: Vec<String>,
}

impl ExternalBackend {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        Self {
            program: program.into(),
            args: Vec::new(),
        }
    }

    pub fn with_args(mut self, args: Vec<String>) -> Self {
        self.args = args;
        self
    }
}

impl SolverBackend for ExternalBackend {
    fn name(&self) -> &str {
        "external"
    }

    fn solve(
        &self,
        model: &MilpModel,
        _warm_start: Option<&[f64]>,
        limits: &SolveLimits,
    ) -> Result<SolveResult, BackendError> {
        let dir = tempfile::tempdir()?;
        let lp_path = dir.path().join("model.lp");
        let sol_path = dir.path().join("solution.txt");
        std::fs::write(&lp_path, export_lp(model))?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .arg(&lp_path)
            .arg(&sol_path)
            .spawn()
            .map_err(|e| BackendError::Process(format!("{}: {e}", self.program.display())))?;
        let started = Instant::now();
        let exit = loop {
            if let Some(status) = child.try_wait()? {
                break status;
            }
            if limits
                .time_limit
                .is_some_and(|limit| started.elapsed() >= limit)
            {
                let _ = child.kill();
                let _ = child.wait();
                return Ok(SolveResult {
                    status: SolveStatus::TimeLimit,
                    objective: None,
                    values: None,
                    warm_start_objective: None,
                    nodes: 0,
                });
            }
            thread::sleep(Duration::from_millis(5));
        };
        if !exit.success() {
            return Err(BackendError::Process(format!(
                "{} exited with {exit}",
                self.program.display()
            )));
        }
        let text = std::fs::read_to_string(&sol_path)
            .map_err(|e| BackendError::Solution(format!("{}: {e}", sol_path.display())))?;
        read_solution(model, &text)
    }
}

/// Turns a solution file into a result. Continuous variables are recomputed
/// from the binaries so that they are consistent with the model.
pub fn read_solution(model: &MilpModel, text: &str) -> Result<SolveResult, BackendError> {
    let (status, raw) = parse_solution(model, text)?;
    let status = status.unwrap_or(SolveStatus::Optimal);
    if status == SolveStatus::Infeasible || (status == SolveStatus::TimeLimit && raw.is_none()) {
        return Ok(SolveResult {
            status,
            objective: None,
            values: None,
            warm_start_objective: None,
            nodes: 0,
        });
    }
    let raw = raw.unwrap_or_else(|| vec![0.0; model.n_variables()]);
    let presolved = Presolved::new(model)?;
    let values = presolved.recover(&presolved.bits_from_values(&raw));
    Ok(SolveResult {
        status,
        objective: Some(model.objective_value(&values)),
        values: Some(values),
        warm_start_objective: None,
        nodes: 0,
    })
}

/// Status line (if any) and variable values (if any value line is present).
pub fn parse_solution(
    model: &MilpModel,
    text: &str,
) -> Result<(Option<SolveStatus>, Option<Vec<f64>>), BackendError> {
    let mut status = None;
    let mut values: Option<Vec<f64>> = None;
    for (i, line) in text.lines().enumerate() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            [w, ..] if w.starts_with('#') => {}
            ["status", s] => {
                status = Some(match s.to_ascii_lowercase().as_str() {
                    "optimal" => SolveStatus::Optimal,
                    "infeasible" => SolveStatus::Infeasible,
                    "time_limit" | "timelimit" => SolveStatus::TimeLimit,
                    other => {
                        return Err(BackendError::Solution(format!(
                            "line {}: unknown status '{other}'",
                            i + 1
                        )))
                    }
                });
            }
            [name, value] => {
                let x: f64 = value.parse().map_err(|_| {
                    BackendError::Solution(format!("line {}: bad value '{value}'", i + 1))
                })?;
                let vals = values.get_or_insert_with(|| vec![0.0; model.n_variables()]);
                if let Some(v) = model.var_index(name) {
                    vals[v] = x;
                }
            }
            _ => {
                return Err(BackendError::Solution(format!(
                    "line {}: expected 'name value'",
                    i + 1
                )))
            }
        }
    }
    Ok((status, values))
}

/// Solution file in the format [`ExternalBackend`] reads.
pub fn write_solution(model: &MilpModel, result: &SolveResult) -> String {
    let mut out = String::new();
    let status = match result.status {
        SolveStatus::Optimal => "optimal",
        SolveStatus::Infeasible => "infeasible",
        SolveStatus::TimeLimit => "time_limit",
    };
    let _ = writeln!(out, "status {status}");
    if let Some(values) = &result.values {
        for (var, &x) in model.variables.iter().zip(values) {
            if x != 0.0 {
                let _ = writeln!(out, "{} {}", var.name, x);
            }
        }
    }
    out
}
