use std::time::Duration;

use thiserror::Error;

use super::milp::MilpModel;

/// Relative optimality gap every backend must reach before reporting
/// [`SolveStatus::Optimal`].
pub const GAP_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveLimits {
    pub time_limit: Option<Duration>,
    pub gap: f64,
}

impl Default for SolveLimits {
    fn default() -> Self {
        Self {
            time_limit: None,
            gap: GAP_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// Stopped early; `values` holds the best solution found, if any.
    TimeLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub objective: Option<f64>,
    /// One value per model variable.
    pub values: Option<Vec<f64>>,
    /// Objective of the warm start, when one was given and accepted.
    pub warm_start_objective: Option<f64>,
    pub nodes: u64,
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("model not supported by this backend: {0}")]
    Unsupported(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver process failed: {0}")]
    Process(String),
    #[error("cannot read solution: {0}")]
    Solution(String),
}

pub trait SolverBackend: Send + Sync {
    fn name(&self) -> &str;

    /// Minimises the model objective. `warm_start`, when given, has one
    /// value per model variable.
    fn solve(
        &self,
        model: &MilpModel,
        warm_start: Option<&[f64]>,
        limits: &SolveLimits,
    ) -> Result<SolveResult, BackendError>;
}
