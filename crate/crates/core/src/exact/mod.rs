//! MILP models for fixed horizons, a built-in branch-and-bound solver, an
//! external-process solver, exhaustive enumeration, and the exact
//! epsilon-constraint sweep over horizons.

mod backend;
mod bnb;
mod external;
mod formulation;
mod lp;
mod milp;
mod oracle;
mod pareto;

pub use backend::{
    BackendError, SolveLimits, SolveResult, SolveStatus, SolverBackend, GAP_TOLERANCE,
};
pub use bnb::BranchAndBound;
pub use external::{parse_solution, read_solution, write_solution, ExternalBackend};
pub use formulation::{build_f1, build_f2};
pub use lp::{export_lp, import_lp, LpParseError};
pub use milp::{Constraint, Family, Formulation, MilpModel, Sense, VarKind, VarRole, Variable};
pub use oracle::{
    oracle_pareto, oracle_pareto_with, oracle_table, OracleError, OracleLimits, OracleTable,
};
pub use pareto::{
    distinct_ptime_bound, exact_pareto, necessary_feasibility, schedule_from_y,
    warm_start_from_schedule, ExactError, ExactOptions, ExactOutcome, Feasibility, GenerateError,
    LevelRecord, WarmStartError, YValues,
};
