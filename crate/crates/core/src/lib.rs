//! Bi-objective scheduling of jobs on identical parallel machines under
//! time-of-use energy prices: minimise the makespan and the total energy
//! cost (TEC) at the same time.
//!
//! Slots are numbered from 1; jobs and machines from 0.

pub mod bench;
pub mod exact;
pub mod heuristics;
pub mod metrics;
pub mod model;

pub use model::*;
