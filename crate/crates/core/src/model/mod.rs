//! Instances, schedules, objectives and Pareto fronts.

mod derive;
mod front;
mod instance;
mod schedule;

pub use derive::{derive, DerivedData};
pub use front::{pareto_filter, Front, FrontPoint};
pub use instance::{lower_bound_makespan, Instance, InstanceError};
pub use schedule::{
    classify, evaluate, Assignment, InvalidReason, Objectives, Placement, Schedule, ScheduleClass,
    ScheduleError, SlotSchedule, TEC_TOLERANCE,
};
