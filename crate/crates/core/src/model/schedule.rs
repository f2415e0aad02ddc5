use std::fmt;

use thiserror::Error;

use super::Instance;

/// Absolute tolerance used whenever two energy costs are compared.
pub const TEC_TOLERANCE: f64 = 1e-9;

/// Why a schedule cannot be evaluated. The variants are stable so tests
/// can match on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum InvalidReason {
    #[error("job {0} is not assigned")]
    MissingJob(usize),
    #[error("job {0} is assigned more than once")]
    DuplicateJob(usize),
    #[error("job {0} does not exist")]
    UnknownJob(usize),
    #[error("machine {0} does not exist")]
    UnknownMachine(usize),
    #[error("job {job} uses slot {slot}, outside the horizon")]
    SlotOutOfRange { job: usize, slot: usize },
    #[error("job {job} is assigned {got} distinct slots instead of its processing time")]
    WrongCardinality { job: usize, got: usize },
    #[error("slot {slot} on machine {machine} is used by more than one job")]
    Overlap { machine: usize, slot: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("invalid schedule: {0}")]
    Invalid(#[from] InvalidReason),
    #[error("schedule is not feasible: job {0} does not occupy consecutive slots")]
    NotContiguous(usize),
    #[error("schedule makespan {makespan} exceeds horizon {horizon}")]
    BeyondHorizon { makespan: usize, horizon: usize },
}

/// The two objective values of a schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Objectives {
    pub makespan: usize,
    pub tec: f64,
}

impl Objectives {
    pub fn new(makespan: usize, tec: f64) -> Self {
        Self { makespan, tec }
    }

    /// `self` is at least as good as `other` in both objectives.
    pub fn weakly_dominates(&self, other: &Objectives) -> bool {
        self.makespan <= other.makespan && self.tec <= other.tec + TEC_TOLERANCE
    }

    pub fn approx_eq(&self, other: &Objectives) -> bool {
        self.makespan == other.makespan && (self.tec - other.tec).abs() <= TEC_TOLERANCE
    }
}

impl fmt::Display for Objectives {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.makespan, self.tec)
    }
}

/// A job assigned to an arbitrary set of slots on one machine. Used for
/// split and preemptive intermediates; feasible schedules use [`Schedule`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub job: usize,
    pub machine: usize,
    /// 1-based slot indices, strictly increasing.
    pub slots: Vec<usize>,
}

impl Assignment {
    pub fn new(job: usize, machine: usize, mut slots: Vec<usize>) -> Self {
        slots.sort_unstable();
        Self {
            job,
            machine,
            slots,
        }
    }

    pub fn contiguous(job: usize, machine: usize, start: usize, len: usize) -> Self {
        Self {
            job,
            machine,
            slots: (start..start + len).collect(),
        }
    }

    pub fn start(&self) -> Option<usize> {
        self.slots.first().copied()
    }

    pub fn completion(&self) -> Option<usize> {
        self.slots.last().copied()
    }

    pub fn is_contiguous(&self) -> bool {
        self.slots.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// A general (possibly split, preemptive or malformed) schedule.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlotSchedule {
    pub assignments: Vec<Assignment>,
}

impl SlotSchedule {
    pub fn new(assignments: Vec<Assignment>) -> Self {
        Self { assignments }
    }
}

/// Where a job runs in a feasible schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement {
    pub machine: usize,
    /// First slot (1-based).
    pub start: usize,
}

/// A feasible schedule in compact form: one `(machine, start)` per job.
/// Each job occupies `start..start + p_j` on its machine and no two jobs
/// on a machine share a slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    placements: Vec<Placement>,
}

impl Schedule {
    /// Validates `placements` against `instance`.
    pub fn new(instance: &Instance, placements: Vec<Placement>) -> Result<Self, ScheduleError> {
        let schedule = Self { placements };
        schedule.validate(instance)?;
        Ok(schedule)
    }

    pub(crate) fn from_placements_unchecked(placements: Vec<Placement>) -> Self {
        Self { placements }
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn placement(&self, job: usize) -> Placement {
        self.placements[job]
    }

    pub fn n_jobs(&self) -> usize {
        self.placements.len()
    }

    pub fn completion(&self, instance: &Instance, job: usize) -> usize {
        self.placements[job].start + instance.processing_time(job) - 1
    }

    pub fn makespan(&self, instance: &Instance) -> usize {
        (0..self.placements.len())
            .map(|j| self.completion(instance, j))
            .max()
            .unwrap_or(0)
    }

    pub fn tec(&self, instance: &Instance) -> f64 {
        self.placements
            .iter()
            .enumerate()
            .map(|(j, pl)| instance.window_cost(pl.machine, pl.start, instance.processing_time(j)))
            .sum()
    }

    pub fn objectives(&self, instance: &Instance) -> Objectives {
        Objectives::new(self.makespan(instance), self.tec(instance))
    }

    /// Jobs on `machine`, ordered by start slot.
    pub fn jobs_on(&self, machine: usize) -> Vec<usize> {
        let mut jobs: Vec<usize> = (0..self.placements.len())
            .filter(|&j| self.placements[j].machine == machine)
            .collect();
        jobs.sort_by_key(|&j| self.placements[j].start);
        jobs
    }

    pub fn to_slot_schedule(&self, instance: &Instance) -> SlotSchedule {
        SlotSchedule::new(
            self.placements
                .iter()
                .enumerate()
                .map(|(j, pl)| {
                    Assignment::contiguous(j, pl.machine, pl.start, instance.processing_time(j))
                })
                .collect(),
        )
    }

    pub fn validate(&self, instance: &Instance) -> Result<(), ScheduleError> {
        if self.placements.len() != instance.n_jobs() {
            let missing = self.placements.len().min(instance.n_jobs());
            return Err(if self.placements.len() < instance.n_jobs() {
                InvalidReason::MissingJob(missing).into()
            } else {
                InvalidReason::UnknownJob(missing).into()
            });
        }
        let k = instance.n_slots();
        let mut owner = vec![vec![None; k]; instance.n_machines()];
        for (j, pl) in self.placements.iter().enumerate() {
            if pl.machine >= instance.n_machines() {
                return Err(InvalidReason::UnknownMachine(pl.machine).into());
            }
            let end = pl.start + instance.processing_time(j) - 1;
            if pl.start == 0 || end > k {
                let slot = if pl.start == 0 { 0 } else { end };
                return Err(InvalidReason::SlotOutOfRange { job: j, slot }.into());
            }
            for t in pl.start..=end {
                let cell = &mut owner[pl.machine][t - 1];
                if cell.is_some() {
                    return Err(InvalidReason::Overlap {
                        machine: pl.machine,
                        slot: t,
                    }
                    .into());
                }
                *cell = Some(j);
            }
        }
        Ok(())
    }
}

/// Feasibility classification of a general schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleClass {
    /// Every job runs in consecutive slots.
    Feasible,
    /// Some job is interrupted, but every gap inside its slot set is
    /// covered by other jobs; convertible to an equivalent feasible one.
    Split,
    /// Some job's slots are separated by at least one idle slot.
    PreemptiveNonSplit,
    Invalid(InvalidReason),
}

/// Per-machine slot owners after structural validation.
fn occupancy(
    instance: &Instance,
    schedule: &SlotSchedule,
) -> Result<Vec<Vec<Option<usize>>>, InvalidReason> {
    let n = instance.n_jobs();
    let k = instance.n_slots();
    let mut seen = vec![false; n];
    for a in &schedule.assignments {
        if a.job >= n {
            return Err(InvalidReason::UnknownJob(a.job));
        }
        if seen[a.job] {
            return Err(InvalidReason::DuplicateJob(a.job));
        }
        seen[a.job] = true;
    }
    if let Some(job) = seen.iter().position(|s| !s) {
        return Err(InvalidReason::MissingJob(job));
    }
    let mut owner = vec![vec![None; k]; instance.n_machines()];
    for a in &schedule.assignments {
        if a.machine >= instance.n_machines() {
            return Err(InvalidReason::UnknownMachine(a.machine));
        }
        let mut slots = a.slots.clone();
        slots.sort_unstable();
        slots.dedup();
        if let Some(&slot) = slots.iter().find(|&&t| t == 0 || t > k) {
            return Err(InvalidReason::SlotOutOfRange { job: a.job, slot });
        }
        if slots.len() != instance.processing_time(a.job) || slots.len() != a.slots.len() {
            return Err(InvalidReason::WrongCardinality {
                job: a.job,
                got: slots.len(),
            });
        }
        for &t in &slots {
            let cell = &mut owner[a.machine][t - 1];
            if cell.is_some() {
                return Err(InvalidReason::Overlap {
                    machine: a.machine,
                    slot: t,
                });
            }
            *cell = Some(a.job);
        }
    }
    Ok(owner)
}

pub fn classify(instance: &Instance, schedule: &SlotSchedule) -> ScheduleClass {
    let owner = match occupancy(instance, schedule) {
        Ok(owner) => owner,
        Err(reason) => return ScheduleClass::Invalid(reason),
    };
    let mut class = ScheduleClass::Feasible;
    for a in &schedule.assignments {
        let mut slots = a.slots.clone();
        slots.sort_unstable();
        for w in slots.windows(2) {
            if w[1] == w[0] + 1 {
                continue;
            }
            let covered = (w[0] + 1..w[1]).all(|t| owner[a.machine][t - 1].is_some());
            if !covered {
                return ScheduleClass::PreemptiveNonSplit;
            }
            class = ScheduleClass::Split;
        }
    }
    class
}

/// Makespan and TEC of a total, non-overlapping schedule. Split and
/// preemptive schedules are accepted.
pub fn evaluate(instance: &Instance, schedule: &SlotSchedule) -> Result<Objectives, ScheduleError> {
    occupancy(instance, schedule)?;
    let mut makespan = 0;
    let mut tec = 0.0;
    for a in &schedule.assignments {
        makespan = makespan.max(a.slots.iter().copied().max().unwrap_or(0));
        let sum: f64 = a.slots.iter().map(|&t| instance.slot_cost(t)).sum();
        tec += instance.rate(a.machine) * sum;
    }
    Ok(Objectives::new(makespan, tec))
}
