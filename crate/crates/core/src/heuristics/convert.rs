use thiserror::Error;

use crate::model::{
    classify, Instance, InvalidReason, Placement, Schedule, ScheduleClass, SlotSchedule,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("schedule has a job with an idle slot inside its slot set")]
    Preemptive,
    #[error("invalid schedule: {0}")]
    Invalid(InvalidReason),
}

/// Turns a split schedule into a feasible one that uses exactly the same
/// slots on every machine and keeps the start order of the jobs.
pub fn convert_schedule(
    instance: &Instance,
    schedule: &SlotSchedule,
) -> Result<Schedule, ConvertError> {
    match classify(instance, schedule) {
        ScheduleClass::Feasible | ScheduleClass::Split => {}
        ScheduleClass::PreemptiveNonSplit => return Err(ConvertError::Preemptive),
        ScheduleClass::Invalid(reason) => return Err(ConvertError::Invalid(reason)),
    }
    Ok(convert_unchecked(instance, schedule))
}

/// [`convert_schedule`] without the classification pass. The input must
/// be feasible or split.
pub(crate) fn convert_unchecked(instance: &Instance, schedule: &SlotSchedule) -> Schedule {
    let mut placements = vec![
        Placement {
            machine: 0,
            start: 0
        };
        instance.n_jobs()
    ];
    let mut per_machine: Vec<Vec<(usize, usize)>> = vec![Vec::new(); instance.n_machines()];
    for a in &schedule.assignments {
        let first = *a.slots.iter().min().expect("assignment without slots");
        per_machine[a.machine].push((first, a.job));
    }
    for (machine, jobs) in per_machine.iter_mut().enumerate() {
        jobs.sort_unstable();
        let mut next = 1;
        for &(first, job) in jobs.iter() {
            let start = next.max(first);
            placements[job] = Placement { machine, start };
            next = start + instance.processing_time(job);
        }
    }
    Schedule::from_placements_unchecked(placements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate, Assignment};

    #[test]
    fn interleaved_block_becomes_contiguous() {
        // j0 on {3,6} wraps j1 on {4,5}
        let inst = Instance::new(vec![2, 2], vec![1.0], (1..=8).map(f64::from).collect()).unwrap();
        let split = SlotSchedule::new(vec![
            Assignment::new(0, 0, vec![3, 6]),
            Assignment::new(1, 0, vec![4, 5]),
        ]);
        assert_eq!(classify(&inst, &split), ScheduleClass::Split);
        let out = convert_schedule(&inst, &split).unwrap();
        assert_eq!(out.placement(0).start, 3);
        assert_eq!(out.placement(1).start, 5);
        let before = evaluate(&inst, &split).unwrap();
        assert_eq!(out.objectives(&inst), before);
    }

    #[test]
    fn feasible_input_is_unchanged() {
        let inst = Instance::new(vec![2, 1], vec![1.0, 1.0], vec![1.0; 5]).unwrap();
        let s = SlotSchedule::new(vec![
            Assignment::contiguous(0, 1, 2, 2),
            Assignment::contiguous(1, 0, 5, 1),
        ]);
        let out = convert_schedule(&inst, &s).unwrap();
        assert_eq!(out.to_slot_schedule(&inst), s);
    }

    #[test]
    fn rejects_preemptive_and_invalid() {
        let inst = Instance::new(vec![2, 2], vec![1.0], vec![1.0; 8]).unwrap();
        let pre = SlotSchedule::new(vec![
            Assignment::contiguous(0, 0, 4, 2),
            Assignment::new(1, 0, vec![3, 7]),
        ]);
        assert_eq!(convert_schedule(&inst, &pre), Err(ConvertError::Preemptive));
        let bad = SlotSchedule::new(vec![Assignment::contiguous(0, 0, 4, 2)]);
        assert!(matches!(
            convert_schedule(&inst, &bad),
            Err(ConvertError::Invalid(_))
        ));
    }
}
