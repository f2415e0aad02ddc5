use super::{Objectives, Schedule, TEC_TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub objectives: Objectives,
    pub schedule: Option<Schedule>,
}

impl FrontPoint {
    pub fn new(objectives: Objectives, schedule: Option<Schedule>) -> Self {
        Self {
            objectives,
            schedule,
        }
    }
}

/// Mutually non-dominated points sorted by makespan ascending, so TEC is
/// strictly descending.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Front {
    points: Vec<FrontPoint>,
}

impl Front {
    /// Keeps the non-dominated subset of `points`. Among duplicates the
    /// first occurrence wins.
    pub fn from_points(points: Vec<FrontPoint>) -> Self {
        let mut points = points;
        // stable sort keeps the first of equal points in front
        points.sort_by(|a, b| {
            a.objectives
                .makespan
                .cmp(&b.objectives.makespan)
                .then(a.objectives.tec.total_cmp(&b.objectives.tec))
        });
        let mut kept: Vec<FrontPoint> = Vec::new();
        for point in points {
            let dominated = kept
                .last()
                .is_some_and(|last| last.objectives.tec <= point.objectives.tec + TEC_TOLERANCE);
            if !dominated {
                kept.push(point);
            }
        }
        Self { points: kept }
    }

    pub fn points(&self) -> &[FrontPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<FrontPoint> {
        self.points
    }

    pub fn objectives(&self) -> Vec<Objectives> {
        self.points.iter().map(|p| p.objectives).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same points up to the TEC tolerance.
    pub fn same_points(&self, other: &Front) -> bool {
        self.len() == other.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| a.objectives.approx_eq(&b.objectives))
    }
}

pub fn pareto_filter(points: &[Objectives]) -> Front {
    Front::from_points(points.iter().map(|&o| FrontPoint::new(o, None)).collect())
}
