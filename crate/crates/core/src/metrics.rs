//! Quality indicators for approximation fronts (both objectives minimised).

use thiserror::Error;

use crate::model::{Front, FrontPoint};

/// `[makespan, tec]`.
pub type Point = [f64; 2];

const EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("reference front is empty")]
    EmptyReference,
    #[error("front is empty")]
    EmptyFront,
    #[error("no runs given")]
    NoRuns,
}

pub fn points_of(front: &Front) -> Vec<Point> {
    front
        .points()
        .iter()
        .map(|p| [p.objectives.makespan as f64, p.objectives.tec])
        .collect()
}

/// Non-dominated union of several fronts.
pub fn reference_front(fronts: &[Front]) -> Front {
    Front::from_points(
        fronts
            .iter()
            .flat_map(|f| f.points().iter().cloned())
            .collect::<Vec<FrontPoint>>(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    None,
    /// Scale each objective so the reference spans `[0, 1]`.
    ReferenceExtremes,
}

fn euclid(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Mean distance from each reference point to its nearest front point.
pub fn d_r(
    front: &[Point],
    reference: &[Point],
    normalization: Normalization,
) -> Result<f64, MetricError> {
    if reference.is_empty() {
        return Err(MetricError::EmptyReference);
    }
    if front.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    let scale = |p: Point| -> Point {
        match normalization {
            Normalization::None => p,
            Normalization::ReferenceExtremes => {
                let mut out = p;
                for (axis, v) in out.iter_mut().enumerate() {
                    let lo = reference
                        .iter()
                        .map(|r| r[axis])
                        .fold(f64::INFINITY, f64::min);
                    let hi = reference
                        .iter()
                        .map(|r| r[axis])
                        .fold(f64::NEG_INFINITY, f64::max);
                    let span = if hi > lo { hi - lo } else { 1.0 };
                    *v = (*v - lo) / span;
                }
                out
            }
        }
    };
    let total: f64 = reference
        .iter()
        .map(|&r| {
            front
                .iter()
                .map(|&f| euclid(scale(r), scale(f)))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    Ok(total / reference.len() as f64)
}

fn same_point(a: Point, b: Point) -> bool {
    a[0] == b[0] && (a[1] * 1e9).round() == (b[1] * 1e9).round()
}

/// Share of the front's points that belong to the reference front.
pub fn purity(front: &[Point], reference: &[Point]) -> Result<f64, MetricError> {
    if front.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    let hits = front
        .iter()
        .filter(|&&p| reference.iter().any(|&r| same_point(p, r)))
        .count();
    Ok(hits as f64 / front.len() as f64)
}

/// Area dominated by the front and bounded by `reference_point`. Points
/// not strictly better than the reference point in both objectives add
/// nothing.
pub fn hypervolume(front: &[Point], reference_point: Point) -> f64 {
    let mut pts: Vec<Point> = front
        .iter()
        .copied()
        .filter(|p| p[0] < reference_point[0] && p[1] < reference_point[1])
        .collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut staircase: Vec<Point> = Vec::new();
    for p in pts {
        if staircase.last().is_none_or(|last| p[1] < last[1]) {
            staircase.push(p);
        }
    }
    let mut area = 0.0;
    for (i, p) in staircase.iter().enumerate() {
        let next_x = staircase.get(i + 1).map_or(reference_point[0], |q| q[0]);
        area += (next_x - p[0]) * (reference_point[1] - p[1]);
    }
    area
}

fn sorted(front: &[Point]) -> Vec<Point> {
    let mut pts = front.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts
}

/// Root-mean-square deviation of nearest-neighbour Manhattan distances.
/// The mean is taken over the first `N - 1` distances after sorting by
/// makespan. `None` for fewer than two points.
pub fn spacing(front: &[Point]) -> Option<f64> {
    let pts = sorted(front);
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let delta: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| (pts[i][0] - pts[j][0]).abs() + (pts[i][1] - pts[j][1]).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = delta[..n - 1].iter().sum::<f64>() / (n - 1) as f64;
    let var = delta.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n as f64;
    Some(var.sqrt())
}

/// Spread of consecutive gaps, plus the distances from the reference's
/// extreme points (least makespan, least TEC) to the front's ends. With no
/// reference those two distances are 0. `None` for fewer than two points
/// or a zero denominator.
pub fn spread(front: &[Point], reference: Option<&[Point]>) -> Option<f64> {
    let pts = sorted(front);
    let n = pts.len();
    if n < 2 {
        return None;
    }
    let gaps: Vec<f64> = pts.windows(2).map(|w| euclid(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let (d_f, d_l) = match reference.filter(|r| !r.is_empty()) {
        None => (0.0, 0.0),
        Some(r) => {
            let r = sorted(r);
            let first = r[0];
            let last = *r
                .iter()
                .min_by(|a, b| a[1].total_cmp(&b[1]).then(a[0].total_cmp(&b[0])))
                .unwrap();
            (euclid(first, pts[0]), euclid(last, pts[n - 1]))
        }
    };
    let num = d_f + d_l + gaps.iter().map(|g| (g - mean).abs()).sum::<f64>();
    let den = d_f + d_l + (n - 1) as f64 * mean;
    (den > 0.0).then(|| num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Feasible,
    Infeasible { unscheduled: usize },
}

/// Share of infeasible points.
pub fn fm1(points: &[PointStatus]) -> Result<f64, MetricError> {
    if points.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    let bad = points
        .iter()
        .filter(|s| matches!(s, PointStatus::Infeasible { .. }))
        .count();
    Ok(bad as f64 / points.len() as f64)
}

/// Average share of unscheduled jobs over the infeasible points; 0 when
/// every point is feasible.
pub fn fm2(points: &[PointStatus], n_jobs: usize) -> Result<f64, MetricError> {
    if points.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    let (bad, missing) = points.iter().fold((0usize, 0usize), |(b, m), s| match s {
        PointStatus::Feasible => (b, m),
        PointStatus::Infeasible { unscheduled } => (b + 1, m + unscheduled),
    });
    if bad == 0 {
        return Ok(0.0);
    }
    Ok(missing as f64 / (bad * n_jobs) as f64)
}

/// For each query, the share of runs holding a point at least as good in
/// both objectives.
pub fn eaf(runs: &[Vec<Point>], queries: &[Point]) -> Result<Vec<f64>, MetricError> {
    if runs.is_empty() {
        return Err(MetricError::NoRuns);
    }
    Ok(queries
        .iter()
        .map(|q| {
            let hits = runs
                .iter()
                .filter(|run| {
                    run.iter()
                        .any(|p| p[0] <= q[0] + EQ_TOL && p[1] <= q[1] + EQ_TOL)
                })
                .count();
            hits as f64 / runs.len() as f64
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub hypervolume: Option<f64>,
    pub purity: Option<f64>,
    pub d_r: Option<f64>,
    pub spacing: Option<f64>,
    pub spread: Option<f64>,
    pub fm1: Option<f64>,
    pub fm2: Option<f64>,
    pub reference_point: Point,
}

/// All indicators of `front` against `reference`. Points without a
/// schedule-level annotation count as feasible.
pub fn report(
    front: &[Point],
    reference: &[Point],
    reference_point: Point,
    statuses: Option<&[PointStatus]>,
    n_jobs: usize,
) -> MetricReport {
    let feasible;
    let statuses = match statuses {
        Some(s) => s,
        None => {
            feasible = vec![PointStatus::Feasible; front.len()];
            &feasible
        }
    };
    MetricReport {
        hypervolume: Some(hypervolume(front, reference_point)),
        purity: purity(front, reference).ok(),
        d_r: d_r(front, reference, Normalization::None).ok(),
        spacing: spacing(front),
        spread: spread(front, Some(reference)),
        fm1: fm1(statuses).ok(),
        fm2: fm2(statuses, n_jobs).ok(),
        reference_point,
    }
}

/// Worst value of each objective over `points`, plus one.
pub fn default_reference_point(points: &[Point]) -> Point {
    let worst = |axis: usize| points.iter().map(|p| p[axis]).fold(0.0, f64::max);
    [worst(0) + 1.0, worst(1) + 1.0]
}
