use std::fmt::Write as _;

use crate::metrics::{eaf, report, MetricError, MetricReport, Point};

pub const METRIC_COLUMNS: [&str; 7] = [
    "hypervolume",
    "purity",
    "d_r",
    "spacing",
    "spread",
    "fm1",
    "fm2",
];

fn values(r: &MetricReport) -> [Option<f64>; 7] {
    [
        r.hypervolume,
        r.purity,
        r.d_r,
        r.spacing,
        r.spread,
        r.fm1,
        r.fm2,
    ]
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.9}")).unwrap_or_default()
}

/// One row per labelled front against `reference`, then a `mean` row.
/// Undefined indicators are left empty and skipped when averaging.
pub fn emit_metrics(
    fronts: &[(String, Vec<Point>)],
    reference: &[Point],
    reference_point: Point,
    n_jobs: usize,
) -> Result<String, MetricError> {
    if fronts.is_empty() {
        return Err(MetricError::EmptyFront);
    }
    let mut out = format!("front,{}\n", METRIC_COLUMNS.join(","));
    let mut sums = [(0.0, 0usize); 7];
    for (label, points) in fronts {
        let r = report(points, reference, reference_point, None, n_jobs);
        let row = values(&r);
        for (acc, v) in sums.iter_mut().zip(row) {
            if let Some(v) = v {
                acc.0 += v;
                acc.1 += 1;
            }
        }
        let cells: Vec<String> = row.into_iter().map(cell).collect();
        let _ = writeln!(out, "{label},{}", cells.join(","));
    }
    let means: Vec<String> = sums
        .iter()
        .map(|&(s, n)| cell((n > 0).then(|| s / n as f64)))
        .collect();
    let _ = writeln!(out, "mean,{}", means.join(","));
    Ok(out)
}

/// `makespan,tec,attainment` for every query point.
pub fn emit_eaf(runs: &[Vec<Point>], queries: &[Point]) -> Result<String, MetricError> {
    let levels = eaf(runs, queries)?;
    let mut out = String::from("makespan,tec,attainment\n");
    for (q, a) in queries.iter().zip(levels) {
        let _ = writeln!(out, "{},{},{a:.6}", q[0], q[1]);
    }
    Ok(out)
}
