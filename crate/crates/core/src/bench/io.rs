use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::metrics::Point;
use crate::model::{Front, Instance, InstanceError, Placement};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: InstanceError },
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with `#` comments removed, tagged with 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            (
                i + 1,
                l.split('#')
                    .next()
                    .unwrap_or("")
                    .split_whitespace()
                    .collect::<Vec<_>>(),
            )
        })
        .filter(|(_, toks)| !toks.is_empty())
        .collect()
}

fn parse_tokens<T: std::str::FromStr>(
    line: usize,
    toks: &[&str],
    expected: usize,
    what: &str,
) -> Result<Vec<T>, FormatError> {
    if toks.len() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} {what}, found {}", toks.len()),
        ));
    }
    toks.iter()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("invalid {what} token '{t}'")))
        })
        .collect()
}

/// Canonical text form: `N M K`, then the processing times, the rates and
/// the slot prices, one list per line.
pub fn format_instance(instance: &Instance) -> String {
    let join = |xs: Vec<String>| xs.join(" ");
    format!(
        "{} {} {}\n{}\n{}\n{}\n",
        instance.n_jobs(),
        instance.n_machines(),
        instance.n_slots(),
        join(
            instance
                .processing_times()
                .iter()
                .map(|p| p.to_string())
                .collect()
        ),
        join(
            instance
                .consumption_rates()
                .iter()
                .map(|u| u.to_string())
                .collect()
        ),
        join(
            instance
                .slot_costs()
                .iter()
                .map(|c| c.to_string())
                .collect()
        ),
    )
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let lines = content_lines(text);
    let line_no = |i: usize| lines.get(i).map_or(text.lines().count() + 1, |l| l.0);
    let get = |i: usize, what: &str| {
        lines
            .get(i)
            .ok_or_else(|| parse_err(line_no(i), format!("missing {what} line")))
    };
    let (l0, header) = get(0, "header")?;
    let dims: Vec<usize> = parse_tokens(*l0, header, 3, "dimension")?;
    let (n, m, k) = (dims[0], dims[1], dims[2]);
    let (l1, toks) = get(1, "processing time")?;
    let p: Vec<usize> = parse_tokens(*l1, toks, n, "processing time")?;
    let (l2, toks) = get(2, "rate")?;
    let u: Vec<f64> = parse_tokens(*l2, toks, m, "rate")?;
    let (l3, toks) = get(3, "slot cost")?;
    let c: Vec<f64> = parse_tokens(*l3, toks, k, "slot cost")?;
    if let Some((extra, _)) = lines.get(4) {
        return Err(parse_err(*extra, "unexpected content after slot costs"));
    }
    Instance::new(p, u, c).map_err(|source| {
        let line = match source {
            InstanceError::ProcessingTime { .. } => *l1,
            InstanceError::Rate { .. } => *l2,
            InstanceError::SlotCost { .. } => *l3,
            _ => *l0,
        };
        FormatError::Invalid { line, source }
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, FormatError> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn write_instance(instance: &Instance, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, format_instance(instance))?;
    Ok(())
}

/// `makespan,tec` rows in ascending makespan, TEC with six decimals.
pub fn format_front_csv(front: &Front) -> String {
    let mut out = String::from("makespan,tec\n");
    for p in front.points() {
        let _ = writeln!(out, "{},{:.6}", p.objectives.makespan, p.objectives.tec);
    }
    out
}

/// Points of a `makespan,tec` file; extra columns are ignored.
pub fn parse_front_csv(text: &str) -> Result<Vec<Point>, FormatError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        let field = |j: usize| -> Result<f64, FormatError> {
            let tok = rec
                .get(j)
                .ok_or_else(|| parse_err(line, "expected two columns"))?;
            tok.parse()
                .map_err(|_| parse_err(line, format!("invalid number '{tok}'")))
        };
        out.push([field(0)?, field(1)?]);
    }
    Ok(out)
}

pub fn read_front_csv(path: &Path) -> Result<Vec<Point>, FormatError> {
    parse_front_csv(&std::fs::read_to_string(path)?)
}

/// Schedules behind a front: a `point <makespan> <tec>` line per point,
/// then one `job machine start` line per job.
pub fn format_sidecar(front: &Front) -> String {
    let mut out = String::new();
    for p in front.points() {
        let Some(s) = &p.schedule else { continue };
        let _ = writeln!(out, "point {} {}", p.objectives.makespan, p.objectives.tec);
        for (j, pl) in s.placements().iter().enumerate() {
            let _ = writeln!(out, "{j} {} {}", pl.machine, pl.start);
        }
    }
    out
}

/// A schedule read back from a sidecar file, placements indexed by job.
#[derive(Debug, Clone, PartialEq)]
pub struct SidecarEntry {
    pub makespan: usize,
    pub tec: f64,
    pub placements: Vec<Placement>,
}

pub fn parse_sidecar(text: &str) -> Result<Vec<SidecarEntry>, FormatError> {
    let mut out: Vec<SidecarEntry> = Vec::new();
    let mut jobs: Vec<Vec<(usize, Placement)>> = Vec::new();
    for (line, toks) in content_lines(text) {
        if toks[0] == "point" {
            if toks.len() != 3 {
                return Err(parse_err(line, "expected 'point <makespan> <tec>'"));
            }
            let makespan = toks[1]
                .parse()
                .map_err(|_| parse_err(line, format!("invalid makespan '{}'", toks[1])))?;
            let tec = toks[2]
                .parse()
                .map_err(|_| parse_err(line, format!("invalid tec '{}'", toks[2])))?;
            out.push(SidecarEntry {
                makespan,
                tec,
                placements: Vec::new(),
            });
            jobs.push(Vec::new());
            continue;
        }
        let v: Vec<usize> = parse_tokens(line, &toks, 3, "placement field")?;
        let Some(current) = jobs.last_mut() else {
            return Err(parse_err(line, "placement before any 'point' line"));
        };
        current.push((
            v[0],
            Placement {
                machine: v[1],
                start: v[2],
            },
        ));
    }
    for (entry, mut js) in out.iter_mut().zip(jobs) {
        js.sort_by_key(|&(j, _)| j);
        entry.placements = js.into_iter().map(|(_, pl)| pl).collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Front, FrontPoint, Objectives, Schedule};

    #[test]
    fn minimal_file() {
        let inst = parse_instance("1 1 1\n1\n1.0\n1.0\n").unwrap();
        assert_eq!(inst.n_jobs(), 1);
        assert_eq!(inst.slot_cost(1), 1.0);
    }

    #[test]
    fn canonical_round_trip() {
        let text = "# demo\n3 1 4\n3 2 1   # jobs\n1.5\n1 5 2 3\n";
        let inst = parse_instance(text).unwrap();
        let canon = format_instance(&inst);
        assert_eq!(canon, "3 1 4\n3 2 1\n1.5\n1 5 2 3\n");
        assert_eq!(format_instance(&parse_instance(&canon).unwrap()), canon);
    }

    #[test]
    fn errors_name_line_and_token() {
        let err = parse_instance("1 1 2\n3\n1\n1 1\n").unwrap_err();
        assert!(matches!(err, FormatError::Invalid { line: 2, .. }), "{err}");
        let err = parse_instance("1 1 2\n1\nx\n1 1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: invalid rate token 'x'");
        let err = parse_instance("1 1 2\n1\n1\n").unwrap_err();
        assert!(err.to_string().contains("missing slot cost"));
    }

    #[test]
    fn front_csv_round_trip() {
        let inst = Instance::new(vec![1], vec![1.0], vec![3.0, 1.0, 2.0]).unwrap();
        let s1 = Schedule::new(
            &inst,
            vec![Placement {
                machine: 0,
                start: 1,
            }],
        )
        .unwrap();
        let s2 = Schedule::new(
            &inst,
            vec![Placement {
                machine: 0,
                start: 2,
            }],
        )
        .unwrap();
        let front = Front::from_points(vec![
            FrontPoint::new(Objectives::new(2, 1.0), Some(s2)),
            FrontPoint::new(Objectives::new(1, 3.0), Some(s1)),
        ]);
        let csv = format_front_csv(&front);
        assert_eq!(csv, "makespan,tec\n1,3.000000\n2,1.000000\n");
        assert_eq!(parse_front_csv(&csv).unwrap(), vec![[1.0, 3.0], [2.0, 1.0]]);
        let side = parse_sidecar(&format_sidecar(&front)).unwrap();
        assert_eq!(side.len(), 2);
        assert_eq!(
            side[1].placements,
            vec![Placement {
                machine: 0,
                start: 2
            }]
        );
        assert!(parse_sidecar("0 0 1\n").is_err());
    }
}
