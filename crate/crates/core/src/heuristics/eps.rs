use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::model::{Instance, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpsKind {
    /// Exactly one job fills the window.
    J,
    /// At least one idle slot.
    I,
}

/// A window of `length` adjacent slots on one machine that contains only
/// idle slots and whole jobs, with the cost statistics used for pruning.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsRecord {
    pub machine: usize,
    pub start: usize,
    pub length: usize,
    pub kind: EpsKind,
    /// Jobs inside the window, by start slot.
    pub member_jobs: Vec<usize>,
    /// Busy slots in the window.
    pub assigned_count: usize,
    /// `sorted_prefix[n]`: rate times the sum of the `n` cheapest window slots.
    pub sorted_prefix: Vec<f64>,
    /// Rate times the sum of all window slots.
    pub window_sum: f64,
    /// Energy cost of the member jobs.
    pub sub_tec: f64,
}

impl EpsRecord {
    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }

    pub fn slots(&self) -> RangeInclusive<usize> {
        self.start..=self.end()
    }

    pub fn overlaps(&self, other: &EpsRecord) -> bool {
        self.machine == other.machine && self.start <= other.end() && other.start <= self.end()
    }
}

/// Slot owners of a feasible schedule, restricted to a horizon.
pub(crate) struct Occupancy<'a> {
    instance: &'a Instance,
    schedule: &'a Schedule,
    horizon: usize,
    owner: Vec<Vec<Option<usize>>>,
}

impl<'a> Occupancy<'a> {
    pub(crate) fn new(instance: &'a Instance, schedule: &'a Schedule, horizon: usize) -> Self {
        let mut owner = vec![vec![None; horizon]; instance.n_machines()];
        for (j, pl) in schedule.placements().iter().enumerate() {
            for t in pl.start..pl.start + instance.processing_time(j) {
                if t <= horizon {
                    owner[pl.machine][t - 1] = Some(j);
                }
            }
        }
        Self {
            instance,
            schedule,
            horizon,
            owner,
        }
    }

    fn at(&self, h: usize, t: usize) -> Option<usize> {
        self.owner[h][t - 1]
    }

    fn record(&self, h: usize, t: usize, p: usize) -> Option<EpsRecord> {
        let e = t + p - 1;
        if t == 0 || e > self.horizon {
            return None;
        }
        if let Some(j) = self.at(h, t) {
            if self.schedule.placement(j).start != t {
                return None;
            }
        }
        if let Some(j) = self.at(h, e) {
            if self.schedule.completion(self.instance, j) != e {
                return None;
            }
        }
        let mut members = Vec::new();
        let mut busy = 0;
        let mut busy_cost = 0.0;
        for s in t..=e {
            if let Some(j) = self.at(h, s) {
                busy += 1;
                busy_cost += self.instance.slot_cost(s);
                if members.last() != Some(&j) {
                    members.push(j);
                }
            }
        }
        let kind = if busy < p {
            EpsKind::I
        } else if members.len() == 1 {
            EpsKind::J
        } else {
            return None;
        };
        let u = self.instance.rate(h);
        let mut costs: Vec<f64> = (t..=e).map(|s| self.instance.slot_cost(s)).collect();
        costs.sort_by(f64::total_cmp);
        let mut sorted_prefix = Vec::with_capacity(p + 1);
        let mut acc = 0.0;
        sorted_prefix.push(0.0);
        for c in costs {
            acc += c;
            sorted_prefix.push(u * acc);
        }
        Some(EpsRecord {
            machine: h,
            start: t,
            length: p,
            kind,
            member_jobs: members,
            assigned_count: busy,
            window_sum: sorted_prefix[p],
            sorted_prefix,
            sub_tec: u * busy_cost,
        })
    }

    fn scan(
        &self,
        machines: &[usize],
        range: RangeInclusive<usize>,
        ptimes: &[usize],
    ) -> (Vec<EpsRecord>, Vec<EpsRecord>) {
        let lo = (*range.start()).max(1);
        let hi = (*range.end()).min(self.horizon);
        let mut js = Vec::new();
        let mut is = Vec::new();
        for &p in ptimes {
            for &h in machines {
                if hi < lo || hi - lo + 1 < p {
                    continue;
                }
                for t in lo..=hi + 1 - p {
                    match self.record(h, t, p) {
                        Some(r) if r.kind == EpsKind::J => js.push(r),
                        Some(r) => is.push(r),
                        None => {}
                    }
                }
            }
        }
        (js, is)
    }
}

/// All J and I windows of the given lengths lying inside `slot_range`
/// (clipped to `1..=horizon`) on the given machines.
pub fn find_eps(
    instance: &Instance,
    schedule: &Schedule,
    horizon: usize,
    machines: &[usize],
    slot_range: RangeInclusive<usize>,
    ptimes: &[usize],
) -> (Vec<EpsRecord>, Vec<EpsRecord>) {
    Occupancy::new(instance, schedule, horizon).scan(machines, slot_range, ptimes)
}

/// Direct-addressed tables of J and I windows per length, keyed by
/// `horizon * machine + (start - 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsIndex {
    horizon: usize,
    n_machines: usize,
    ptimes: Vec<usize>,
    j_tables: BTreeMap<usize, Vec<Option<EpsRecord>>>,
    i_tables: BTreeMap<usize, Vec<Option<EpsRecord>>>,
}

impl EpsIndex {
    pub fn empty(n_machines: usize, horizon: usize, ptimes: &[usize]) -> Self {
        let blank = || vec![None; n_machines * horizon];
        Self {
            horizon,
            n_machines,
            ptimes: ptimes.to_vec(),
            j_tables: ptimes.iter().map(|&p| (p, blank())).collect(),
            i_tables: ptimes.iter().map(|&p| (p, blank())).collect(),
        }
    }

    /// Index of every window in the schedule, scanned from scratch.
    pub fn build(
        instance: &Instance,
        schedule: &Schedule,
        horizon: usize,
        ptimes: &[usize],
    ) -> Self {
        let mut index = Self::empty(instance.n_machines(), horizon, ptimes);
        let machines: Vec<usize> = (0..instance.n_machines()).collect();
        let (js, is) = find_eps(instance, schedule, horizon, &machines, 1..=horizon, ptimes);
        for r in js.into_iter().chain(is) {
            index.insert(r);
        }
        index
    }

    pub fn key(&self, machine: usize, start: usize) -> usize {
        self.horizon * machine + (start - 1)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn ptimes(&self) -> &[usize] {
        &self.ptimes
    }

    pub fn insert(&mut self, record: EpsRecord) {
        let key = self.key(record.machine, record.start);
        let tables = match record.kind {
            EpsKind::J => &mut self.j_tables,
            EpsKind::I => &mut self.i_tables,
        };
        if let Some(table) = tables.get_mut(&record.length) {
            table[key] = Some(record);
        }
    }

    pub fn j_at(&self, p: usize, key: usize) -> Option<&EpsRecord> {
        self.j_tables.get(&p)?.get(key)?.as_ref()
    }

    pub fn i_at(&self, p: usize, key: usize) -> Option<&EpsRecord> {
        self.i_tables.get(&p)?.get(key)?.as_ref()
    }

    pub fn n_keys(&self) -> usize {
        self.n_machines * self.horizon
    }

    /// J windows of length `p` in key order.
    pub fn j_records(&self, p: usize) -> impl Iterator<Item = &EpsRecord> {
        self.j_tables.get(&p).into_iter().flatten().flatten()
    }

    /// I windows of length `p` in key order.
    pub fn i_records(&self, p: usize) -> impl Iterator<Item = &EpsRecord> {
        self.i_tables.get(&p).into_iter().flatten().flatten()
    }

    pub fn len(&self) -> usize {
        self.j_tables
            .values()
            .chain(self.i_tables.values())
            .map(|t| t.iter().flatten().count())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn remove_inside(&mut self, machine: usize, lo: usize, hi: usize) {
        let horizon = self.horizon;
        for tables in [&mut self.j_tables, &mut self.i_tables] {
            for (&p, table) in tables.iter_mut() {
                if hi < lo || hi - lo + 1 < p {
                    continue;
                }
                for t in lo..=hi + 1 - p {
                    table[horizon * machine + (t - 1)] = None;
                }
            }
        }
    }
}

/// Slots whose windows may change when `[start, end]` is rewritten.
pub fn touched_range(
    horizon: usize,
    p_max: usize,
    start: usize,
    end: usize,
) -> RangeInclusive<usize> {
    (start + 1).saturating_sub(p_max).max(1)..=(end + p_max - 1).min(horizon)
}

/// Drops every indexed window of `machine` lying inside `touched` and
/// rescans that stretch.
pub fn update_eps(
    instance: &Instance,
    schedule: &Schedule,
    index: &mut EpsIndex,
    machine: usize,
    touched: RangeInclusive<usize>,
) {
    let occ = Occupancy::new(instance, schedule, index.horizon);
    update_with(&occ, index, machine, touched);
}

pub(crate) fn update_with(
    occ: &Occupancy<'_>,
    index: &mut EpsIndex,
    machine: usize,
    touched: RangeInclusive<usize>,
) {
    let lo = (*touched.start()).max(1);
    let hi = (*touched.end()).min(index.horizon);
    index.remove_inside(machine, lo, hi);
    let ptimes = index.ptimes.clone();
    let (js, is) = occ.scan(&[machine], lo..=hi, &ptimes);
    for r in js.into_iter().chain(is) {
        index.insert(r);
    }
}
