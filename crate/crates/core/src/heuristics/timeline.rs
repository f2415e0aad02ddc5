use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Included, Unbounded};

/// A job interval `[start, end]` on one machine (slots inclusive).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub job: usize,
    pub start: usize,
    pub end: usize,
}

/// Jobs on one machine keyed by start slot. All lookups are logarithmic
/// in the number of jobs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MachineTimeline {
    by_start: BTreeMap<usize, Interval>,
}

impl MachineTimeline {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.by_start.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_start.is_empty()
    }

    /// Inserts `job` on `[start, end]`. Returns `false` and leaves the
    /// timeline untouched if the interval meets an existing one.
    pub fn insert(&mut self, job: usize, start: usize, end: usize) -> bool {
        debug_assert!(start <= end);
        if self.overlaps(start, end) {
            return false;
        }
        self.by_start.insert(start, Interval { job, start, end });
        true
    }

    pub fn remove(&mut self, start: usize) -> Option<Interval> {
        self.by_start.remove(&start)
    }

    pub fn starting_at(&self, t: usize) -> Option<Interval> {
        self.by_start.get(&t).copied()
    }

    /// Last interval starting at or before `t`.
    pub fn predecessor(&self, t: usize) -> Option<Interval> {
        self.by_start.range(..=t).next_back().map(|(_, iv)| *iv)
    }

    /// First interval starting strictly after `t`.
    pub fn successor(&self, t: usize) -> Option<Interval> {
        self.by_start
            .range((Excluded(t), Unbounded))
            .next()
            .map(|(_, iv)| *iv)
    }

    /// Interval covering slot `t`, if any.
    pub fn covering(&self, t: usize) -> Option<Interval> {
        self.predecessor(t).filter(|iv| iv.end >= t)
    }

    pub fn is_free(&self, t: usize) -> bool {
        self.covering(t).is_none()
    }

    pub fn overlaps(&self, start: usize, end: usize) -> bool {
        if self.covering(start).is_some() {
            return true;
        }
        self.by_start
            .range((Excluded(start), Included(end)))
            .next()
            .is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.by_start.values().copied()
    }

    pub fn last_end(&self) -> usize {
        self.by_start.values().next_back().map_or(0, |iv| iv.end)
    }

    /// Maximal idle stretches `[a, b]` inside `1..=horizon`.
    pub fn gaps(&self, horizon: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut next = 1;
        for iv in self.by_start.values() {
            if iv.start > next {
                out.push((next, iv.start - 1));
            }
            next = next.max(iv.end + 1);
        }
        if next <= horizon {
            out.push((next, horizon));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_rejects_overlap() {
        let mut tl = MachineTimeline::new();
        assert!(tl.insert(0, 3, 5));
        assert!(!tl.insert(1, 5, 6));
        assert!(!tl.insert(1, 1, 3));
        assert!(!tl.insert(1, 1, 9));
        assert!(tl.insert(1, 6, 6));
        assert_eq!(tl.len(), 2);
    }

    #[test]
    fn neighbour_queries() {
        let mut tl = MachineTimeline::new();
        tl.insert(0, 2, 4);
        tl.insert(1, 7, 7);
        assert_eq!(tl.predecessor(6).map(|iv| iv.job), Some(0));
        assert_eq!(tl.successor(2).map(|iv| iv.job), Some(1));
        assert_eq!(tl.predecessor(1), None);
        assert_eq!(tl.covering(3).map(|iv| iv.job), Some(0));
        assert!(tl.is_free(5));
        assert_eq!(tl.gaps(9), vec![(1, 1), (5, 6), (8, 9)]);
        assert_eq!(tl.remove(2).map(|iv| iv.end), Some(4));
        assert_eq!(tl.gaps(7), vec![(1, 6)]);
        assert_eq!(tl.last_end(), 7);
    }
}
