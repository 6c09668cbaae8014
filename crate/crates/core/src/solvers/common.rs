use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{usable_candidates, CameraId, CandidateAllocation, FrameGrid, Scenario, Schedule, TargetId};
use crate::scalar::Rate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Feasible,
    InfeasibleCoverage,
    InfeasibleRelocation,
    InfeasibleCapacity,
}

impl Status {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Status::Feasible)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Feasible => "feasible",
            Status::InfeasibleCoverage => "infeasible_coverage",
            Status::InfeasibleRelocation => "infeasible_relocation",
            Status::InfeasibleCapacity => "infeasible_capacity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Baseline,
    GreedyBased,
    Greedy,
    /// Kept its greedy-phase allocation during relocation.
    Fixed,
    /// Moved to a conflict-free allocation during relocation.
    Relocated,
    /// Had no conflict-free allocation left.
    RelocationFailed,
    ExtraCoverage,
    Exact,
}

/// One decision of a solver, in the order it was made.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep<R> {
    pub phase: Phase,
    pub camera_id: CameraId,
    pub allocation: Option<CandidateAllocation<R>>,
    /// Average cost as `(rbs, newly covered targets)` where it applies.
    pub cost: Option<(usize, usize)>,
}

impl<R> TraceStep<R> {
    pub(crate) fn new(phase: Phase, camera_id: CameraId, allocation: Option<CandidateAllocation<R>>) -> Self {
        Self {
            phase,
            camera_id,
            allocation,
            cost: None,
        }
    }

    pub(crate) fn with_cost(mut self, rbs: usize, gain: usize) -> Self {
        self.cost = Some((rbs, gain));
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult<R> {
    /// `schedule.total_rbs` is the objective value.
    pub schedule: Schedule<R>,
    pub status: Status,
    pub diagnostics: Vec<TraceStep<R>>,
}

impl<R> SolverResult<R> {
    pub fn total_rbs(&self) -> usize {
        self.schedule.total_rbs
    }

    pub fn is_feasible(&self) -> bool {
        self.status.is_feasible()
    }
}

/// Uncovered targets and how many scheduled cameras see each target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageState {
    pub uncovered: BTreeSet<TargetId>,
    pub coverage_count: BTreeMap<TargetId, usize>,
}

impl CoverageState {
    pub fn new(targets: impl IntoIterator<Item = TargetId>) -> Self {
        let coverage_count: BTreeMap<_, _> = targets.into_iter().map(|t| (t, 0)).collect();
        Self {
            uncovered: coverage_count.keys().copied().collect(),
            coverage_count,
        }
    }

    /// Number of still-uncovered targets in `coverage`.
    pub fn gain(&self, coverage: &BTreeSet<TargetId>) -> usize {
        if coverage.len() < self.uncovered.len() {
            coverage.iter().filter(|y| self.uncovered.contains(y)).count()
        } else {
            self.uncovered.iter().filter(|y| coverage.contains(y)).count()
        }
    }

    pub fn add(&mut self, coverage: &BTreeSet<TargetId>) {
        for y in coverage {
            if let Some(n) = self.coverage_count.get_mut(y) {
                *n += 1;
                self.uncovered.remove(y);
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn count(&self, target: TargetId) -> usize {
        self.coverage_count.get(&target).copied().unwrap_or(0)
    }
}

/// Usable candidates per camera, sorted by (length, slot, start).
#[derive(Debug, Clone)]
pub struct CandidatePools<R> {
    pools: BTreeMap<CameraId, Vec<CandidateAllocation<R>>>,
}

impl<R: Rate> CandidatePools<R> {
    pub fn build(scenario: &Scenario<R>) -> Result<Self> {
        let mut pools = BTreeMap::new();
        for cam in &scenario.cameras {
            pools.insert(cam.id, sorted_pool(usable_candidates(cam, &scenario.grid)?));
        }
        Ok(Self { pools })
    }

    pub(crate) fn from_map(pools: BTreeMap<CameraId, Vec<CandidateAllocation<R>>>) -> Self {
        Self { pools }
    }

    pub fn pool(&self, camera: CameraId) -> &[CandidateAllocation<R>] {
        self.pools.get(&camera).map_or(&[], Vec::as_slice)
    }

    /// Minimum-size candidate, earliest slot and start on ties.
    pub fn cheapest(&self, camera: CameraId) -> Option<&CandidateAllocation<R>> {
        self.pool(camera).first()
    }

    /// Cheapest candidate that fits into `occ`.
    pub fn cheapest_fitting(&self, camera: CameraId, occ: &Occupancy) -> Option<CandidateAllocation<R>> {
        self.pool(camera).iter().find(|c| occ.fits(c)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CameraId, &Vec<CandidateAllocation<R>>)> {
        self.pools.iter()
    }
}

pub(crate) fn sorted_pool<R>(mut pool: Vec<CandidateAllocation<R>>) -> Vec<CandidateAllocation<R>> {
    pool.sort_by_key(|c| (c.length, c.slot, c.start));
    pool
}

/// RBs taken so far and per-slot usage against capacity.
#[derive(Debug, Clone)]
pub struct Occupancy {
    num_subchannels: usize,
    taken: Vec<bool>,
    used: Vec<usize>,
    capacity: Vec<usize>,
}

impl Occupancy {
    pub fn new(grid: &FrameGrid) -> Self {
        Self {
            num_subchannels: grid.num_subchannels(),
            taken: vec![false; grid.total_rbs()],
            used: vec![0; grid.num_slots()],
            capacity: grid.slot_capacities().to_vec(),
        }
    }

    #[inline]
    fn index(&self, slot: usize, subchannel: usize) -> usize {
        (slot - 1) * self.num_subchannels + (subchannel - 1)
    }

    #[inline]
    pub fn is_taken(&self, slot: usize, subchannel: usize) -> bool {
        self.taken[self.index(slot, subchannel)]
    }

    pub fn used(&self, slot: usize) -> usize {
        self.used[slot - 1]
    }

    pub fn remaining(&self, slot: usize) -> usize {
        self.capacity[slot - 1] - self.used[slot - 1]
    }

    /// All RBs of `c` are free and the slot has room for it.
    pub fn fits<R>(&self, c: &CandidateAllocation<R>) -> bool {
        c.length <= self.remaining(c.slot) && c.rbs().all(|(t, m)| !self.is_taken(t, m))
    }

    pub fn take<R>(&mut self, c: &CandidateAllocation<R>) {
        for (t, m) in c.rbs() {
            let i = self.index(t, m);
            debug_assert!(!self.taken[i], "RB ({t}, {m}) taken twice");
            self.taken[i] = true;
        }
        self.used[c.slot - 1] += c.length;
    }

    pub fn release<R>(&mut self, c: &CandidateAllocation<R>) {
        for (t, m) in c.rbs() {
            let i = self.index(t, m);
            self.taken[i] = false;
        }
        self.used[c.slot - 1] -= c.length;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_state_tracks_counts() {
        let mut z = CoverageState::new([1, 2, 3]);
        let a: BTreeSet<_> = [1, 2].into();
        let b: BTreeSet<_> = [2, 3, 9].into();
        assert_eq!(z.gain(&a), 2);
        z.add(&a);
        assert_eq!(z.gain(&b), 1);
        z.add(&b);
        assert!(z.is_complete());
        assert_eq!(z.count(2), 2);
        assert_eq!(z.count(9), 0);
        for (y, n) in &z.coverage_count {
            assert_eq!(z.uncovered.contains(y), *n == 0);
        }
    }

    #[test]
    fn occupancy_respects_capacity_and_overlap() {
        let grid = FrameGrid::with_capacity(4, vec![3, 4], 10.0).unwrap();
        let mut occ = Occupancy::new(&grid);
        let c = |slot, start, length| CandidateAllocation { camera_id: 1, slot, start, length, robust_rate: 1u32 };
        assert!(!occ.fits(&c(1, 1, 4)));
        assert!(occ.fits(&c(2, 1, 4)));
        occ.take(&c(1, 2, 2));
        assert!(!occ.fits(&c(1, 1, 2)));
        assert!(occ.fits(&c(1, 4, 1)));
        occ.release(&c(1, 2, 2));
        assert!(occ.fits(&c(1, 1, 3)));
    }
}
