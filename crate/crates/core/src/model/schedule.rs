use std::collections::BTreeSet;

use crate::model::{CandidateAllocation, Scenario, TargetId};
use crate::scalar::Rate;

/// A set of allocations, at most one per camera, with the derived objective
/// value and covered targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<R> {
    pub assignments: Vec<CandidateAllocation<R>>,
    pub total_rbs: usize,
    pub covered_targets: BTreeSet<TargetId>,
}

impl<R> Default for Schedule<R> {
    fn default() -> Self {
        Self {
            assignments: Vec::new(),
            total_rbs: 0,
            covered_targets: BTreeSet::new(),
        }
    }
}

impl<R: Rate> Schedule<R> {
    /// Builds a schedule, deriving `total_rbs` and `covered_targets`.
    ///
    /// Assignments are kept sorted by camera id. Ids missing from the scenario
    /// contribute no coverage; [`crate::model::verify_schedule`] reports them.
    pub fn new(mut assignments: Vec<CandidateAllocation<R>>, scenario: &Scenario<R>) -> Self {
        assignments.sort_by_key(|a| (a.camera_id, a.slot, a.start, a.length));
        let total_rbs = assignments.iter().map(|a| a.length).sum();
        let covered_targets = assignments
            .iter()
            .filter_map(|a| scenario.camera(a.camera_id))
            .flat_map(|c| c.coverage.iter().copied())
            .collect();
        Self {
            assignments,
            total_rbs,
            covered_targets,
        }
    }

    /// Schedule over arbitrary allocation owners (cameras or other traffic),
    /// with coverage supplied by the caller.
    pub fn from_parts(
        mut assignments: Vec<CandidateAllocation<R>>,
        covered_targets: BTreeSet<TargetId>,
    ) -> Self {
        assignments.sort_by_key(|a| (a.camera_id, a.slot, a.start, a.length));
        let total_rbs = assignments.iter().map(|a| a.length).sum();
        Self {
            assignments,
            total_rbs,
            covered_targets,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn camera_ids(&self) -> Vec<u32> {
        self.assignments.iter().map(|a| a.camera_id).collect()
    }

    pub fn allocation_of(&self, camera_id: u32) -> Option<&CandidateAllocation<R>> {
        self.assignments.iter().find(|a| a.camera_id == camera_id)
    }
}
