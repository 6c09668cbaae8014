use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{just_achieves, robust_rate, CameraId, Scenario, Schedule, TargetId};
use crate::scalar::Rate;

/// The ILP constraints a schedule must satisfy, plus membership of every
/// allocation in its camera's candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    /// Every target covered by at least one scheduled camera.
    Coverage,
    /// Per-slot allocated RBs within the slot capacity.
    SlotCapacity,
    /// No RB shared by two allocations.
    RbExclusivity,
    /// At most one allocation per camera.
    OnePerCamera,
    /// Each allocation is a just-achieving contiguous run inside the frame.
    AllocationDomain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UncoveredTarget {
        target: TargetId,
    },
    SlotOverCapacity {
        slot: usize,
        used: usize,
        capacity: usize,
    },
    SharedRb {
        slot: usize,
        subchannel: usize,
        cameras: Vec<CameraId>,
    },
    DuplicateCamera {
        camera: CameraId,
        count: usize,
    },
    InvalidAllocation {
        camera: CameraId,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub constraint: Constraint,
    pub violations: Vec<Violation>,
}

impl ConstraintCheck {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub checks: Vec<ConstraintCheck>,
    pub claimed_total_rbs: usize,
    pub recomputed_total_rbs: usize,
}

impl FeasibilityReport {
    pub fn check(&self, c: Constraint) -> &ConstraintCheck {
        self.checks
            .iter()
            .find(|k| k.constraint == c)
            .expect("every constraint is checked")
    }

    pub fn passed(&self, c: Constraint) -> bool {
        self.check(c).passed()
    }

    pub fn total_consistent(&self) -> bool {
        self.claimed_total_rbs == self.recomputed_total_rbs
    }

    /// All constraints hold and the claimed objective matches.
    pub fn is_feasible(&self) -> bool {
        self.total_consistent() && self.checks.iter().all(ConstraintCheck::passed)
    }

    /// Constraints other than coverage hold (the schedule is a valid, possibly
    /// partial, allocation).
    pub fn is_conflict_free(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.constraint != Constraint::Coverage)
            .all(ConstraintCheck::passed)
    }
}

/// Checks a schedule against every constraint and recomputes its objective.
///
/// Errors only when the schedule names a camera the scenario does not have.
pub fn verify_schedule<R: Rate>(
    schedule: &Schedule<R>,
    scenario: &Scenario<R>,
) -> Result<FeasibilityReport> {
    for a in &schedule.assignments {
        if scenario.camera(a.camera_id).is_none() {
            return Err(Error::invalid(format!(
                "schedule references unknown camera {}",
                a.camera_id
            )));
        }
    }
    let grid = &scenario.grid;

    let mut covered = BTreeSet::new();
    for a in &schedule.assignments {
        let cam = scenario.camera(a.camera_id).expect("checked above");
        covered.extend(cam.coverage.iter().copied());
    }
    let coverage = scenario
        .targets
        .iter()
        .filter(|t| !covered.contains(&t.id))
        .map(|t| Violation::UncoveredTarget { target: t.id })
        .collect();

    let mut domain = Vec::new();
    for a in &schedule.assignments {
        let cam = scenario.camera(a.camera_id).expect("checked above");
        let bad = |reason: String| Violation::InvalidAllocation {
            camera: a.camera_id,
            reason,
        };
        if a.slot == 0 || a.slot > grid.num_slots() {
            domain.push(bad(format!("slot {} outside 1..={}", a.slot, grid.num_slots())));
            continue;
        }
        if a.length == 0 || a.start == 0 || a.end() > grid.num_subchannels() {
            domain.push(bad(format!(
                "run {}..{} outside 1..={}",
                a.start,
                a.start + a.length,
                grid.num_subchannels()
            )));
            continue;
        }
        let run = &cam.rates_in_slot(a.slot)[a.start - 1..a.end()];
        let mcs = robust_rate(run)?;
        if mcs != a.robust_rate {
            domain.push(bad(format!(
                "claimed robust rate {} but run minimum is {mcs}",
                a.robust_rate
            )));
        } else if mcs.is_zero() || !just_achieves(mcs, a.length, cam.rate_requirement) {
            domain.push(bad(format!(
                "{} RBs at rate {mcs} do not just achieve requirement {}",
                a.length, cam.rate_requirement
            )));
        }
    }

    let mut used = vec![0usize; grid.num_slots()];
    let mut owners: BTreeMap<(usize, usize), Vec<CameraId>> = BTreeMap::new();
    for a in &schedule.assignments {
        if a.slot == 0 || a.slot > grid.num_slots() {
            continue;
        }
        used[a.slot - 1] += a.length;
        for rb in a.rbs() {
            owners.entry(rb).or_default().push(a.camera_id);
        }
    }
    let capacity = used
        .iter()
        .enumerate()
        .filter(|(t, &u)| u > grid.capacity(t + 1))
        .map(|(t, &u)| Violation::SlotOverCapacity {
            slot: t + 1,
            used: u,
            capacity: grid.capacity(t + 1),
        })
        .collect();
    let exclusivity = owners
        .into_iter()
        .filter(|(_, cams)| cams.len() > 1)
        .map(|((slot, subchannel), cameras)| Violation::SharedRb {
            slot,
            subchannel,
            cameras,
        })
        .collect();

    let mut per_camera: BTreeMap<CameraId, usize> = BTreeMap::new();
    for a in &schedule.assignments {
        *per_camera.entry(a.camera_id).or_default() += 1;
    }
    let one_per_camera = per_camera
        .into_iter()
        .filter(|&(_, n)| n > 1)
        .map(|(camera, count)| Violation::DuplicateCamera { camera, count })
        .collect();

    let check = |constraint, violations| ConstraintCheck {
        constraint,
        violations,
    };
    Ok(FeasibilityReport {
        checks: vec![
            check(Constraint::Coverage, coverage),
            check(Constraint::SlotCapacity, capacity),
            check(Constraint::RbExclusivity, exclusivity),
            check(Constraint::OnePerCamera, one_per_camera),
            check(Constraint::AllocationDomain, domain),
        ],
        claimed_total_rbs: schedule.total_rbs,
        recomputed_total_rbs: schedule.assignments.iter().map(|a| a.length).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CameraNode, CandidateAllocation, FrameGrid};

    fn scenario() -> Scenario<u32> {
        let grid = FrameGrid::new(3, 2, 10.0).unwrap();
        let cams = vec![
            CameraNode::abstract_camera(1, 4, vec![4, 4, 4], [1]),
            CameraNode::abstract_camera(2, 8, vec![4, 4, 4], [2]),
        ];
        Scenario::abstract_instance(grid, cams, 2).unwrap()
    }

    fn alloc(camera_id: u32, slot: usize, start: usize, length: usize) -> CandidateAllocation<u32> {
        CandidateAllocation {
            camera_id,
            slot,
            start,
            length,
            robust_rate: 4,
        }
    }

    #[test]
    fn empty_schedule_fails_only_coverage() {
        let s = scenario();
        let r = verify_schedule(&Schedule::default(), &s).unwrap();
        assert!(!r.passed(Constraint::Coverage));
        assert_eq!(r.check(Constraint::Coverage).violations.len(), 2);
        assert!(r.is_conflict_free());
        assert!(!r.is_feasible());
    }

    #[test]
    fn shared_rb_lists_both_cameras() {
        let s = scenario();
        let sched = Schedule::new(vec![alloc(1, 1, 2, 1), alloc(2, 1, 1, 2)], &s);
        let r = verify_schedule(&sched, &s).unwrap();
        assert_eq!(
            r.check(Constraint::RbExclusivity).violations,
            vec![Violation::SharedRb {
                slot: 1,
                subchannel: 2,
                cameras: vec![1, 2]
            }]
        );
        assert!(r.passed(Constraint::Coverage));
    }

    #[test]
    fn feasible_schedule_passes() {
        let s = scenario();
        let sched = Schedule::new(vec![alloc(1, 1, 1, 1), alloc(2, 1, 2, 2)], &s);
        let r = verify_schedule(&sched, &s).unwrap();
        assert!(r.is_feasible(), "{r:?}");
        assert_eq!(r.recomputed_total_rbs, 3);
    }

    #[test]
    fn detects_duplicates_capacity_and_bad_runs() {
        let mut s = scenario();
        s.grid = FrameGrid::with_capacity(3, vec![2, 3], 10.0).unwrap();
        let sched = Schedule::new(
            vec![alloc(1, 1, 1, 1), alloc(1, 2, 1, 1), alloc(2, 1, 2, 2)],
            &s,
        );
        let r = verify_schedule(&sched, &s).unwrap();
        assert!(!r.passed(Constraint::OnePerCamera));
        assert!(!r.passed(Constraint::SlotCapacity));

        let sched = Schedule::new(vec![alloc(1, 1, 1, 2), alloc(2, 1, 3, 2)], &s);
        let r = verify_schedule(&sched, &s).unwrap();
        assert_eq!(r.check(Constraint::AllocationDomain).violations.len(), 2);
    }

    #[test]
    fn unknown_camera_is_an_error_and_total_mismatch_is_caught() {
        let s = scenario();
        let sched = Schedule::new(vec![alloc(9, 1, 1, 1)], &s);
        assert!(matches!(
            verify_schedule(&sched, &s),
            Err(Error::InvalidArgument(_))
        ));
        let mut sched = Schedule::new(vec![alloc(1, 1, 1, 1), alloc(2, 1, 2, 2)], &s);
        sched.total_rbs = 2;
        let r = verify_schedule(&sched, &s).unwrap();
        assert!(!r.total_consistent());
        assert!(!r.is_feasible());
    }
}
