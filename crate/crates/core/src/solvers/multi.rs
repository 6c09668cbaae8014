//! Multi-angle coverage: extra cameras per target after a full cover.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CameraId, CandidateAllocation, Scenario, Schedule, TargetId};
use crate::scalar::Rate;
use crate::solvers::common::{CandidatePools, CoverageState, Occupancy, Phase, SolverResult, TraceStep};
use crate::solvers::mramc::mramc_with_pools;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnmetReason {
    /// Every camera that sees the target is already scheduled or unusable.
    NoMoreCameras,
    /// Some camera could still help but none of its candidates fits.
    NoResources,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnmetTarget {
    pub target: TargetId,
    pub desired: usize,
    pub achieved: usize,
    pub reason: UnmetReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiCoverage<R> {
    pub result: SolverResult<R>,
    /// Schedule after each round; round 1 is the plain cover.
    pub rounds: Vec<Schedule<R>>,
    pub unmet: Vec<UnmetTarget>,
}

/// Covers every target once, then adds cameras round by round until each
/// target `y` is seen by `multiplicity[y]` cameras (default 1) or no free RBs
/// fit any camera that would help.
///
/// Each round visits deficient targets in id order and gives each one the
/// unscheduled covering camera with the smallest allocation that fits the
/// free RBs. Earlier allocations are never moved.
pub fn m_mramc<R: Rate>(
    scenario: &Scenario<R>,
    multiplicity: &BTreeMap<TargetId, usize>,
) -> Result<MultiCoverage<R>> {
    if let Some((y, _)) = multiplicity.iter().find(|(_, &m)| m == 0) {
        return Err(Error::invalid(format!("multiplicity of target {y} must be at least 1")));
    }
    let desired = |y: TargetId| multiplicity.get(&y).copied().unwrap_or(1);
    let pools = CandidatePools::build(scenario)?;
    let first = mramc_with_pools(scenario, &pools);
    let mut rounds = vec![first.schedule.clone()];
    let mut result = first;
    if !result.is_feasible() {
        return Ok(MultiCoverage {
            result,
            rounds,
            unmet: Vec::new(),
        });
    }

    let mut occ = Occupancy::new(&scenario.grid);
    let mut coverage = CoverageState::new(scenario.target_ids());
    let mut scheduled: BTreeSet<CameraId> = BTreeSet::new();
    for a in &result.schedule.assignments {
        occ.take(a);
        scheduled.insert(a.camera_id);
        coverage.add(&scenario.camera(a.camera_id).expect("known camera").coverage);
    }
    let mut assignments = result.schedule.assignments.clone();
    let coverers = scenario.coverers();

    loop {
        let mut added = false;
        for y in scenario.target_ids() {
            if coverage.count(y) >= desired(y) {
                continue;
            }
            let mut best: Option<CandidateAllocation<R>> = None;
            for &k in &coverers[&y] {
                if scheduled.contains(&k) {
                    continue;
                }
                let Some(c) = pools.cheapest_fitting(k, &occ) else { continue };
                if best.is_none_or(|b| (c.length, c.camera_id, c.slot, c.start) < (b.length, b.camera_id, b.slot, b.start)) {
                    best = Some(c);
                }
            }
            let Some(a) = best else { continue };
            occ.take(&a);
            scheduled.insert(a.camera_id);
            coverage.add(&scenario.camera(a.camera_id).expect("known camera").coverage);
            assignments.push(a);
            result
                .diagnostics
                .push(TraceStep::new(Phase::ExtraCoverage, a.camera_id, Some(a)));
            added = true;
        }
        if !added {
            break;
        }
        rounds.push(Schedule::new(assignments.clone(), scenario));
    }

    let unmet = scenario
        .target_ids()
        .into_iter()
        .filter(|&y| coverage.count(y) < desired(y))
        .map(|y| {
            let helpers = coverers[&y]
                .iter()
                .any(|&k| !scheduled.contains(&k) && !pools.pool(k).is_empty());
            UnmetTarget {
                target: y,
                desired: desired(y),
                achieved: coverage.count(y),
                reason: if helpers {
                    UnmetReason::NoResources
                } else {
                    UnmetReason::NoMoreCameras
                },
            }
        })
        .collect();
    result.schedule = Schedule::new(assignments, scenario);
    Ok(MultiCoverage {
        result,
        rounds,
        unmet,
    })
}
