//! Minimum-average-cost greedy selection followed by RB relocation.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{CameraId, CandidateAllocation, Scenario, Schedule};
use crate::scalar::Rate;
use crate::solvers::common::{CandidatePools, CoverageState, Phase, SolverResult, Status, TraceStep};
use crate::solvers::relocate::{relocate, OnFailure};

/// Output of the greedy phase. `tentative` may contain overlapping runs.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome<R> {
    /// Selected allocations in selection order.
    pub tentative: Vec<CandidateAllocation<R>>,
    pub coverage: CoverageState,
    pub status: Status,
    pub diagnostics: Vec<TraceStep<R>>,
}

impl<R> GreedyOutcome<R> {
    /// Sum of tentative run lengths, counting shared RBs once per camera.
    pub fn total_rbs(&self) -> usize {
        self.tentative.iter().map(|a| a.length).sum()
    }

    pub fn camera_sequence(&self) -> Vec<CameraId> {
        self.tentative.iter().map(|a| a.camera_id).collect()
    }
}

pub fn mramc_greedy<R: Rate>(scenario: &Scenario<R>) -> Result<GreedyOutcome<R>> {
    let pools = CandidatePools::build(scenario)?;
    Ok(greedy_with_pools(scenario, &pools))
}

pub(crate) fn greedy_with_pools<R: Rate>(
    scenario: &Scenario<R>,
    pools: &CandidatePools<R>,
) -> GreedyOutcome<R> {
    let mut coverage = CoverageState::new(scenario.target_ids());
    let mut remaining: BTreeSet<CameraId> = scenario
        .cameras
        .iter()
        .filter(|c| pools.cheapest(c.id).is_some())
        .map(|c| c.id)
        .collect();
    let mut tentative = Vec::new();
    let mut diagnostics = Vec::new();

    while !coverage.is_complete() {
        // argmin of length / gain, compared exactly by cross-multiplication;
        // ascending ids keep the lowest id on ties.
        let mut best: Option<(CameraId, CandidateAllocation<R>, usize)> = None;
        for &id in &remaining {
            let cam = scenario.camera(id).expect("pool ids come from the scenario");
            let gain = coverage.gain(&cam.coverage);
            if gain == 0 {
                continue;
            }
            let cand = *pools.cheapest(id).expect("filtered to non-empty pools");
            let better = match &best {
                None => true,
                Some((_, b, bg)) => cand.length * bg < b.length * gain,
            };
            if better {
                best = Some((id, cand, gain));
            }
        }
        let Some((id, cand, gain)) = best else { break };
        remaining.remove(&id);
        coverage.add(&scenario.camera(id).expect("known camera").coverage);
        tentative.push(cand);
        diagnostics.push(TraceStep::new(Phase::Greedy, id, Some(cand)).with_cost(cand.length, gain));
    }

    let status = if coverage.is_complete() {
        Status::Feasible
    } else {
        Status::InfeasibleCoverage
    };
    GreedyOutcome {
        tentative,
        coverage,
        status,
        diagnostics,
    }
}

/// Relocation phase over a greedy outcome.
///
/// A coverage failure from the greedy phase is carried through; the partial
/// selection is still made conflict-free.
pub fn mramc_relocate<R: Rate>(
    greedy: &GreedyOutcome<R>,
    scenario: &Scenario<R>,
) -> Result<SolverResult<R>> {
    let pools = CandidatePools::build(scenario)?;
    Ok(relocate_with_pools(greedy, scenario, &pools))
}

pub(crate) fn relocate_with_pools<R: Rate>(
    greedy: &GreedyOutcome<R>,
    scenario: &Scenario<R>,
    pools: &CandidatePools<R>,
) -> SolverResult<R> {
    let out = relocate(&greedy.tentative, pools, &scenario.grid, |_| OnFailure::Abort);
    let status = if out.aborted {
        Status::InfeasibleRelocation
    } else {
        greedy.status
    };
    let mut diagnostics = greedy.diagnostics.clone();
    diagnostics.extend(out.trace);
    SolverResult {
        schedule: Schedule::new(out.fixed, scenario),
        status,
        diagnostics,
    }
}

/// Greedy selection then relocation.
pub fn mramc<R: Rate>(scenario: &Scenario<R>) -> Result<SolverResult<R>> {
    let pools = CandidatePools::build(scenario)?;
    Ok(mramc_with_pools(scenario, &pools))
}

pub(crate) fn mramc_with_pools<R: Rate>(
    scenario: &Scenario<R>,
    pools: &CandidatePools<R>,
) -> SolverResult<R> {
    let greedy = greedy_with_pools(scenario, pools);
    relocate_with_pools(&greedy, scenario, pools)
}
