//! Channel-quality-only schedulers: the per-RB best-MCS baseline and the
//! greedy-based comparator.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::model::{CameraId, CameraNode, CandidateAllocation, Scenario, Schedule};
use crate::scalar::Rate;
use crate::solvers::common::{CandidatePools, CoverageState, Occupancy, Phase, SolverResult, Status, TraceStep};

/// Grows a run from `(slot, start)` over free RBs until the robust rate times
/// the run length meets the requirement.
///
/// Fails on an occupied RB, a zero-rate RB, the slot capacity, or the end of
/// the slot. A returned run always just achieves the requirement.
fn grow_run<R: Rate>(
    cam: &CameraNode<R>,
    slot: usize,
    start: usize,
    occ: &Occupancy,
    num_subchannels: usize,
) -> Option<CandidateAllocation<R>> {
    let room = occ.remaining(slot);
    let mut robust: Option<R> = None;
    for m in start..=num_subchannels {
        let length = m - start + 1;
        if occ.is_taken(slot, m) || length > room {
            return None;
        }
        let r = cam.rate(slot, m);
        if r.is_zero() {
            return None;
        }
        let rr = robust.map_or(r, |x| x.min_rate(r));
        robust = Some(rr);
        if rr.times(length) >= cam.rate_requirement {
            return Some(CandidateAllocation {
                camera_id: cam.id,
                slot,
                start,
                length,
                robust_rate: rr,
            });
        }
    }
    None
}

fn first_free(occ: &Occupancy, slot: usize, num_subchannels: usize) -> Option<usize> {
    (1..=num_subchannels).find(|&m| !occ.is_taken(slot, m))
}

/// Scans RBs slot by slot; each free RB goes to the eligible camera with the
/// best rate on it, and the run is extended until the camera's requirement is
/// met.
///
/// Eligible cameras are unscheduled and still see an uncovered target. A run
/// that reaches the end of its slot is abandoned and restarted at the first
/// free RB of the following slots; a camera that fits nowhere is dropped.
pub fn baseline_schedule<R: Rate>(scenario: &Scenario<R>) -> Result<SolverResult<R>> {
    let grid = &scenario.grid;
    let m_max = grid.num_subchannels();
    let mut occ = Occupancy::new(grid);
    let mut coverage = CoverageState::new(scenario.target_ids());
    let mut done: BTreeSet<CameraId> = BTreeSet::new();
    let mut assignments = Vec::new();
    let mut diagnostics = Vec::new();

    'slots: for slot in grid.slots() {
        let mut m = 1;
        while m <= m_max {
            if coverage.is_complete() {
                break 'slots;
            }
            if occ.remaining(slot) == 0 {
                break;
            }
            if occ.is_taken(slot, m) {
                m += 1;
                continue;
            }
            let mut best: Option<&CameraNode<R>> = None;
            for cam in &scenario.cameras {
                if done.contains(&cam.id) || coverage.gain(&cam.coverage) == 0 {
                    continue;
                }
                let r = cam.rate(slot, m);
                if r.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some(b) => r > b.rate(slot, m) || (r == b.rate(slot, m) && cam.id < b.id),
                };
                if better {
                    best = Some(cam);
                }
            }
            let Some(cam) = best else {
                m += 1;
                continue;
            };

            let placed = grow_run(cam, slot, m, &occ, m_max).or_else(|| {
                (slot + 1..=grid.num_slots()).find_map(|later| {
                    first_free(&occ, later, m_max).and_then(|s| grow_run(cam, later, s, &occ, m_max))
                })
            });
            done.insert(cam.id);
            match placed {
                Some(a) => {
                    let gain = coverage.gain(&cam.coverage);
                    occ.take(&a);
                    coverage.add(&cam.coverage);
                    assignments.push(a);
                    diagnostics.push(TraceStep::new(Phase::Baseline, cam.id, Some(a)).with_cost(a.length, gain));
                    if a.slot == slot {
                        m = a.end() + 1;
                    }
                }
                None => diagnostics.push(TraceStep::new(Phase::Baseline, cam.id, None)),
            }
        }
    }

    let status = if coverage.is_complete() {
        Status::Feasible
    } else {
        Status::InfeasibleCoverage
    };
    Ok(SolverResult {
        schedule: Schedule::new(assignments, scenario),
        status,
        diagnostics,
    })
}

/// Channel-quality greedy foil: repeatedly takes the camera whose best
/// candidate has the highest robust rate, among unscheduled cameras that still
/// see an uncovered target, and places it at the first free position in the
/// frame where a run satisfies it. Stops once every target is covered.
pub fn greedy_based_reference<R: Rate>(scenario: &Scenario<R>) -> Result<SolverResult<R>> {
    let pools = CandidatePools::build(scenario)?;
    let grid = &scenario.grid;
    let m_max = grid.num_subchannels();
    let mut occ = Occupancy::new(grid);
    let mut coverage = CoverageState::new(scenario.target_ids());
    let mut done: BTreeSet<CameraId> = BTreeSet::new();
    let mut assignments = Vec::new();
    let mut diagnostics = Vec::new();

    let best_rate: Vec<(CameraId, Option<R>)> = scenario
        .cameras
        .iter()
        .map(|c| {
            let best = pools
                .pool(c.id)
                .iter()
                .map(|a| a.robust_rate)
                .fold(None, |acc: Option<R>, r| Some(acc.map_or(r, |x| x.max_rate(r))));
            (c.id, best)
        })
        .collect();

    while !coverage.is_complete() {
        let mut pick: Option<(CameraId, R)> = None;
        for &(id, rate) in &best_rate {
            let Some(rate) = rate else { continue };
            if done.contains(&id) {
                continue;
            }
            let cam = scenario.camera(id).expect("known camera");
            if coverage.gain(&cam.coverage) == 0 {
                continue;
            }
            if pick.is_none_or(|(pid, pr)| rate > pr || (rate == pr && id < pid)) {
                pick = Some((id, rate));
            }
        }
        let Some((id, _)) = pick else { break };
        done.insert(id);
        let cam = scenario.camera(id).expect("known camera");
        let placed = grid.slots().find_map(|slot| {
            (1..=m_max)
                .filter(|&m| !occ.is_taken(slot, m))
                .find_map(|m| grow_run(cam, slot, m, &occ, m_max))
        });
        match placed {
            Some(a) => {
                let gain = coverage.gain(&cam.coverage);
                occ.take(&a);
                coverage.add(&cam.coverage);
                assignments.push(a);
                diagnostics.push(TraceStep::new(Phase::GreedyBased, id, Some(a)).with_cost(a.length, gain));
            }
            None => diagnostics.push(TraceStep::new(Phase::GreedyBased, id, None)),
        }
    }

    let status = if coverage.is_complete() {
        Status::Feasible
    } else {
        Status::InfeasibleCoverage
    };
    Ok(SolverResult {
        schedule: Schedule::new(assignments, scenario),
        status,
        diagnostics,
    })
}
