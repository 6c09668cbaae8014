//! Joint scheduling of surveillance cameras and ordinary uplink traffic.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{usable_candidates, CameraNode, FrameGrid, Scenario, Schedule, TargetId};
use crate::scalar::Rate;
use crate::solvers::common::{
    sorted_pool, CandidatePools, CoverageState, Phase, SolverResult, Status, TraceStep,
};
use crate::solvers::relocate::{relocate, OnFailure};

#[derive(Debug, Clone, PartialEq)]
pub enum TrafficKind<R> {
    Surveillance(CameraNode<R>),
    /// Non-video uplink traffic with no coverage.
    Traditional {
        id: u32,
        rate_requirement: R,
        rates: Vec<R>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrafficItem<R> {
    pub kind: TrafficKind<R>,
    /// Operator priority; larger values are scheduled earlier.
    pub alpha: f64,
}

impl<R: Rate> TrafficItem<R> {
    pub fn surveillance(camera: CameraNode<R>, alpha: f64) -> Self {
        Self {
            kind: TrafficKind::Surveillance(camera),
            alpha,
        }
    }

    pub fn traditional(id: u32, rate_requirement: R, rates: Vec<R>, alpha: f64) -> Self {
        Self {
            kind: TrafficKind::Traditional {
                id,
                rate_requirement,
                rates,
            },
            alpha,
        }
    }

    /// Camera id for surveillance items.
    pub fn id(&self) -> u32 {
        match &self.kind {
            TrafficKind::Surveillance(c) => c.id,
            TrafficKind::Traditional { id, .. } => *id,
        }
    }

    pub fn is_surveillance(&self) -> bool {
        matches!(self.kind, TrafficKind::Surveillance(_))
    }

    fn as_camera(&self) -> CameraNode<R> {
        match &self.kind {
            TrafficKind::Surveillance(c) => c.clone(),
            TrafficKind::Traditional {
                id,
                rate_requirement,
                rates,
            } => CameraNode::abstract_camera(*id, *rate_requirement, rates.clone(), []),
        }
    }
}

/// Every camera of `scenario` as a surveillance item with priority 1.
pub fn surveillance_items<R: Rate>(scenario: &Scenario<R>) -> Vec<TrafficItem<R>> {
    scenario
        .cameras
        .iter()
        .map(|c| TrafficItem::surveillance(c.clone(), 1.0))
        .collect()
}

/// Greedy over all items by priority key, then relocation.
///
/// Surveillance items are keyed by `phi / (alpha * new targets)` and only
/// considered while they see an uncovered target; traditional items by
/// `phi / alpha`, each scheduled at most once. Ties go to the lowest id.
/// Relocation treats all selected items alike; a traditional item without a
/// free allocation is dropped, a surveillance item stops the run.
pub fn joint_schedule<R: Rate>(
    items: &[TrafficItem<R>],
    grid: &FrameGrid,
    targets: &BTreeSet<TargetId>,
) -> Result<SolverResult<R>> {
    let mut pools = BTreeMap::new();
    let mut by_id = BTreeMap::new();
    for item in items {
        if !(item.alpha > 0.0 && item.alpha.is_finite()) {
            return Err(Error::invalid(format!("item {} alpha must be positive", item.id())));
        }
        if by_id.insert(item.id(), item).is_some() {
            return Err(Error::invalid(format!("duplicate traffic id {}", item.id())));
        }
        pools.insert(item.id(), sorted_pool(usable_candidates(&item.as_camera(), grid)?));
    }
    let pools = CandidatePools::from_map(pools);

    let mut coverage = CoverageState::new(targets.iter().copied());
    let mut remaining: BTreeSet<u32> = by_id
        .keys()
        .copied()
        .filter(|&id| pools.cheapest(id).is_some())
        .collect();
    let mut tentative = Vec::new();
    let mut diagnostics = Vec::new();

    loop {
        let mut best: Option<(u32, f64, usize)> = None;
        for &id in &remaining {
            let item = by_id[&id];
            let phi = pools.cheapest(id).expect("non-empty pool").length;
            let (key, gain) = match &item.kind {
                TrafficKind::Surveillance(c) => {
                    let gain = coverage.gain(&c.coverage);
                    if gain == 0 {
                        continue;
                    }
                    (phi as f64 / (item.alpha * gain as f64), gain)
                }
                TrafficKind::Traditional { .. } => (phi as f64 / item.alpha, 0),
            };
            if best.is_none_or(|(_, k, _)| key < k) {
                best = Some((id, key, gain));
            }
        }
        let Some((id, _, gain)) = best else { break };
        remaining.remove(&id);
        let cand = *pools.cheapest(id).expect("non-empty pool");
        if let TrafficKind::Surveillance(c) = &by_id[&id].kind {
            coverage.add(&c.coverage);
        }
        tentative.push(cand);
        diagnostics.push(TraceStep::new(Phase::Greedy, id, Some(cand)).with_cost(cand.length, gain));
    }

    let out = relocate(&tentative, &pools, grid, |id| {
        if by_id[&id].is_surveillance() {
            OnFailure::Abort
        } else {
            OnFailure::Skip
        }
    });
    diagnostics.extend(out.trace);

    let traditional_dropped = by_id
        .values()
        .any(|i| !i.is_surveillance() && !out.fixed.iter().any(|a| a.camera_id == i.id()));
    let status = if !coverage.is_complete() {
        Status::InfeasibleCoverage
    } else if out.aborted {
        Status::InfeasibleRelocation
    } else if traditional_dropped {
        Status::InfeasibleCapacity
    } else {
        Status::Feasible
    };
    let covered = out
        .fixed
        .iter()
        .filter_map(|a| match &by_id[&a.camera_id].kind {
            TrafficKind::Surveillance(c) => Some(c.coverage.iter().copied()),
            TrafficKind::Traditional { .. } => None,
        })
        .flatten()
        .collect();
    Ok(SolverResult {
        schedule: Schedule::from_parts(out.fixed, covered),
        status,
        diagnostics,
    })
}

/// Position of `id` in the greedy selection order.
pub fn selection_round<R>(result: &SolverResult<R>, id: u32) -> Option<usize> {
    result
        .diagnostics
        .iter()
        .filter(|d| d.phase == Phase::Greedy)
        .position(|d| d.camera_id == id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::mramc::mramc;

    fn scenario() -> Scenario<u32> {
        let cams = vec![
            CameraNode::abstract_camera(1, 8, vec![4; 6], [1, 2]),
            CameraNode::abstract_camera(2, 4, vec![4; 6], [2]),
            CameraNode::abstract_camera(3, 4, vec![4; 6], [3]),
        ];
        Scenario::abstract_instance(FrameGrid::new(6, 1, 10.0).unwrap(), cams, 3).unwrap()
    }

    #[test]
    fn without_traditional_traffic_matches_mramc() {
        let s = scenario();
        let joint = joint_schedule(&surveillance_items(&s), &s.grid, &s.target_ids()).unwrap();
        let plain = mramc(&s).unwrap();
        assert_eq!(joint.schedule.assignments, plain.schedule.assignments);
        assert_eq!(joint.status, plain.status);
    }

    #[test]
    fn dominant_alpha_goes_first() {
        let s = scenario();
        let mut items = surveillance_items(&s);
        items.push(TrafficItem::traditional(100, 12, vec![4; 6], 1e9));
        let r = joint_schedule(&items, &s.grid, &s.target_ids()).unwrap();
        assert_eq!(selection_round(&r, 100), Some(0));
        assert!(r.is_feasible());
    }

    #[test]
    fn round_is_non_increasing_in_alpha() {
        let s = scenario();
        let mut last = usize::MAX;
        for alpha in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let mut items = surveillance_items(&s);
            items.push(TrafficItem::traditional(100, 8, vec![4; 6], alpha));
            let r = joint_schedule(&items, &s.grid, &s.target_ids()).unwrap();
            let round = selection_round(&r, 100).unwrap();
            assert!(round <= last);
            last = round;
        }
        assert_eq!(last, 0);
    }

    #[test]
    fn traditional_item_without_room_is_capacity_infeasible() {
        let s = scenario();
        let mut items = surveillance_items(&s);
        items.push(TrafficItem::traditional(100, 20, vec![4; 6], 1.0));
        let r = joint_schedule(&items, &s.grid, &s.target_ids()).unwrap();
        assert_eq!(r.status, Status::InfeasibleCapacity);
        assert!(r.schedule.allocation_of(100).is_none());
    }

    #[test]
    fn invalid_alpha_rejected() {
        let s = scenario();
        let mut items = surveillance_items(&s);
        items[0].alpha = 0.0;
        assert!(joint_schedule(&items, &s.grid, &s.target_ids()).is_err());
    }
}
