use crate::model::{CameraId, CandidateAllocation, FrameGrid};
use crate::scalar::Rate;
use crate::solvers::common::{CandidatePools, Occupancy, Phase, TraceStep};

/// What to do when an entry has no conflict-free candidate left.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum OnFailure {
    Abort,
    Skip,
}

pub(crate) struct Relocation<R> {
    /// Final allocations in the order they were fixed.
    pub fixed: Vec<CandidateAllocation<R>>,
    /// Entries left without an allocation.
    pub failed: Vec<CameraId>,
    /// Set when an `Abort` entry failed; remaining entries were not processed.
    pub aborted: bool,
    pub trace: Vec<TraceStep<R>>,
    pub occupancy: Occupancy,
}

/// Turns tentative (possibly overlapping) allocations into a conflict-free set.
///
/// Repeatedly takes the unadjusted entry with the smallest tentative run
/// (lowest id on ties) and keeps its allocation, then moves every unadjusted
/// entry overlapping it to that entry's cheapest candidate disjoint from all
/// fixed allocations. Conflicts are only tested against fixed allocations; an
/// entry whose own tentative run collides with an earlier relocation is moved
/// the same way when its turn comes.
pub(crate) fn relocate<R: Rate>(
    tentative: &[CandidateAllocation<R>],
    pools: &CandidatePools<R>,
    grid: &FrameGrid,
    policy: impl Fn(CameraId) -> OnFailure,
) -> Relocation<R> {
    let mut unadjusted: Vec<CandidateAllocation<R>> = tentative.to_vec();
    unadjusted.sort_by_key(|a| (a.length, a.camera_id));
    unadjusted.reverse();

    let mut out = Relocation {
        fixed: Vec::with_capacity(tentative.len()),
        failed: Vec::new(),
        aborted: false,
        trace: Vec::new(),
        occupancy: Occupancy::new(grid),
    };

    // Smallest (length, id) sits at the back.
    while let Some(current) = unadjusted.pop() {
        let placed = if out.occupancy.fits(&current) {
            out.occupancy.take(&current);
            out.fixed.push(current);
            out.trace
                .push(TraceStep::new(Phase::Fixed, current.camera_id, Some(current)));
            Some(current)
        } else if !move_entry(&current, pools, &policy, &mut out) {
            return out;
        } else {
            out.fixed.last().copied().filter(|a| a.camera_id == current.camera_id)
        };

        let Some(anchor) = placed else { continue };
        let mut overlapping = Vec::new();
        unadjusted.retain(|a| {
            if a.overlaps(&anchor) {
                overlapping.push(*a);
                false
            } else {
                true
            }
        });
        overlapping.sort_by_key(|a| (a.length, a.camera_id));
        for entry in overlapping {
            if !move_entry(&entry, pools, &policy, &mut out) {
                return out;
            }
        }
    }
    out
}

/// Moves `entry` to its cheapest fitting candidate. Returns `false` when the
/// run must stop.
fn move_entry<R: Rate>(
    entry: &CandidateAllocation<R>,
    pools: &CandidatePools<R>,
    policy: &impl Fn(CameraId) -> OnFailure,
    out: &mut Relocation<R>,
) -> bool {
    match pools.cheapest_fitting(entry.camera_id, &out.occupancy) {
        Some(c) => {
            out.occupancy.take(&c);
            out.fixed.push(c);
            out.trace
                .push(TraceStep::new(Phase::Relocated, entry.camera_id, Some(c)));
            true
        }
        None => {
            out.failed.push(entry.camera_id);
            out.trace
                .push(TraceStep::new(Phase::RelocationFailed, entry.camera_id, None));
            match policy(entry.camera_id) {
                OnFailure::Abort => {
                    out.aborted = true;
                    false
                }
                OnFailure::Skip => true,
            }
        }
    }
}
