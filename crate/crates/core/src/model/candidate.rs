use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CameraId, CameraNode, FrameGrid};
use crate::scalar::Rate;

/// One contiguous run of RBs in one slot that just achieves a camera's rate
/// requirement at the run's robust (minimum) rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateAllocation<R> {
    pub camera_id: CameraId,
    pub slot: usize,
    pub start: usize,
    pub length: usize,
    pub robust_rate: R,
}

impl<R> CandidateAllocation<R> {
    /// Last subchannel of the run (inclusive).
    #[inline]
    pub fn end(&self) -> usize {
        self.start + self.length - 1
    }

    #[inline]
    pub fn overlaps(&self, other: &Self) -> bool {
        self.slot == other.slot && self.start <= other.end() && other.start <= self.end()
    }

    pub fn contains(&self, slot: usize, subchannel: usize) -> bool {
        self.slot == slot && (self.start..=self.end()).contains(&subchannel)
    }

    /// `(slot, subchannel)` pairs covered by the run.
    pub fn rbs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (self.start..=self.end()).map(move |m| (self.slot, m))
    }
}

/// Minimum of a run's per-RB rates; SC-FDMA forces the run onto one MCS.
pub fn robust_rate<R: Rate>(rates: &[R]) -> Result<R> {
    let (first, rest) = rates
        .split_first()
        .ok_or_else(|| Error::invalid("robust rate of an empty run"))?;
    Ok(rest.iter().fold(*first, |acc, &r| acc.min_rate(r)))
}

/// `rate · (len − 1) < requirement ≤ rate · len`.
#[inline]
pub fn just_achieves<R: Rate>(rate: R, len: usize, requirement: R) -> bool {
    rate.times(len - 1) < requirement && rate.times(len) >= requirement
}

/// Every run in every slot that just achieves the camera's requirement,
/// ordered by slot, start, then length.
///
/// Runs whose robust rate is zero are never returned. Slot capacity is not
/// applied here; see [`usable_candidates`].
pub fn enumerate_candidates<R: Rate>(
    camera: &CameraNode<R>,
    grid: &FrameGrid,
) -> Result<Vec<CandidateAllocation<R>>> {
    camera.validate(grid)?;
    let m = grid.num_subchannels();
    let req = camera.rate_requirement;
    let mut out = Vec::new();
    for slot in grid.slots() {
        if slot > 1 && camera.slot_rates.is_none() {
            // Same rates in every slot: repeat the first slot's runs.
            let first: Vec<_> = out.iter().filter(|c: &&CandidateAllocation<R>| c.slot == 1).copied().collect();
            out.extend(first.into_iter().map(|c| CandidateAllocation { slot, ..c }));
            continue;
        }
        let rates = camera.rates_in_slot(slot);
        for start in 1..=m {
            let mut robust = rates[start - 1];
            for end in start..=m {
                robust = robust.min_rate(rates[end - 1]);
                if robust.is_zero() {
                    break;
                }
                let length = end - start + 1;
                if just_achieves(robust, length, req) {
                    out.push(CandidateAllocation {
                        camera_id: camera.id,
                        slot,
                        start,
                        length,
                        robust_rate: robust,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Candidates that fit inside their slot's capacity.
pub fn usable_candidates<R: Rate>(
    camera: &CameraNode<R>,
    grid: &FrameGrid,
) -> Result<Vec<CandidateAllocation<R>>> {
    let mut all = enumerate_candidates(camera, grid)?;
    all.retain(|c| c.length <= grid.capacity(c.slot));
    Ok(all)
}
