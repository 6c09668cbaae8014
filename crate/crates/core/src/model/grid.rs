use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The scheduling canvas: `num_subchannels × num_slots` RBs in one frame.
///
/// Slots and subchannels are 1-based at every public boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameGrid {
    num_subchannels: usize,
    num_slots: usize,
    slot_capacity: Vec<usize>,
    frame_duration_ms: f64,
}

impl FrameGrid {
    /// Grid with every slot's capacity equal to the subchannel count.
    pub fn new(num_subchannels: usize, num_slots: usize, frame_duration_ms: f64) -> Result<Self> {
        Self::with_capacity(
            num_subchannels,
            vec![num_subchannels; num_slots],
            frame_duration_ms,
        )
    }

    pub fn with_capacity(
        num_subchannels: usize,
        slot_capacity: Vec<usize>,
        frame_duration_ms: f64,
    ) -> Result<Self> {
        if num_subchannels == 0 {
            return Err(Error::invalid("frame needs at least one subchannel"));
        }
        if slot_capacity.is_empty() {
            return Err(Error::invalid("frame needs at least one slot"));
        }
        if !(frame_duration_ms > 0.0 && frame_duration_ms.is_finite()) {
            return Err(Error::invalid(format!(
                "frame duration must be positive, got {frame_duration_ms}"
            )));
        }
        if let Some((t, &c)) = slot_capacity
            .iter()
            .enumerate()
            .find(|(_, &c)| c > num_subchannels)
        {
            return Err(Error::invalid(format!(
                "slot {} capacity {c} exceeds subchannel count {num_subchannels}",
                t + 1
            )));
        }
        Ok(Self {
            num_subchannels,
            num_slots: slot_capacity.len(),
            slot_capacity,
            frame_duration_ms,
        })
    }

    #[inline]
    pub fn num_subchannels(&self) -> usize {
        self.num_subchannels
    }

    #[inline]
    pub fn num_slots(&self) -> usize {
        self.num_slots
    }

    /// Allocatable RBs in `slot` (1-based).
    #[inline]
    pub fn capacity(&self, slot: usize) -> usize {
        self.slot_capacity[slot - 1]
    }

    pub fn slot_capacities(&self) -> &[usize] {
        &self.slot_capacity
    }

    pub fn frame_duration_ms(&self) -> f64 {
        self.frame_duration_ms
    }

    pub fn total_rbs(&self) -> usize {
        self.num_subchannels * self.num_slots
    }

    pub fn slots(&self) -> impl Iterator<Item = usize> {
        1..=self.num_slots
    }
}
