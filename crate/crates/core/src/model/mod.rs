//! Frames, cameras, targets, candidate allocations and schedule verification.

mod camera;
mod candidate;
mod grid;
mod schedule;
mod verify;

use std::collections::{BTreeMap, BTreeSet};

pub use camera::{CameraId, CameraNode, Geometry, Point, TargetId, TargetObject};
pub use candidate::{
    enumerate_candidates, just_achieves, robust_rate, usable_candidates, CandidateAllocation,
};
pub use grid::FrameGrid;
pub use schedule::Schedule;
pub use verify::{verify_schedule, Constraint, ConstraintCheck, FeasibilityReport, Violation};

use crate::error::{Error, Result};
use crate::scalar::{cast_rates, Rate};
use crate::scenario::ChannelParams;

/// A complete problem instance: frame, cameras (with rates and coverage) and
/// targets.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<R> {
    /// Side of the square area in meters; the base station sits at the centre.
    pub area_side: f64,
    pub grid: FrameGrid,
    pub channel: ChannelParams,
    pub cameras: Vec<CameraNode<R>>,
    pub targets: Vec<TargetObject>,
    pub seed: u64,
}

impl<R: Rate> Scenario<R> {
    /// Validated scenario. Camera coverage sets are taken as given.
    pub fn new(
        area_side: f64,
        grid: FrameGrid,
        channel: ChannelParams,
        cameras: Vec<CameraNode<R>>,
        targets: Vec<TargetObject>,
        seed: u64,
    ) -> Result<Self> {
        let s = Self {
            area_side,
            grid,
            channel,
            cameras,
            targets,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    /// Scenario without geometry: cameras carry explicit coverage sets and
    /// targets sit at the origin.
    pub fn abstract_instance(
        grid: FrameGrid,
        cameras: Vec<CameraNode<R>>,
        num_targets: u32,
    ) -> Result<Self> {
        let targets = (1..=num_targets)
            .map(|id| TargetObject::new(id, 0.0, 0.0))
            .collect();
        Self::new(1.0, grid, ChannelParams::default(), cameras, targets, 0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area_side > 0.0 && self.area_side.is_finite()) {
            return Err(Error::invalid("area_side must be positive"));
        }
        let mut target_ids = BTreeSet::new();
        for t in &self.targets {
            if !target_ids.insert(t.id) {
                return Err(Error::invalid(format!("duplicate target id {}", t.id)));
            }
        }
        let mut camera_ids = BTreeSet::new();
        for c in &self.cameras {
            if !camera_ids.insert(c.id) {
                return Err(Error::invalid(format!("duplicate camera id {}", c.id)));
            }
            c.validate(&self.grid)?;
            if let Some(y) = c.coverage.iter().find(|y| !target_ids.contains(y)) {
                return Err(Error::invalid(format!(
                    "camera {} covers unknown target {y}",
                    c.id
                )));
            }
        }
        Ok(())
    }

    pub fn camera(&self, id: CameraId) -> Option<&CameraNode<R>> {
        self.cameras.iter().find(|c| c.id == id)
    }

    pub fn target_ids(&self) -> BTreeSet<TargetId> {
        self.targets.iter().map(|t| t.id).collect()
    }

    /// Targets no camera can see; any such target makes the instance infeasible.
    pub fn uncovered_targets(&self) -> Vec<TargetId> {
        let seen: BTreeSet<TargetId> = self
            .cameras
            .iter()
            .flat_map(|c| c.coverage.iter().copied())
            .collect();
        self.targets
            .iter()
            .map(|t| t.id)
            .filter(|id| !seen.contains(id))
            .collect()
    }

    /// Cameras covering each target.
    pub fn coverers(&self) -> BTreeMap<TargetId, Vec<CameraId>> {
        let mut map: BTreeMap<TargetId, Vec<CameraId>> =
            self.targets.iter().map(|t| (t.id, Vec::new())).collect();
        for c in &self.cameras {
            for y in &c.coverage {
                map.entry(*y).or_default().push(c.id);
            }
        }
        map
    }

    /// Same scenario with rates converted to another scalar type through `f64`.
    pub fn map_rates<B: Rate>(&self) -> Result<Scenario<B>> {
        let conv = |r: &[R]| {
            cast_rates::<R, B>(r).ok_or_else(|| Error::invalid("rate not representable"))
        };
        let cameras = self
            .cameras
            .iter()
            .map(|c| {
                Ok(CameraNode {
                    id: c.id,
                    position: c.position,
                    geometry: c.geometry,
                    rate_requirement: conv(&[c.rate_requirement])?[0],
                    rates: conv(&c.rates)?,
                    slot_rates: c
                        .slot_rates
                        .as_ref()
                        .map(|rows| rows.iter().map(|r| conv(r)).collect::<Result<Vec<_>>>())
                        .transpose()?,
                    coverage: c.coverage.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Scenario::new(
            self.area_side,
            self.grid.clone(),
            self.channel.clone(),
            cameras,
            self.targets.clone(),
            self.seed,
        )
    }
}
