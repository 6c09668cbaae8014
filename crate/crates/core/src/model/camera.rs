use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FrameGrid;
use crate::scalar::Rate;

pub type TargetId = u32;
pub type CameraId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Bearing of `other` seen from `self`, degrees in `[0, 360)`, counter-clockwise from +x.
    pub fn bearing_to(&self, other: &Point) -> f64 {
        (other.y - self.y)
            .atan2(other.x - self.x)
            .to_degrees()
            .rem_euclid(360.0)
    }
}

/// Static surveillance target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetObject {
    pub id: TargetId,
    #[serde(flatten)]
    pub position: Point,
}

impl TargetObject {
    pub fn new(id: TargetId, x: f64, y: f64) -> Self {
        Self {
            id,
            position: Point::new(x, y),
        }
    }
}

/// Camera field of view. Angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Geometry {
    Omnidirectional {
        view_distance: f64,
    },
    Directional {
        view_distance: f64,
        orientation: f64,
        fov: f64,
    },
}

impl Geometry {
    pub fn view_distance(&self) -> f64 {
        match *self {
            Geometry::Omnidirectional { view_distance } => view_distance,
            Geometry::Directional { view_distance, .. } => view_distance,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let vd = self.view_distance();
        if !(vd > 0.0 && vd.is_finite()) {
            return Err(Error::invalid(format!(
                "view_distance must be positive, got {vd}"
            )));
        }
        if let Geometry::Directional {
            fov, orientation, ..
        } = *self
        {
            if !(fov > 0.0 && fov <= 360.0) {
                return Err(Error::invalid(format!("fov must be in (0, 360], got {fov}")));
            }
            if !orientation.is_finite() {
                return Err(Error::invalid("orientation must be finite"));
            }
        }
        Ok(())
    }
}

/// A camera with its uplink channel and coverage set.
///
/// `rates[m - 1]` is the achievable rate on subchannel `m`, constant over the
/// frame unless `slot_rates` overrides it per slot.
#[derive(Debug, Clone, PartialEq)]
pub struct CameraNode<R> {
    pub id: CameraId,
    pub position: Point,
    pub geometry: Geometry,
    pub rate_requirement: R,
    pub rates: Vec<R>,
    /// Optional `T × M` override, `slot_rates[t - 1][m - 1]`.
    pub slot_rates: Option<Vec<Vec<R>>>,
    pub coverage: BTreeSet<TargetId>,
}

impl<R: Rate> CameraNode<R> {
    pub fn new(
        id: CameraId,
        position: Point,
        geometry: Geometry,
        rate_requirement: R,
        rates: Vec<R>,
    ) -> Self {
        Self {
            id,
            position,
            geometry,
            rate_requirement,
            rates,
            slot_rates: None,
            coverage: BTreeSet::new(),
        }
    }

    /// Camera with an explicit coverage set and no meaningful geometry.
    pub fn abstract_camera(
        id: CameraId,
        rate_requirement: R,
        rates: Vec<R>,
        coverage: impl IntoIterator<Item = TargetId>,
    ) -> Self {
        let mut cam = Self::new(
            id,
            Point::new(0.0, 0.0),
            Geometry::Omnidirectional { view_distance: 1.0 },
            rate_requirement,
            rates,
        );
        cam.coverage = coverage.into_iter().collect();
        cam
    }

    /// Per-subchannel rates in `slot` (1-based).
    pub fn rates_in_slot(&self, slot: usize) -> &[R] {
        match &self.slot_rates {
            Some(per_slot) => &per_slot[slot - 1],
            None => &self.rates,
        }
    }

    pub fn rate(&self, slot: usize, subchannel: usize) -> R {
        self.rates_in_slot(slot)[subchannel - 1]
    }

    pub fn validate(&self, grid: &FrameGrid) -> Result<()> {
        let ctx = |msg: String| Error::invalid(format!("camera {}: {msg}", self.id));
        self.geometry.validate().map_err(|e| ctx(e.to_string()))?;
        if !(self.rate_requirement.is_valid_rate() && self.rate_requirement > R::zero()) {
            return Err(ctx(format!(
                "rate_requirement must be positive, got {}",
                self.rate_requirement
            )));
        }
        let m = grid.num_subchannels();
        if self.rates.len() != m {
            return Err(ctx(format!(
                "expected {m} subchannel rates, got {}",
                self.rates.len()
            )));
        }
        if let Some(bad) = self.rates.iter().find(|r| !r.is_valid_rate()) {
            return Err(ctx(format!("invalid subchannel rate {bad}")));
        }
        if let Some(per_slot) = &self.slot_rates {
            if per_slot.len() != grid.num_slots() {
                return Err(ctx(format!(
                    "slot_rates has {} rows, frame has {} slots",
                    per_slot.len(),
                    grid.num_slots()
                )));
            }
            for row in per_slot {
                if row.len() != m || row.iter().any(|r| !r.is_valid_rate()) {
                    return Err(ctx("malformed slot_rates row".into()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bearing_is_counter_clockwise_from_x_axis() {
        let o = Point::new(0.0, 0.0);
        assert!((o.bearing_to(&Point::new(1.0, 0.0)) - 0.0).abs() < 1e-12);
        assert!((o.bearing_to(&Point::new(0.0, 1.0)) - 90.0).abs() < 1e-12);
        assert!((o.bearing_to(&Point::new(0.0, -1.0)) - 270.0).abs() < 1e-12);
    }

    #[test]
    fn validation_catches_bad_cameras() {
        let grid = FrameGrid::new(3, 1, 10.0).unwrap();
        let ok = CameraNode::abstract_camera(1, 9.0, vec![8.0, 4.0, 7.0], [1]);
        assert!(ok.validate(&grid).is_ok());

        let mut short = ok.clone();
        short.rates.pop();
        assert!(short.validate(&grid).is_err());

        let mut zero_req = ok.clone();
        zero_req.rate_requirement = 0.0;
        assert!(zero_req.validate(&grid).is_err());

        let mut neg = ok.clone();
        neg.rates[1] = -1.0;
        assert!(neg.validate(&grid).is_err());

        let mut fov = ok;
        fov.geometry = Geometry::Directional {
            view_distance: 10.0,
            orientation: 0.0,
            fov: 361.0,
        };
        assert!(fov.validate(&grid).is_err());
    }
}
