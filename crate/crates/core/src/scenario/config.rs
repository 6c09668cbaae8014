use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::FrameGrid;
use crate::scenario::ChannelParams;

/// Where cameras (and, for the cell-edge scheme, targets) are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deployment {
    /// Square lattice dense enough that the camera discs tile the area.
    OverallGrid,
    /// One camera near each target, remaining cameras uniform.
    PartialRandom,
    /// As `PartialRandom`, confined to the outer annulus of the cell.
    CellEdge,
}

impl Deployment {
    pub fn name(&self) -> &'static str {
        match self {
            Deployment::OverallGrid => "overall_grid",
            Deployment::PartialRandom => "partial_random",
            Deployment::CellEdge => "cell_edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CameraKind {
    Omnidirectional,
    Directional,
}

/// Camera geometry drawn per camera: view distance uniform in
/// `[view_distance_min, view_distance_max]`, orientation uniform in `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeometryConfig {
    pub kind: CameraKind,
    pub view_distance_min: f64,
    pub view_distance_max: f64,
    /// Degrees; ignored for omnidirectional cameras.
    pub fov: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            kind: CameraKind::Omnidirectional,
            view_distance_min: 40.0,
            view_distance_max: 40.0,
            fov: 120.0,
        }
    }
}

impl GeometryConfig {
    pub fn with_view_distance(mut self, vd: f64) -> Self {
        self.view_distance_min = vd;
        self.view_distance_max = vd;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameConfig {
    #[serde(rename = "M")]
    pub num_subchannels: usize,
    #[serde(rename = "T")]
    pub num_slots: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slot_capacity: Option<Vec<usize>>,
    pub rho_ms: f64,
}

impl Default for FrameConfig {
    /// 10 MHz carrier: 50 RBs per slot, 20 slots in a 10 ms frame.
    fn default() -> Self {
        Self {
            num_subchannels: 50,
            num_slots: 20,
            slot_capacity: None,
            rho_ms: 10.0,
        }
    }
}

impl FrameConfig {
    pub fn build(&self) -> Result<FrameGrid> {
        match &self.slot_capacity {
            None => FrameGrid::new(self.num_subchannels, self.num_slots, self.rho_ms),
            Some(caps) => {
                if caps.len() != self.num_slots {
                    return Err(Error::config(format!(
                        "slot_capacity has {} entries for {} slots",
                        caps.len(),
                        self.num_slots
                    )));
                }
                FrameGrid::with_capacity(self.num_subchannels, caps.clone(), self.rho_ms)
            }
        }
    }

    pub fn from_grid(grid: &FrameGrid) -> Self {
        let caps = grid.slot_capacities();
        let uniform = caps.iter().all(|&c| c == grid.num_subchannels());
        Self {
            num_subchannels: grid.num_subchannels(),
            num_slots: grid.num_slots(),
            slot_capacity: (!uniform).then(|| caps.to_vec()),
            rho_ms: grid.frame_duration_ms(),
        }
    }
}

/// Everything needed to generate one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub area_side: f64,
    pub num_targets: usize,
    pub num_cameras: usize,
    pub deployment: Deployment,
    pub camera_geometry: GeometryConfig,
    /// Rate requirements are whole numbers drawn uniformly from this range.
    pub rate_requirement_min: f64,
    pub rate_requirement_max: f64,
    pub frame: FrameConfig,
    pub channel: ChannelParams,
    pub rng_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            area_side: 500.0,
            num_targets: 40,
            num_cameras: 100,
            deployment: Deployment::OverallGrid,
            camera_geometry: GeometryConfig::default(),
            rate_requirement_min: 8.0,
            rate_requirement_max: 24.0,
            frame: FrameConfig::default(),
            channel: ChannelParams::default(),
            rng_seed: 1,
        }
    }
}

/// Radial distance from the base station beyond which a point is cell-edge,
/// as a fraction of half the area side.
pub const CELL_EDGE_FACTOR: f64 = 0.8;

impl ScenarioConfig {
    /// Parses a JSON config; missing keys take their defaults.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::scenario::from_json(text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area_side > 0.0 && self.area_side.is_finite()) {
            return Err(Error::config("area_side must be positive"));
        }
        if self.num_targets == 0 {
            return Err(Error::config("num_targets must be at least 1"));
        }
        if self.num_cameras == 0 {
            return Err(Error::config("num_cameras must be at least 1"));
        }
        let g = &self.camera_geometry;
        if !(g.view_distance_min > 0.0 && g.view_distance_min <= g.view_distance_max) {
            return Err(Error::config("view distance range must be positive and ordered"));
        }
        if g.kind == CameraKind::Directional && !(g.fov > 0.0 && g.fov <= 360.0) {
            return Err(Error::config("fov must be in (0, 360]"));
        }
        let (lo, hi) = (self.rate_requirement_min, self.rate_requirement_max);
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::config("rate requirement range must be positive and ordered"));
        }
        if hi.floor() < lo.ceil() {
            return Err(Error::config("rate requirement range contains no whole number"));
        }
        if matches!(self.deployment, Deployment::PartialRandom | Deployment::CellEdge)
            && self.num_cameras < self.num_targets
        {
            return Err(Error::config(format!(
                "{} deployment needs at least one camera per target ({} < {})",
                self.deployment.name(),
                self.num_cameras,
                self.num_targets
            )));
        }
        self.channel.validate()?;
        self.frame.build()?;
        Ok(())
    }
}
