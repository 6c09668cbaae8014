//! Scenario generation, coverage geometry, the channel model and scenario
//! documents.

mod channel;
mod config;
mod coverage;
mod document;
mod generate;

pub use channel::{derive_rates, ChannelParams, McsEntry, THERMAL_NOISE_DBM_PER_HZ};
pub use config::{
    CameraKind, Deployment, FrameConfig, GeometryConfig, ScenarioConfig, CELL_EDGE_FACTOR,
};
pub use coverage::{compute_coverage, sees};
pub use document::{load_scenario, save_scenario};
pub(crate) use document::from_json;
pub use generate::{channel_rng, generate_scenario, generate_scenario_with_seeds, placement_rng};
