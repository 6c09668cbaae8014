//! JSON scenario documents.
//!
//! ```json
//! {
//!   "area": 500.0,
//!   "frame": {"M": 6, "T": 3, "slot_capacity": [6, 6, 6], "rho_ms": 10.0},
//!   "channel": {...},
//!   "cameras": [{"id": 1, "x": 10.0, "y": 20.0,
//!                "geometry": {"type": "omnidirectional", "view_distance": 40.0},
//!                "rate_requirement": 9.0, "rates": [8.0, 4.0, 7.0, ...]}],
//!   "targets": [{"id": 1, "x": 12.0, "y": 25.0}],
//!   "seed": 42
//! }
//! ```
//!
//! `rates` is optional; cameras without it get rates from the channel model,
//! seeded by `seed`, in document order. `coverage` (a list of target ids) is
//! an optional override of the geometric coverage set and is only written when
//! it differs from the geometry. `slot_rates` optionally gives per-slot rows.
//! Subchannel and slot indices are 1-based everywhere.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{CameraNode, Geometry, Point, Scenario, TargetObject};
use crate::scalar::Rate;
use crate::scenario::generate::channel_rng;
use crate::scenario::{compute_coverage, derive_rates, ChannelParams, FrameConfig};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
struct ScenarioDocument<R> {
    area: f64,
    frame: FrameConfig,
    #[serde(default)]
    channel: ChannelParams,
    cameras: Vec<CameraDocument<R>>,
    targets: Vec<TargetObject>,
    #[serde(default)]
    seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "R: Serialize", deserialize = "R: Deserialize<'de>"))]
struct CameraDocument<R> {
    id: u32,
    x: f64,
    y: f64,
    geometry: Geometry,
    rate_requirement: R,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rates: Option<Vec<R>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    slot_rates: Option<Vec<Vec<R>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coverage: Option<Vec<u32>>,
}

/// Parses and validates a scenario document.
pub fn load_scenario<R: Rate + DeserializeOwned>(text: &str) -> Result<Scenario<R>> {
    from_document(from_json(text)?)
}

/// Deserializes JSON, naming the offending field on failure.
pub(crate) fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().to_string();
        let field = missing_field(&message)
            .map(|f| {
                if path == "." {
                    f.to_string()
                } else {
                    format!("{path}.{f}")
                }
            })
            .unwrap_or(path);
        Error::parse(field, message)
    })
}

fn missing_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

fn from_document<R: Rate>(doc: ScenarioDocument<R>) -> Result<Scenario<R>> {
    let grid = doc
        .frame
        .build()
        .map_err(|e| Error::parse("frame", e.to_string()))?;
    doc.channel
        .validate()
        .map_err(|e| Error::parse("channel", e.to_string()))?;
    let bs = Point::new(doc.area / 2.0, doc.area / 2.0);
    let mut rng = channel_rng(doc.seed);
    let mut cameras = Vec::with_capacity(doc.cameras.len());
    for (i, c) in doc.cameras.into_iter().enumerate() {
        let field = |f: &str| format!("cameras[{i}].{f}");
        let position = Point::new(c.x, c.y);
        let rates = match c.rates {
            Some(r) => r,
            None => derive_rates(position, bs, grid.num_subchannels(), &doc.channel, &mut rng)
                .into_iter()
                .map(|r| R::from_f64(r).ok_or_else(|| Error::parse(field("rates"), "unrepresentable rate")))
                .collect::<Result<_>>()?,
        };
        if rates.len() != grid.num_subchannels() {
            return Err(Error::parse(
                field("rates"),
                format!("expected {} entries, got {}", grid.num_subchannels(), rates.len()),
            ));
        }
        let mut cam = CameraNode::new(c.id, position, c.geometry, c.rate_requirement, rates);
        cam.slot_rates = c.slot_rates;
        c.geometry
            .validate()
            .map_err(|e| Error::parse(field("geometry"), e.to_string()))?;
        if !(cam.rate_requirement.is_valid_rate() && cam.rate_requirement > R::zero()) {
            return Err(Error::parse(field("rate_requirement"), "must be positive"));
        }
        cam.validate(&grid)
            .map_err(|e| Error::parse(format!("cameras[{i}]"), e.to_string()))?;
        cameras.push((cam, c.coverage));
    }
    let targets = doc.targets;
    let cameras = cameras
        .into_iter()
        .map(|(mut cam, coverage)| {
            cam.coverage = match coverage {
                Some(ids) => ids.into_iter().collect(),
                None => compute_coverage(&cam, &targets),
            };
            cam
        })
        .collect();
    Scenario::new(doc.area, grid, doc.channel, cameras, targets, doc.seed)
        .map_err(|e| Error::parse("document", e.to_string()))
}

/// Serializes a scenario with explicit rates so that loading it back yields an
/// identical scenario.
pub fn save_scenario<R: Rate + Serialize>(scenario: &Scenario<R>) -> Result<String> {
    let cameras = scenario
        .cameras
        .iter()
        .map(|c| {
            let geometric = compute_coverage(c, &scenario.targets);
            CameraDocument {
                id: c.id,
                x: c.position.x,
                y: c.position.y,
                geometry: c.geometry,
                rate_requirement: c.rate_requirement,
                rates: Some(c.rates.clone()),
                slot_rates: c.slot_rates.clone(),
                coverage: (geometric != c.coverage).then(|| c.coverage.iter().copied().collect()),
            }
        })
        .collect();
    let doc = ScenarioDocument {
        area: scenario.area_side,
        frame: FrameConfig::from_grid(&scenario.grid),
        channel: scenario.channel.clone(),
        cameras,
        targets: scenario.targets.clone(),
        seed: scenario.seed,
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::invalid(e.to_string()))
}
