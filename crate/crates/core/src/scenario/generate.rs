use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CameraNode, Geometry, Point, Scenario, TargetObject};
use crate::scenario::config::{CameraKind, Deployment, ScenarioConfig, CELL_EDGE_FACTOR};
use crate::scenario::{compute_coverage, derive_rates};

/// RNG for placement and rate requirements.
pub fn placement_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG for shadowing; an independent ChaCha stream of the same seed.
pub fn channel_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

/// Generates a scenario from `config.rng_seed`.
pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario<f64>> {
    generate_scenario_with_seeds(config, config.rng_seed, config.rng_seed)
}

/// Generates a scenario with separate placement and shadowing seeds, so that
/// a sweep can hold placement fixed while the channel varies.
pub fn generate_scenario_with_seeds(
    config: &ScenarioConfig,
    placement_seed: u64,
    channel_seed: u64,
) -> Result<Scenario<f64>> {
    config.validate()?;
    let grid = config.frame.build()?;
    let side = config.area_side;
    let bs = Point::new(side / 2.0, side / 2.0);
    let region = Region {
        side,
        min_radius: match config.deployment {
            Deployment::CellEdge => CELL_EDGE_FACTOR * side / 2.0,
            _ => 0.0,
        },
    };
    let mut rng = placement_rng(placement_seed);

    let targets: Vec<TargetObject> = (1..=config.num_targets as u32)
        .map(|id| {
            let p = region.sample(&mut rng);
            TargetObject { id, position: p }
        })
        .collect();

    let mut placed: Vec<(Point, Geometry)> = Vec::with_capacity(config.num_cameras);
    match config.deployment {
        Deployment::OverallGrid => {
            let vd_min = config.camera_geometry.view_distance_min;
            let per_side = (config.num_cameras as f64).sqrt().floor() as usize;
            let spacing = side / per_side as f64;
            if spacing > vd_min * std::f64::consts::SQRT_2 {
                return Err(Error::config(format!(
                    "{} cameras give lattice spacing {spacing:.2} m, more than view distance \
                     {vd_min} m × √2; the grid cannot cover the area",
                    config.num_cameras
                )));
            }
            for i in 0..per_side {
                for j in 0..per_side {
                    let p = Point::new((i as f64 + 0.5) * spacing, (j as f64 + 0.5) * spacing);
                    placed.push((p, draw_geometry(config, &mut rng)));
                }
            }
        }
        Deployment::PartialRandom | Deployment::CellEdge => {
            for t in &targets {
                placed.push(place_near(config, &region, &t.position, &mut rng));
            }
        }
    }
    while placed.len() < config.num_cameras {
        let p = region.sample(&mut rng);
        placed.push((p, draw_geometry(config, &mut rng)));
    }

    let lo = config.rate_requirement_min.ceil() as u64;
    let hi = config.rate_requirement_max.floor() as u64;
    let requirements: Vec<f64> = (0..placed.len())
        .map(|_| rng.gen_range(lo..=hi) as f64)
        .collect();

    let mut ch_rng = channel_rng(channel_seed);
    let cameras = placed
        .into_iter()
        .zip(requirements)
        .enumerate()
        .map(|(i, ((position, geometry), req))| {
            let rates = derive_rates(
                position,
                bs,
                grid.num_subchannels(),
                &config.channel,
                &mut ch_rng,
            );
            let mut cam = CameraNode::new(i as u32 + 1, position, geometry, req, rates);
            cam.coverage = compute_coverage(&cam, &targets);
            cam
        })
        .collect();

    Scenario::new(
        side,
        grid,
        config.channel.clone(),
        cameras,
        targets,
        placement_seed,
    )
}

struct Region {
    side: f64,
    /// Minimum distance from the centre (0 for the whole square).
    min_radius: f64,
}

impl Region {
    fn contains(&self, p: &Point) -> bool {
        let c = Point::new(self.side / 2.0, self.side / 2.0);
        (0.0..=self.side).contains(&p.x)
            && (0.0..=self.side).contains(&p.y)
            && p.distance(&c) >= self.min_radius
    }

    fn sample<G: Rng>(&self, rng: &mut G) -> Point {
        loop {
            let p = Point::new(rng.gen_range(0.0..self.side), rng.gen_range(0.0..self.side));
            if self.contains(&p) {
                return p;
            }
        }
    }
}

fn draw_geometry<G: Rng>(config: &ScenarioConfig, rng: &mut G) -> Geometry {
    let g = &config.camera_geometry;
    let view_distance = if g.view_distance_max > g.view_distance_min {
        rng.gen_range(g.view_distance_min..=g.view_distance_max)
    } else {
        g.view_distance_min
    };
    let orientation = rng.gen_range(0.0..360.0);
    match g.kind {
        CameraKind::Omnidirectional => Geometry::Omnidirectional { view_distance },
        CameraKind::Directional => Geometry::Directional {
            view_distance,
            orientation,
            fov: g.fov,
        },
    }
}

/// A camera that sees `target`, positioned inside `region`.
fn place_near<G: Rng>(
    config: &ScenarioConfig,
    region: &Region,
    target: &Point,
    rng: &mut G,
) -> (Point, Geometry) {
    const TRIES: usize = 1000;
    // Shrink slightly so rounding never pushes the target past the boundary.
    const MARGIN: f64 = 0.999;
    let mut geometry = draw_geometry(config, rng);
    let reach = geometry.view_distance() * MARGIN;
    let mut position = *target;
    for _ in 0..TRIES {
        let r = reach * rng.gen::<f64>().sqrt();
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = Point::new(target.x + r * a.cos(), target.y + r * a.sin());
        if region.contains(&p) {
            position = p;
            break;
        }
    }
    if let Geometry::Directional {
        ref mut orientation,
        fov,
        ..
    } = geometry
    {
        let half = fov / 2.0 * MARGIN;
        let jitter = if half > 0.0 { rng.gen_range(-half..=half) } else { 0.0 };
        *orientation = (position.bearing_to(target) + jitter).rem_euclid(360.0);
    }
    (position, geometry)
}
