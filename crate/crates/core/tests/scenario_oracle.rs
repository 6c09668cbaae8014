use std::collections::BTreeSet;

use csrap_core::model::{Geometry, Point};
use csrap_core::scenario::{
    derive_rates, generate_scenario, CameraKind, ChannelParams, Deployment, ScenarioConfig,
};
use csrap_core::solvers::bound_params;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Straight-line channel formula with the default constants written out.
fn reference_rate(distance_m: f64, shadow_db: f64) -> f64 {
    let d_km = distance_m.max(1.0) / 1000.0;
    let path_loss = 128.1 + 37.6 * d_km.log10();
    let noise = -174.0 + 10.0 * 180_000f64.log10() + 5.0;
    let snr = 24.0 - path_loss - shadow_db - noise;
    if snr >= 15.0 {
        8.0
    } else if snr >= 11.0 {
        6.0
    } else if snr >= 5.0 {
        4.0
    } else if snr >= -1.0 {
        2.0
    } else {
        0.0
    }
}

fn histogram(rates: &[f64]) -> [f64; 5] {
    let mut h = [0.0; 5];
    for &r in rates {
        h[(r / 2.0) as usize] += 1.0;
    }
    h.map(|c| c / rates.len() as f64)
}

#[test]
fn rate_distribution_matches_reimplementation() {
    let channel = ChannelParams::default();
    let bs = Point::new(250.0, 250.0);
    for (x, y) in [(250.0, 250.0), (300.0, 250.0), (450.0, 400.0), (0.0, 0.0)] {
        let pos = Point::new(x, y);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let got = derive_rates(pos, bs, 10_000, &channel, &mut rng);

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let d = ((x - 250.0f64).powi(2) + (y - 250.0f64).powi(2)).sqrt();
        let want: Vec<f64> = (0..10_000)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                reference_rate(d, 8.0 * z)
            })
            .collect();

        for (g, w) in histogram(&got).iter().zip(histogram(&want)) {
            assert!((g - w).abs() < 1e-3, "at ({x}, {y}): {g} vs {w}");
        }
        assert!(got.iter().all(|r| [0.0, 2.0, 4.0, 6.0, 8.0].contains(r)));
    }
}

#[test]
fn generated_rates_are_quantized() {
    for deployment in [Deployment::OverallGrid, Deployment::PartialRandom, Deployment::CellEdge] {
        let cfg = ScenarioConfig { deployment, rng_seed: 5, ..Default::default() };
        let s = generate_scenario(&cfg).unwrap();
        let table: Vec<f64> = s.channel.mcs_table.iter().map(|e| e.rate).collect();
        for c in &s.cameras {
            assert!(c.rates.iter().all(|r| *r == 0.0 || table.contains(r)));
        }
    }
}

/// Coverage by vector algebra: distance check, then the angle between the
/// orientation vector and the target direction.
fn brute_sees(cam: Point, g: &Geometry, target: Point) -> bool {
    let (dx, dy) = (target.x - cam.x, target.y - cam.y);
    let d = (dx * dx + dy * dy).sqrt();
    match *g {
        Geometry::Omnidirectional { view_distance } => d <= view_distance,
        Geometry::Directional { view_distance, orientation, fov } => {
            if d > view_distance {
                return false;
            }
            if d == 0.0 || fov >= 360.0 {
                return true;
            }
            let (ox, oy) = (orientation.to_radians().cos(), orientation.to_radians().sin());
            let cos = ((dx * ox + dy * oy) / d).clamp(-1.0, 1.0);
            cos.acos().to_degrees() <= fov / 2.0
        }
    }
}

#[test]
fn coverage_matches_pairwise_geometry() {
    for (seed, kind) in [(1, CameraKind::Omnidirectional), (2, CameraKind::Directional), (3, CameraKind::Directional)] {
        let mut cfg = ScenarioConfig {
            num_cameras: 50,
            num_targets: 40,
            deployment: Deployment::PartialRandom,
            rng_seed: seed,
            ..Default::default()
        };
        cfg.camera_geometry.kind = kind;
        cfg.camera_geometry.view_distance_max = 80.0;
        let s = generate_scenario(&cfg).unwrap();
        assert_eq!(s.cameras.len(), 50);
        for c in &s.cameras {
            let want: BTreeSet<u32> = s
                .targets
                .iter()
                .filter(|t| brute_sees(c.position, &c.geometry, t.position))
                .map(|t| t.id)
                .collect();
            assert_eq!(c.coverage, want, "camera {}", c.id);
        }
        assert!(s.uncovered_targets().is_empty());
    }
}

#[test]
fn overall_grid_leaves_no_gap() {
    let cfg = ScenarioConfig::default();
    let s = generate_scenario(&cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let p = Point::new(rng.gen_range(0.0..=500.0), rng.gen_range(0.0..=500.0));
        assert!(
            s.cameras.iter().any(|c| c.position.distance(&p) <= 40.0),
            "({}, {}) is uncovered",
            p.x,
            p.y
        );
    }
}

#[test]
fn d_star_is_largest_coverage_set() {
    for seed in 0..5 {
        let cfg = ScenarioConfig {
            deployment: Deployment::PartialRandom,
            num_cameras: 50,
            rng_seed: seed,
            ..Default::default()
        };
        let s = generate_scenario(&cfg).unwrap();
        let p = bound_params(&s).unwrap();
        let mut best = 0;
        for c in &s.cameras {
            best = best.max(c.coverage.len());
        }
        assert_eq!(p.d_star, best);
    }
}
