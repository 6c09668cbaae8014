use std::collections::BTreeSet;

use crate::model::{CameraNode, Geometry, Point, TargetId, TargetObject};

/// Whether a camera at `position` with `geometry` sees `target`.
///
/// Distance and angle bounds are both inclusive.
pub fn sees(position: &Point, geometry: &Geometry, target: &Point) -> bool {
    let d = position.distance(target);
    if d > geometry.view_distance() {
        return false;
    }
    match *geometry {
        Geometry::Omnidirectional { .. } => true,
        Geometry::Directional {
            orientation, fov, ..
        } => {
            if d == 0.0 || fov >= 360.0 {
                return true;
            }
            let off = (position.bearing_to(target) - orientation + 180.0).rem_euclid(360.0) - 180.0;
            off.abs() <= fov / 2.0
        }
    }
}

/// Ids of the targets visible to `camera`.
pub fn compute_coverage<R>(camera: &CameraNode<R>, targets: &[TargetObject]) -> BTreeSet<TargetId> {
    targets
        .iter()
        .filter(|t| sees(&camera.position, &camera.geometry, &t.position))
        .map(|t| t.id)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cam(geometry: Geometry) -> CameraNode<f64> {
        CameraNode::new(1, Point::new(0.0, 0.0), geometry, 1.0, vec![1.0])
    }

    #[test]
    fn omni_boundary_is_inclusive() {
        let c = cam(Geometry::Omnidirectional { view_distance: 30.0 });
        let t = [
            TargetObject::new(1, 30.0, 0.0),
            TargetObject::new(2, 0.0, -30.0),
            TargetObject::new(3, 30.000_001, 0.0),
        ];
        assert_eq!(compute_coverage(&c, &t), BTreeSet::from([1, 2]));
    }

    #[test]
    fn directional_angle_boundary() {
        let c = cam(Geometry::Directional {
            view_distance: 50.0,
            orientation: 0.0,
            fov: 120.0,
        });
        let at = |deg: f64, id| {
            let r = deg.to_radians();
            TargetObject::new(id, 10.0 * r.cos(), 10.0 * r.sin())
        };
        let t = [at(61.0, 1), at(59.0, 2), at(-59.0, 3), at(-61.0, 4), at(180.0, 5)];
        assert_eq!(compute_coverage(&c, &t), BTreeSet::from([2, 3]));
    }

    #[test]
    fn directional_wraps_around_north() {
        let c = cam(Geometry::Directional {
            view_distance: 50.0,
            orientation: 350.0,
            fov: 40.0,
        });
        let at = |deg: f64, id| {
            let r = deg.to_radians();
            TargetObject::new(id, 10.0 * r.cos(), 10.0 * r.sin())
        };
        let t = [at(5.0, 1), at(335.0, 2), at(15.0, 3), at(320.0, 4)];
        assert_eq!(compute_coverage(&c, &t), BTreeSet::from([1, 2]));
    }

    #[test]
    fn full_circle_fov_is_omnidirectional() {
        let c = cam(Geometry::Directional {
            view_distance: 5.0,
            orientation: 90.0,
            fov: 360.0,
        });
        let t = [TargetObject::new(1, -3.0, -3.0), TargetObject::new(2, 0.0, 0.0)];
        assert_eq!(compute_coverage(&c, &t), BTreeSet::from([1, 2]));
    }
}
