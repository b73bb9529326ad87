use nalgebra::{Unit, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::Pose;

/// Uniform random direction on the unit sphere (normalized Gaussian draws).
pub fn uniform_unit_vector(rng: &mut impl Rng) -> Unit<Vector3<f64>> {
    loop {
        let v = Vector3::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        );
        let len = v.norm();
        if len > 1e-9 {
            return Unit::new_unchecked(v / len);
        }
    }
}

/// Rotates `p` by exactly `angle_deg` about a uniformly random axis. The
/// translation is unchanged and the geodesic rotation distance between input
/// and output equals the requested angle.
pub fn perturb_rotation(p: &Pose, angle_deg: f64, rng: &mut impl Rng) -> Pose {
    assert!(angle_deg >= 0.0, "angle must be non-negative");
    let axis = uniform_unit_vector(rng);
    if angle_deg == 0.0 {
        return *p;
    }
    let delta = Pose::from_axis_angle(axis, angle_deg.to_radians());
    delta.compose(p).with_translation(*p.translation())
}

/// Offsets the translation of `p` by exactly `distance` meters along a
/// uniformly random direction. The rotation is unchanged.
pub fn perturb_translation(p: &Pose, distance: f64, rng: &mut impl Rng) -> Pose {
    assert!(distance >= 0.0, "distance must be non-negative");
    let direction = uniform_unit_vector(rng);
    if distance == 0.0 {
        return *p;
    }
    p.with_translation(p.translation() + *direction * distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_magnitude_is_identity() {
        let p = Pose::from_axis_angle(Vector3::y_axis(), 0.4)
            .with_translation(Vector3::new(0.1, 0.2, 0.9));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let q = perturb_rotation(&p, 0.0, &mut rng);
        let r = perturb_translation(&p, 0.0, &mut rng);
        assert_eq!(p, q);
        assert_eq!(p, r);
    }

    #[test]
    fn rotation_distance_matches_request() {
        let p = Pose::from_axis_angle(Vector3::x_axis(), 1.1)
            .with_translation(Vector3::new(0.0, 0.1, 0.8));
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = perturb_rotation(&p, 5.0, &mut rng);
            assert!((p.geodesic_angle_deg(&q) - 5.0).abs() < 1e-6);
            assert_eq!(p.translation(), q.translation());
        }
    }

    #[test]
    fn translation_distance_matches_request() {
        let p = Pose::identity().with_translation(Vector3::new(0.3, -0.2, 0.7));
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = perturb_translation(&p, 0.005, &mut rng);
            assert!((p.translation_distance(&q) - 0.005).abs() < 1e-9);
            assert_eq!(p.rotation(), q.rotation());
        }
    }

    #[test]
    fn seeded_calls_are_repeatable() {
        let p = Pose::identity();
        let a = perturb_rotation(&p, 12.0, &mut ChaCha8Rng::seed_from_u64(77));
        let b = perturb_rotation(&p, 12.0, &mut ChaCha8Rng::seed_from_u64(77));
        assert_eq!(a, b);
    }

    #[test]
    fn unit_vectors_cover_the_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut mean = Vector3::zeros();
        for _ in 0..2000 {
            mean += *uniform_unit_vector(&mut rng);
        }
        mean /= 2000.0;
        // The mean of uniform directions concentrates near zero.
        assert!(mean.norm() < 0.06, "mean norm {}", mean.norm());
    }
}
