use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::Pose;

/// Matched (observed, model) point pairs with their distances.
#[derive(Debug, Clone, Default)]
pub struct Correspondences {
    pub observed: Vec<Vector3<f64>>,
    pub model: Vec<Vector3<f64>>,
    pub residuals: Vec<f64>,
}

impl Correspondences {
    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }
}

/// Closed-form least-squares rigid alignment (Kabsch/SVD with determinant
/// correction): the returned delta pose minimizes
/// `Σ ||observed_i - (R model_i + t)||²` and always has a proper rotation.
///
/// Fails for fewer than 3 pairs or (near-)collinear configurations.
pub fn alignment_from_correspondences(c: &Correspondences) -> Result<Pose> {
    let n = c.len();
    if n < 3 || c.model.len() != n {
        return Err(Error::DegenerateCorrespondences(format!(
            "{n} pairs (need at least 3)"
        )));
    }
    let obs_centroid: Vector3<f64> = c.observed.iter().sum::<Vector3<f64>>() / n as f64;
    let model_centroid: Vector3<f64> = c.model.iter().sum::<Vector3<f64>>() / n as f64;

    let mut cross_cov = Matrix3::zeros();
    for i in 0..n {
        let m = c.model[i] - model_centroid;
        let o = c.observed[i] - obs_centroid;
        cross_cov += m * o.transpose();
    }

    let svd = cross_cov.svd(true, true);
    let u = svd.u.ok_or_else(|| {
        Error::DegenerateCorrespondences("SVD failed".into())
    })?;
    let v_t = svd.v_t.ok_or_else(|| {
        Error::DegenerateCorrespondences("SVD failed".into())
    })?;

    // Collinear pairs leave the rotation about the line unconstrained.
    let s_max = svd.singular_values[0].max(1e-300);
    if svd.singular_values[1] / s_max < 1e-9 {
        return Err(Error::DegenerateCorrespondences(
            "collinear configuration".into(),
        ));
    }

    let v = v_t.transpose();
    let mut d = Matrix3::identity();
    if (v * u.transpose()).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    let rotation = v * d * u.transpose();
    let translation = obs_centroid - rotation * model_centroid;
    Ok(Pose::new(rotation, translation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Unit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vector3<f64>> {
        (0..n)
            .map(|_| {
                Vector3::new(
                    rng.random_range(-0.1..0.1),
                    rng.random_range(-0.1..0.1),
                    rng.random_range(-0.1..0.1),
                )
            })
            .collect()
    }

    #[test]
    fn aligned_pairs_give_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let points = random_points(20, &mut rng);
        let c = Correspondences {
            observed: points.clone(),
            model: points,
            residuals: vec![0.0; 20],
        };
        let delta = alignment_from_correspondences(&c).unwrap();
        assert!((delta.rotation() - Matrix3::identity()).norm() < 1e-9);
        assert!(delta.translation().norm() < 1e-9);
    }

    #[test]
    fn recovers_known_rigid_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let model = random_points(30, &mut rng);
        let truth = Pose::from_axis_angle(Unit::new_normalize(Vector3::new(0.3, -1.0, 0.5)), 0.4)
            .with_translation(Vector3::new(0.02, -0.03, 0.05));
        let observed: Vec<_> = model.iter().map(|p| truth.transform_point(p)).collect();
        let c = Correspondences {
            observed,
            model,
            residuals: vec![],
        };
        let delta = alignment_from_correspondences(&c).unwrap();
        assert!((delta.rotation() - truth.rotation()).norm() < 1e-9);
        assert!(delta.translation_distance(&truth) < 1e-9);
    }

    #[test]
    fn rotation_is_always_proper() {
        // A reflection-tempting configuration: noisy near-planar points.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let model: Vec<Vector3<f64>> = (0..40)
            .map(|_| {
                Vector3::new(
                    rng.random_range(-0.1..0.1),
                    rng.random_range(-0.1..0.1),
                    rng.random_range(-0.001..0.001),
                )
            })
            .collect();
        let observed: Vec<Vector3<f64>> = model
            .iter()
            .map(|p| Vector3::new(p.x, p.y, -p.z + rng.random_range(-0.02..0.02)))
            .collect();
        let c = Correspondences {
            observed,
            model,
            residuals: vec![],
        };
        let delta = alignment_from_correspondences(&c).unwrap();
        assert!(delta.rotation().determinant() > 0.999);
    }

    #[test]
    fn collinear_pairs_are_degenerate() {
        let model: Vec<Vector3<f64>> = (0..10)
            .map(|i| Vector3::new(i as f64 * 0.01, 0.0, 0.0))
            .collect();
        let c = Correspondences {
            observed: model.clone(),
            model,
            residuals: vec![],
        };
        assert!(matches!(
            alignment_from_correspondences(&c),
            Err(Error::DegenerateCorrespondences(_))
        ));
    }

    #[test]
    fn too_few_pairs_rejected() {
        let c = Correspondences {
            observed: vec![Vector3::zeros(), Vector3::x()],
            model: vec![Vector3::zeros(), Vector3::x()],
            residuals: vec![],
        };
        assert!(alignment_from_correspondences(&c).is_err());
    }
}
