use nalgebra::{Matrix3, Unit, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Number of RANSAC hypotheses drawn by [`fit_support_plane`].
pub const RANSAC_TRIALS: usize = 256;

/// Minimum inlier ratio for a fit to count as a supporting plane.
const MIN_INLIER_RATIO: f64 = 0.10;

/// The plane `{x : normal · x = offset}` with a unit normal.
///
/// For a supporting plane the normal points away from the table surface
/// toward the objects, so the gravity direction is `-normal`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Vector3<f64>, offset: f64) -> Self {
        let len = normal.norm();
        assert!((len - 1.0).abs() <= 1e-6, "plane normal must be unit length");
        Self { normal, offset }
    }

    pub fn from_point_normal(point: &Vector3<f64>, normal: Unit<Vector3<f64>>) -> Self {
        Self {
            normal: *normal,
            offset: normal.dot(point),
        }
    }

    #[inline]
    pub fn signed_distance(&self, p: &Vector3<f64>) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Gravity direction implied by this supporting plane.
    pub fn gravity_direction(&self) -> Vector3<f64> {
        -self.normal
    }

    pub fn flipped(&self) -> Plane {
        Plane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }
}

/// RANSAC plane fit result: the plane and the indices of its inliers.
#[derive(Debug, Clone)]
pub struct FittedPlane {
    pub plane: Plane,
    pub inliers: Vec<usize>,
}

/// Fits the RANSAC-maximal inlier plane to `cloud` with the given inlier
/// `threshold` (meters). The returned normal is oriented so that the
/// off-plane points (the scene's objects) lie on the positive side; with no
/// off-plane points it points toward the camera origin.
///
/// Fails when fewer than 3 points are given, when all samples are degenerate
/// or when the best inlier ratio is below 10%.
pub fn fit_support_plane(
    cloud: &PointCloud,
    threshold: f64,
    rng: &mut impl Rng,
) -> Result<FittedPlane> {
    let points = &cloud.points;
    let n = points.len();
    if n < 3 {
        return Err(Error::NoSupportPlane {
            ratio: 0.0,
            required: MIN_INLIER_RATIO,
        });
    }

    let mut best: Option<(usize, Plane)> = None;
    for _ in 0..RANSAC_TRIALS {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        let l = rng.random_range(0..n);
        if i == j || j == l || i == l {
            continue;
        }
        let (a, b, c) = (points[i], points[j], points[l]);
        let cross = (b - a).cross(&(c - a));
        let len = cross.norm();
        if len < 1e-12 {
            continue;
        }
        let normal = cross / len;
        let plane = Plane {
            normal,
            offset: normal.dot(&a),
        };
        let count = points
            .iter()
            .filter(|p| plane.signed_distance(p).abs() <= threshold)
            .count();
        if best.as_ref().map_or(true, |(c0, _)| count > *c0) {
            best = Some((count, plane));
        }
    }

    let (count, coarse) = best.ok_or(Error::NoSupportPlane {
        ratio: 0.0,
        required: MIN_INLIER_RATIO,
    })?;
    if (count as f64) < MIN_INLIER_RATIO * n as f64 {
        return Err(Error::NoSupportPlane {
            ratio: count as f64 / n as f64,
            required: MIN_INLIER_RATIO,
        });
    }

    // Least-squares refit over the coarse inliers, then recompute the set.
    let coarse_inliers: Vec<usize> = (0..n)
        .filter(|&i| coarse.signed_distance(&points[i]).abs() <= threshold)
        .collect();
    let refined = least_squares_plane(points, &coarse_inliers).unwrap_or(coarse);
    let inliers: Vec<usize> = (0..n)
        .filter(|&i| refined.signed_distance(&points[i]).abs() <= threshold)
        .collect();

    // Orient so the off-plane points (objects) are on the positive side.
    let mut plane = refined;
    let mut above = 0.0;
    let mut outliers = 0usize;
    for (idx, p) in points.iter().enumerate() {
        let d = plane.signed_distance(p);
        if d.abs() > threshold {
            above += d;
            outliers += 1;
        }
        let _ = idx;
    }
    let flip = if outliers > 0 {
        above < 0.0
    } else {
        // Camera origin takes the role of the scene side.
        plane.signed_distance(&Vector3::zeros()) < 0.0
    };
    if flip {
        plane = plane.flipped();
    }

    Ok(FittedPlane { plane, inliers })
}

/// Total least squares plane through the indexed points (centroid + smallest
/// covariance eigenvector). `None` when the points are (near) collinear.
fn least_squares_plane(points: &[Vector3<f64>], idx: &[usize]) -> Option<Plane> {
    if idx.len() < 3 {
        return None;
    }
    let centroid: Vector3<f64> =
        idx.iter().map(|&i| points[i]).sum::<Vector3<f64>>() / idx.len() as f64;
    let mut cov = Matrix3::zeros();
    for &i in idx {
        let d = points[i] - centroid;
        cov += d * d.transpose();
    }
    let eig = cov.symmetric_eigen();
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let smallest = order[0];
    let middle = order[1];
    if eig.eigenvalues[middle] < 1e-12 * eig.eigenvalues[order[2]].max(1e-30) {
        return None;
    }
    let normal = eig.eigenvectors.column(smallest).normalize();
    Some(Plane {
        normal,
        offset: normal.dot(&centroid),
    })
}
