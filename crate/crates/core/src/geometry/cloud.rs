use nalgebra::Vector3;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Pose;

/// 3D points in meters, optionally with unit normals.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<Vector3<f64>>,
    pub normals: Option<Vec<Vector3<f64>>>,
}

impl PointCloud {
    pub fn from_points(points: Vec<Vector3<f64>>) -> Self {
        Self {
            points,
            normals: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidCloud("non-finite point".into()));
            }
        }
        if let Some(normals) = &self.normals {
            if normals.len() != self.points.len() {
                return Err(Error::InvalidCloud(format!(
                    "{} normals for {} points",
                    normals.len(),
                    self.points.len()
                )));
            }
            for n in normals {
                if (n.norm() - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidCloud("normal is not unit length".into()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn centroid(&self) -> Vector3<f64> {
        if self.points.is_empty() {
            return Vector3::zeros();
        }
        self.points.iter().sum::<Vector3<f64>>() / self.points.len() as f64
    }

    pub fn transformed(&self, pose: &Pose) -> PointCloud {
        PointCloud {
            points: self
                .points
                .iter()
                .map(|p| pose.transform_point(p))
                .collect(),
            normals: self.normals.as_ref().map(|normals| {
                normals
                    .iter()
                    .map(|n| pose.transform_vector(n))
                    .collect()
            }),
        }
    }

    /// Uniform random subsample of at most `max_points` points (order of the
    /// kept points follows the original cloud).
    pub fn subsampled(&self, max_points: usize, rng: &mut impl Rng) -> PointCloud {
        if self.points.len() <= max_points {
            return self.clone();
        }
        let mut keep: Vec<usize> = sample(rng, self.points.len(), max_points).into_vec();
        keep.sort_unstable();
        PointCloud {
            points: keep.iter().map(|&i| self.points[i]).collect(),
            normals: self
                .normals
                .as_ref()
                .map(|ns| keep.iter().map(|&i| ns[i]).collect()),
        }
    }
}
