//! Baseline iterative refiners (point-to-point ICP and trimmed ICP) behind a
//! single one-call-at-a-time interface driven by the refinement pipelines.

mod icp;

pub use icp::{alignment_from_correspondences, Correspondences};

use nalgebra::Vector3;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{PointCloud, Pose, TriangleMesh};
use crate::spatial::KdTree3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinerKind {
    Icp,
    TrimmedIcp,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RefinerConfig {
    pub kind: RefinerKind,
    /// Inner ICP iterations executed per refiner call.
    pub inner_steps_per_call: usize,
    /// Fraction of the worst residuals dropped each inner iteration
    /// (trimmed variant only).
    pub trim_fraction: f64,
    /// Correspondences beyond this distance are discarded (meters).
    pub max_correspondence_distance: f64,
    /// Size of the pre-sampled model point set.
    pub model_samples: usize,
}

impl RefinerConfig {
    pub fn icp() -> Self {
        Self {
            kind: RefinerKind::Icp,
            inner_steps_per_call: 10,
            trim_fraction: 0.0,
            max_correspondence_distance: 0.02,
            model_samples: 2048,
        }
    }

    pub fn trimmed_icp() -> Self {
        Self {
            kind: RefinerKind::TrimmedIcp,
            trim_fraction: 0.2,
            ..Self::icp()
        }
    }

    pub fn validate(&self) {
        assert!(self.inner_steps_per_call >= 1);
        assert!((0.0..1.0).contains(&self.trim_fraction));
        assert!(self.max_correspondence_distance > 0.0);
        assert!(self.model_samples >= 3);
    }

    fn effective_trim(&self) -> f64 {
        match self.kind {
            RefinerKind::Icp => 0.0,
            RefinerKind::TrimmedIcp => self.trim_fraction,
        }
    }
}

impl Default for RefinerConfig {
    fn default() -> Self {
        Self::icp()
    }
}

/// One refinement call: a fixed number of inner iterations updating `pose`.
/// The pipelines budget refinement by counting these calls.
pub trait Refiner {
    fn refine_step(&self, obs_cloud: &PointCloud, pose: &Pose) -> Pose;
}

/// Residual statistics of one inner ICP iteration, over the correspondence
/// set used for the alignment (after trimming).
#[derive(Debug, Clone, Copy)]
pub struct InnerIteration {
    pub pairs: usize,
    pub mse_before: f64,
    pub mse_after: f64,
}

/// Point-to-point / trimmed ICP against a pre-sampled model point set.
///
/// The kd-tree is built once over the model-frame points; each inner
/// iteration transforms the observed points into the model frame instead of
/// re-indexing the moved model.
pub struct IcpRefiner {
    model_points: Vec<Vector3<f64>>,
    tree: KdTree3,
    cfg: RefinerConfig,
}

impl IcpRefiner {
    pub fn from_mesh(mesh: &TriangleMesh, cfg: RefinerConfig, rng: &mut impl Rng) -> Self {
        cfg.validate();
        let model_points = mesh.sample_surface(cfg.model_samples, rng);
        Self::from_points(model_points, cfg)
    }

    pub fn from_points(model_points: Vec<Vector3<f64>>, cfg: RefinerConfig) -> Self {
        cfg.validate();
        let tree = KdTree3::build(&model_points);
        Self {
            model_points,
            tree,
            cfg,
        }
    }

    pub fn config(&self) -> &RefinerConfig {
        &self.cfg
    }

    pub fn model_points(&self) -> &[Vector3<f64>] {
        &self.model_points
    }

    /// Like [`Refiner::refine_step`] but reporting per-iteration residuals.
    pub fn refine_step_traced(
        &self,
        obs_cloud: &PointCloud,
        pose: &Pose,
    ) -> (Pose, Vec<InnerIteration>) {
        let mut current = *pose;
        let mut trace = Vec::with_capacity(self.cfg.inner_steps_per_call);
        let max_d2 =
            self.cfg.max_correspondence_distance * self.cfg.max_correspondence_distance;
        let trim = self.cfg.effective_trim();

        for _ in 0..self.cfg.inner_steps_per_call {
            let inv = current.inverse();
            // Pair (observed point, posed model point) via model-frame NN.
            let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
            for (oi, obs_point) in obs_cloud.points.iter().enumerate() {
                let query = inv.transform_point(obs_point);
                if let Some((mi, d2)) = self.tree.nearest(&query) {
                    if d2 <= max_d2 {
                        pairs.push((oi, mi, d2));
                    }
                }
            }
            if trim > 0.0 {
                let drop = (pairs.len() as f64 * trim).floor() as usize;
                if drop > 0 {
                    pairs.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(&b.0)));
                    pairs.truncate(pairs.len() - drop);
                }
            }
            if pairs.len() < 3 {
                return (current, trace);
            }
            let correspondences = Correspondences {
                observed: pairs.iter().map(|&(oi, _, _)| obs_cloud.points[oi]).collect(),
                model: pairs
                    .iter()
                    .map(|&(_, mi, _)| current.transform_point(&self.model_points[mi]))
                    .collect(),
                residuals: pairs.iter().map(|&(_, _, d2)| d2.sqrt()).collect(),
            };
            let mse_before =
                pairs.iter().map(|&(_, _, d2)| d2).sum::<f64>() / pairs.len() as f64;
            let Ok(delta) = alignment_from_correspondences(&correspondences) else {
                return (current, trace);
            };
            let next = delta.compose(&current);
            let mse_after = pairs
                .iter()
                .map(|&(oi, mi, _)| {
                    (obs_cloud.points[oi] - next.transform_point(&self.model_points[mi]))
                        .norm_squared()
                })
                .sum::<f64>()
                / pairs.len() as f64;
            trace.push(InnerIteration {
                pairs: pairs.len(),
                mse_before,
                mse_after,
            });
            current = next;
        }
        (current, trace)
    }
}

impl Refiner for IcpRefiner {
    fn refine_step(&self, obs_cloud: &PointCloud, pose: &Pose) -> Pose {
        self.refine_step_traced(obs_cloud, pose).0
    }
}
