//! Rendering-based verification score for pose hypotheses.
//!
//! A hypothesis is scored by the average agreement between the observation
//! and the rendered estimate in terms of depth and surface normals, each
//! soft-thresholded: per evaluation pixel
//!
//! `f_d = 1 - |d - d̂|/τ` when `|d - d̂| < τ` (else 0) and
//! `f_n = 1 - (1 - n·n̂)/α` when `1 - n·n̂ < α` (else 0),
//!
//! and the score is `(mean f_d + mean f_n) / 2 ∈ [0, 1]`.
//!
//! The evaluation pixels are those with valid observed depth inside the
//! segmentation mask. Where the render has no hit at such a pixel both terms
//! contribute 0 but the pixel still counts, which makes the score sensitive
//! to silhouette misalignment. Pixels whose observed normal is undefined
//! contribute `f_n = 0` but keep their depth term.

use serde::{Deserialize, Serialize};

use crate::geometry::{CameraIntrinsics, DepthImage, NormalMap, PixelMask};
use crate::render::{reduce_sums, RenderBuffer, ScoreGrid};

/// Segmented RGB-D-derived observation: depth, normals and per-object masks.
#[derive(Debug, Clone)]
pub struct Observation {
    pub depth: DepthImage,
    pub normals: NormalMap,
    pub masks: Vec<PixelMask>,
    pub intrinsics: CameraIntrinsics,
}

impl Observation {
    pub fn width(&self) -> usize {
        self.depth.width
    }

    pub fn height(&self) -> usize {
        self.depth.height
    }

    /// Union of all per-object masks.
    pub fn union_mask(&self) -> PixelMask {
        let mut union = PixelMask::new(self.width(), self.height());
        for mask in &self.masks {
            union = union.union(mask);
        }
        union
    }
}

/// Soft thresholds of the verification score.
///
/// `tau` is the depth band in meters; `alpha` bounds the normal discrepancy
/// `1 - n·n̂` and is stored as `1 - cos(angle)` (the 45° default gives
/// `alpha ≈ 0.2929`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ScoreParams {
    pub tau: f64,
    pub alpha: f64,
}

impl ScoreParams {
    pub fn new(tau: f64, alpha: f64) -> Self {
        assert!(tau > 0.0, "tau must be positive");
        assert!(alpha > 0.0 && alpha <= 2.0, "alpha must be in (0, 2]");
        Self { tau, alpha }
    }

    pub fn from_normal_angle_deg(tau: f64, angle_deg: f64) -> Self {
        Self::new(tau, 1.0 - angle_deg.to_radians().cos())
    }
}

impl Default for ScoreParams {
    /// 20 mm depth band, 45° normal threshold.
    fn default() -> Self {
        Self::from_normal_angle_deg(0.02, 45.0)
    }
}

/// Per-pixel depth and normal contributions over the evaluation pixels.
pub fn score_grids(
    obs: &Observation,
    render: &RenderBuffer,
    mask: &PixelMask,
    params: &ScoreParams,
) -> (ScoreGrid, ScoreGrid) {
    assert_eq!(
        (obs.width(), obs.height()),
        (render.width, render.height),
        "observation and render dimensions differ"
    );
    assert_eq!((mask.width, mask.height), (render.width, render.height));
    let mut depth_grid = ScoreGrid::new(render.width, render.height);
    let mut normal_grid = ScoreGrid::new(render.width, render.height);
    for i in 0..render.width * render.height {
        if !mask.data[i] {
            continue;
        }
        let d = obs.depth.data[i];
        if !(d > 0.0) || !d.is_finite() {
            continue;
        }
        let rendered = render.depth[i];
        if rendered <= 0.0 {
            // Render miss inside the segment: maximal penalty, pixel counts.
            depth_grid.set(i, 0.0);
            normal_grid.set(i, 0.0);
            continue;
        }
        let depth_err = (d - rendered).abs();
        let f_d = if depth_err < params.tau {
            1.0 - depth_err / params.tau
        } else {
            0.0
        };
        depth_grid.set(i, f_d);
        let f_n = if obs.normals.valid[i] {
            let normal_err = 1.0 - obs.normals.normals[i].dot(&render.normal[i]);
            if normal_err < params.alpha {
                (1.0 - normal_err / params.alpha).max(0.0)
            } else {
                0.0
            }
        } else {
            0.0
        };
        normal_grid.set(i, f_n);
    }
    (depth_grid, normal_grid)
}

/// Verification score of a rendered hypothesis against the masked
/// observation, in `[0, 1]`. Returns 0 when no evaluation pixels exist.
pub fn fit_score(
    obs: &Observation,
    render: &RenderBuffer,
    mask: &PixelMask,
    params: &ScoreParams,
) -> f64 {
    let (depth_grid, normal_grid) = score_grids(obs, render, mask, params);
    let (depth_sum, n) = reduce_sums(&depth_grid);
    let (normal_sum, n2) = reduce_sums(&normal_grid);
    debug_assert_eq!(n, n2);
    if n == 0 {
        return 0.0;
    }
    0.5 * (depth_sum / n as f64 + normal_sum / n as f64)
}

/// Scene-level verification score: the union of all object masks evaluated
/// against a jointly rendered scene, so inter-object occlusion affects the
/// rendered depth through the z-buffer.
pub fn scene_fit_score(obs: &Observation, scene_render: &RenderBuffer, params: &ScoreParams) -> f64 {
    let union = obs.union_mask();
    fit_score(obs, scene_render, &union, params)
}

/// Per-pixel combined score for visualization (`None` outside the
/// evaluation set).
pub fn score_heatmap(
    obs: &Observation,
    render: &RenderBuffer,
    mask: &PixelMask,
    params: &ScoreParams,
) -> Vec<Option<f64>> {
    let (depth_grid, normal_grid) = score_grids(obs, render, mask, params);
    (0..depth_grid.values.len())
        .map(|i| {
            if depth_grid.valid[i] {
                Some(0.5 * (depth_grid.values[i] + normal_grid.values[i]))
            } else {
                None
            }
        })
        .collect()
}
