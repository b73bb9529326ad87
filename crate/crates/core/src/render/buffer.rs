use nalgebra::Vector3;

use crate::geometry::{DepthImage, NormalMap, PixelMask};

/// Instance id of background pixels.
pub const BACKGROUND: u32 = u32::MAX;

/// Per-pixel depth (meters, 0 = no hit), unit normal (camera frame) and
/// instance id produced by the rasterizer.
#[derive(Debug, Clone)]
pub struct RenderBuffer {
    pub width: usize,
    pub height: usize,
    pub depth: Vec<f64>,
    pub normal: Vec<Vector3<f64>>,
    pub instance: Vec<u32>,
}

impl RenderBuffer {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            depth: vec![0.0; width * height],
            normal: vec![Vector3::zeros(); width * height],
            instance: vec![BACKGROUND; width * height],
        }
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn is_hit(&self, x: usize, y: usize) -> bool {
        self.depth[self.idx(x, y)] > 0.0
    }

    pub fn hit_count(&self) -> usize {
        self.depth.iter().filter(|d| **d > 0.0).count()
    }

    pub fn depth_image(&self) -> DepthImage {
        DepthImage {
            width: self.width,
            height: self.height,
            data: self.depth.clone(),
        }
    }

    pub fn normal_map(&self) -> NormalMap {
        NormalMap {
            width: self.width,
            height: self.height,
            normals: self.normal.clone(),
            valid: self.depth.iter().map(|d| *d > 0.0).collect(),
        }
    }

    /// Mask of pixels belonging to the given instance id.
    pub fn instance_mask(&self, id: u32) -> PixelMask {
        PixelMask {
            width: self.width,
            height: self.height,
            data: self.instance.iter().map(|i| *i == id).collect(),
        }
    }
}
