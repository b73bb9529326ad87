use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Per-pixel depth in meters, row-major. `0` (or any non-positive or
/// non-finite value) marks an invalid measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DepthImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

impl DepthImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[self.idx(x, y)]
    }

    #[inline]
    pub fn is_valid(&self, x: usize, y: usize) -> bool {
        let d = self.at(x, y);
        d > 0.0 && d.is_finite()
    }

    pub fn valid_count(&self) -> usize {
        self.data.iter().filter(|d| **d > 0.0 && d.is_finite()).count()
    }
}

/// Per-pixel unit normals in camera frame with a validity flag.
#[derive(Debug, Clone)]
pub struct NormalMap {
    pub width: usize,
    pub height: usize,
    pub normals: Vec<Vector3<f64>>,
    pub valid: Vec<bool>,
}

impl NormalMap {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            normals: vec![Vector3::zeros(); width * height],
            valid: vec![false; width * height],
        }
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }
}

/// Boolean pixel mask, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelMask {
    pub width: usize,
    pub height: usize,
    pub data: Vec<bool>,
}

impl PixelMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![true; width * height],
        }
    }

    #[inline]
    pub fn idx(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[self.idx(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        let i = self.idx(x, y);
        self.data[i] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|b| **b).count()
    }

    /// Indices of set pixels as `(x, y)`, row-major order.
    pub fn set_pixels(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Pixel-wise union; both masks must share dimensions.
    pub fn union(&self, other: &PixelMask) -> PixelMask {
        assert_eq!((self.width, self.height), (other.width, other.height));
        PixelMask {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| *a || *b)
                .collect(),
        }
    }
}
