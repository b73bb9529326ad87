use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// Pinhole camera intrinsics. Image coordinates are in pixels with the
/// convention that pixel `(ix, iy)` covers `[ix, ix+1) × [iy, iy+1)` and has
/// its center at `(ix + 0.5, iy + 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraIntrinsics {
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
    pub width: usize,
    pub height: usize,
}

impl CameraIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, width: usize, height: usize) -> Self {
        assert!(fx > 0.0 && fy > 0.0, "focal lengths must be positive");
        assert!(width > 0 && height > 0, "image size must be positive");
        Self {
            fx,
            fy,
            cx,
            cy,
            width,
            height,
        }
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    /// Projects a camera-frame point to continuous image coordinates.
    /// Returns `None` for points at or behind the camera.
    pub fn project(&self, p: &Vector3<f64>) -> Option<(f64, f64)> {
        if p.z <= 0.0 {
            return None;
        }
        Some((self.fx * p.x / p.z + self.cx, self.fy * p.y / p.z + self.cy))
    }

    /// Camera-frame point for pixel `(ix, iy)` (center ray) at depth `z`.
    pub fn backproject_pixel(&self, ix: usize, iy: usize, z: f64) -> Vector3<f64> {
        let u = ix as f64 + 0.5;
        let v = iy as f64 + 0.5;
        Vector3::new((u - self.cx) / self.fx * z, (v - self.cy) / self.fy * z, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn project_backproject_roundtrip() {
        let k = CameraIntrinsics::new(500.0, 480.0, 320.5, 240.5, 640, 480);
        let p = k.backproject_pixel(100, 200, 0.75);
        let (u, v) = k.project(&p).unwrap();
        assert!((u - 100.5).abs() < 1e-12);
        assert!((v - 200.5).abs() < 1e-12);
    }

    #[test]
    fn principal_pixel_backprojects_to_axis() {
        let k = CameraIntrinsics::new(500.0, 500.0, 320.5, 240.5, 640, 480);
        let p = k.backproject_pixel(320, 240, 1.0);
        assert!(p.x.abs() < 1e-12 && p.y.abs() < 1e-12);
        assert_eq!(p.z, 1.0);
    }

    #[test]
    fn behind_camera_does_not_project() {
        let k = CameraIntrinsics::new(500.0, 500.0, 320.0, 240.0, 640, 480);
        assert!(k.project(&Vector3::new(0.0, 0.0, -1.0)).is_none());
    }
}
