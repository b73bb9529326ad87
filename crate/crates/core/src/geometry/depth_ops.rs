use nalgebra::Vector3;

use crate::geometry::{CameraIntrinsics, DepthImage, NormalMap, PixelMask, PointCloud};

/// Depth jump treated as a surface discontinuity when estimating normals.
pub const DISCONTINUITY_THRESHOLD: f64 = 0.02;

/// Backprojects the valid masked depth pixels to camera-frame 3D points
/// (row-major pixel order). Pixels with non-positive or non-finite depth are
/// skipped; an empty cloud signals an unusable segment.
pub fn backproject(
    depth: &DepthImage,
    k: &CameraIntrinsics,
    mask: Option<&PixelMask>,
) -> PointCloud {
    assert_eq!((depth.width, depth.height), (k.width, k.height));
    let mut points = Vec::new();
    for y in 0..depth.height {
        for x in 0..depth.width {
            if let Some(m) = mask {
                if !m.get(x, y) {
                    continue;
                }
            }
            if !depth.is_valid(x, y) {
                continue;
            }
            points.push(k.backproject_pixel(x, y, depth.at(x, y)));
        }
    }
    PointCloud::from_points(points)
}

/// Estimates unit surface normals from a depth map via central differences of
/// the backprojected point grid, oriented toward the camera
/// (`normal · view_ray < 0`). Normals are undefined at image borders, at
/// invalid pixels and across depth discontinuities larger than
/// [`DISCONTINUITY_THRESHOLD`].
pub fn estimate_normals(depth: &DepthImage, k: &CameraIntrinsics) -> NormalMap {
    assert_eq!((depth.width, depth.height), (k.width, k.height));
    let mut map = NormalMap::new(depth.width, depth.height);
    if depth.width < 3 || depth.height < 3 {
        return map;
    }
    for y in 1..depth.height - 1 {
        for x in 1..depth.width - 1 {
            if !depth.is_valid(x, y) {
                continue;
            }
            let center = depth.at(x, y);
            let neighbors = [
                (x - 1, y),
                (x + 1, y),
                (x, y - 1),
                (x, y + 1),
            ];
            if neighbors.iter().any(|&(nx, ny)| {
                !depth.is_valid(nx, ny)
                    || (depth.at(nx, ny) - center).abs() > DISCONTINUITY_THRESHOLD
            }) {
                continue;
            }
            let px = |ix: usize, iy: usize| k.backproject_pixel(ix, iy, depth.at(ix, iy));
            let tangent_u = px(x + 1, y) - px(x - 1, y);
            let tangent_v = px(x, y + 1) - px(x, y - 1);
            let mut n = tangent_u.cross(&tangent_v);
            let len = n.norm();
            if len < 1e-12 {
                continue;
            }
            n /= len;
            let view = k.backproject_pixel(x, y, center);
            if n.dot(&view) > 0.0 {
                n = -n;
            }
            let i = map.idx(x, y);
            map.normals[i] = n;
            map.valid[i] = true;
        }
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intrinsics() -> CameraIntrinsics {
        CameraIntrinsics::new(300.0, 300.0, 80.5, 60.5, 160, 120)
    }

    /// Depth of the plane `n·p = d` along the ray of pixel (x, y).
    fn plane_depth(k: &CameraIntrinsics, n: Vector3<f64>, d: f64, x: usize, y: usize) -> f64 {
        let ray = k.backproject_pixel(x, y, 1.0);
        d / n.dot(&ray)
    }

    fn plane_image(k: &CameraIntrinsics, n: Vector3<f64>, d: f64) -> DepthImage {
        let mut img = DepthImage::new(k.width, k.height);
        for y in 0..k.height {
            for x in 0..k.width {
                img.data[img.idx(x, y)] = plane_depth(k, n, d, x, y);
            }
        }
        img
    }

    #[test]
    fn principal_pixel_maps_to_axis_point() {
        let k = intrinsics();
        let mut depth = DepthImage::new(k.width, k.height);
        let i = depth.idx(80, 60);
        depth.data[i] = 1.0;
        let cloud = backproject(&depth, &k, None);
        assert_eq!(cloud.len(), 1);
        assert!((cloud.points[0] - Vector3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn invalid_depth_yields_empty_cloud() {
        let k = intrinsics();
        let depth = DepthImage::new(k.width, k.height);
        assert!(backproject(&depth, &k, None).is_empty());
    }

    #[test]
    fn plane_depth_backprojects_coplanar() {
        let k = intrinsics();
        let n = Vector3::new(0.3, -0.2, 1.0).normalize();
        let depth = plane_image(&k, n, 0.8);
        let cloud = backproject(&depth, &k, None);
        assert_eq!(cloud.len(), k.pixel_count());
        for p in &cloud.points {
            assert!((n.dot(p) - 0.8).abs() < 1e-6);
        }
    }

    #[test]
    fn frontoparallel_plane_normals_point_at_camera() {
        let k = intrinsics();
        let mut depth = DepthImage::new(k.width, k.height);
        depth.data.fill(1.5);
        let map = estimate_normals(&depth, &k);
        let i = map.idx(40, 30);
        assert!(map.valid[i]);
        assert!((map.normals[i] - Vector3::new(0.0, 0.0, -1.0)).norm() < 1e-3);
    }

    #[test]
    fn tilted_plane_normals_match_analytic() {
        let k = intrinsics();
        // 45 degrees about the x axis.
        let n = Vector3::new(0.0, 1.0, 1.0).normalize();
        let depth = plane_image(&k, n, 0.9);
        let map = estimate_normals(&depth, &k);
        let mut checked = 0;
        for y in 10..k.height - 10 {
            for x in 10..k.width - 10 {
                let i = map.idx(x, y);
                if !map.valid[i] {
                    continue;
                }
                // Oriented toward the camera: compare against -n or n.
                let cos = map.normals[i].dot(&n).abs().clamp(0.0, 1.0);
                assert!(cos.acos().to_degrees() < 1.0, "normal off at ({x},{y})");
                checked += 1;
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn invalid_pixels_are_undefined() {
        let k = intrinsics();
        let mut depth = DepthImage::new(k.width, k.height);
        depth.data.fill(1.0);
        let hole = depth.idx(50, 40);
        depth.data[hole] = 0.0;
        let map = estimate_normals(&depth, &k);
        assert!(!map.valid[hole]);
        // Neighbors of the hole are undefined too (central difference needs it).
        assert!(!map.valid[map.idx(51, 40)]);
        // Border pixels are always undefined.
        assert!(!map.valid[map.idx(0, 0)]);
    }
}
