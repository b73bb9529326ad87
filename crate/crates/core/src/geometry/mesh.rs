use nalgebra::Vector3;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Pose;

/// Indexed triangle mesh with per-vertex unit normals, in object frame.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangleMesh {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[u32; 3]>,
    pub normals: Vec<Vector3<f64>>,
}

impl TriangleMesh {
    pub fn new(
        vertices: Vec<Vector3<f64>>,
        triangles: Vec<[u32; 3]>,
        normals: Vec<Vector3<f64>>,
    ) -> Result<Self> {
        let mesh = Self {
            vertices,
            triangles,
            normals,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    /// Builds per-vertex normals by area-weighted averaging of face normals.
    pub fn with_computed_normals(
        vertices: Vec<Vector3<f64>>,
        triangles: Vec<[u32; 3]>,
    ) -> Result<Self> {
        let count = vertices.len() as u32;
        for tri in &triangles {
            if tri.iter().any(|&i| i >= count) {
                return Err(Error::InvalidMesh(format!(
                    "triangle index out of range: {tri:?}"
                )));
            }
        }
        let mut normals = vec![Vector3::zeros(); vertices.len()];
        for tri in &triangles {
            let [a, b, c] = tri.map(|i| vertices[i as usize]);
            let face = (b - a).cross(&(c - a));
            for &i in tri {
                normals[i as usize] += face;
            }
        }
        for n in &mut normals {
            let len = n.norm();
            *n = if len > 1e-12 {
                *n / len
            } else {
                Vector3::z()
            };
        }
        Self::new(vertices, triangles, normals)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() || self.triangles.is_empty() {
            return Err(Error::InvalidMesh("mesh is empty".into()));
        }
        if self.normals.len() != self.vertices.len() {
            return Err(Error::InvalidMesh(format!(
                "{} normals for {} vertices",
                self.normals.len(),
                self.vertices.len()
            )));
        }
        for v in &self.vertices {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidMesh("non-finite vertex".into()));
            }
        }
        for n in &self.normals {
            if (n.norm() - 1.0).abs() > 1e-6 {
                return Err(Error::InvalidMesh("normal is not unit length".into()));
            }
        }
        let count = self.vertices.len() as u32;
        for tri in &self.triangles {
            if tri.iter().any(|&i| i >= count) {
                return Err(Error::InvalidMesh(format!(
                    "triangle index out of range: {tri:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn triangle_vertices(&self, tri: usize) -> [Vector3<f64>; 3] {
        self.triangles[tri].map(|i| self.vertices[i as usize])
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.triangles.len())
            .map(|t| {
                let [a, b, c] = self.triangle_vertices(t);
                0.5 * (b - a).cross(&(c - a)).norm()
            })
            .sum()
    }

    /// Axis-aligned bounds in object frame: `(min, max)`.
    pub fn bounds(&self) -> (Vector3<f64>, Vector3<f64>) {
        let mut lo = Vector3::repeat(f64::INFINITY);
        let mut hi = Vector3::repeat(f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = lo.inf(v);
            hi = hi.sup(v);
        }
        (lo, hi)
    }

    /// Draws `count` points from the surface, area-weighted.
    pub fn sample_surface(&self, count: usize, rng: &mut impl Rng) -> Vec<Vector3<f64>> {
        let mut cumulative = Vec::with_capacity(self.triangles.len());
        let mut total = 0.0;
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.triangle_vertices(t);
            total += 0.5 * (b - a).cross(&(c - a)).norm();
            cumulative.push(total);
        }
        let mut points = Vec::with_capacity(count);
        for _ in 0..count {
            let r = rng.random_range(0.0..total);
            let t = cumulative.partition_point(|&acc| acc < r);
            let [a, b, c] = self.triangle_vertices(t.min(self.triangles.len() - 1));
            // Uniform barycentric sample via the square-root trick.
            let su = rng.random::<f64>().sqrt();
            let v = rng.random::<f64>();
            points.push(a * (1.0 - su) + b * (su * (1.0 - v)) + c * (su * v));
        }
        points
    }

    pub fn transformed(&self, pose: &Pose) -> TriangleMesh {
        TriangleMesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| pose.transform_point(v))
                .collect(),
            triangles: self.triangles.clone(),
            normals: self
                .normals
                .iter()
                .map(|n| pose.transform_vector(n))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad() -> TriangleMesh {
        TriangleMesh::with_computed_normals(
            vec![
                Vector3::new(0.0, 0.0, 0.0),
                Vector3::new(1.0, 0.0, 0.0),
                Vector3::new(1.0, 1.0, 0.0),
                Vector3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn computed_normals_are_unit() {
        let m = quad();
        m.validate().unwrap();
        for n in &m.normals {
            assert!((n.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_out_of_range_index() {
        let r = TriangleMesh::with_computed_normals(
            vec![Vector3::zeros(), Vector3::x(), Vector3::y()],
            vec![[0, 1, 5]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn surface_samples_lie_on_surface() {
        let m = quad();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in m.sample_surface(256, &mut rng) {
            assert!(p.z.abs() < 1e-12);
            assert!((-1e-12..=1.0 + 1e-12).contains(&p.x));
            assert!((-1e-12..=1.0 + 1e-12).contains(&p.y));
        }
        assert!((m.surface_area() - 1.0).abs() < 1e-12);
    }
}
