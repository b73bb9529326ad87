//! Procedurally generated mesh zoo: box, 24-gon cylinder, wedge and an
//! L-shaped prism. Covers flat-resting, rolling and asymmetric contact cases
//! without shipping binary assets.

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::geometry::TriangleMesh;

/// Segments of the cylinder prism.
pub const CYLINDER_SEGMENTS: usize = 24;

/// Parametric zoo shape. All dimensions in meters; meshes are centered on
/// the body origin with +z up in the canonical resting orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZooShape {
    Box { w: f64, d: f64, h: f64 },
    Cylinder { radius: f64, height: f64 },
    Wedge { w: f64, d: f64, h: f64 },
    LShape { size: f64, thickness: f64, depth: f64 },
}

impl ZooShape {
    /// The four standard zoo instances used by the experiment protocols.
    pub fn default_zoo() -> Vec<ZooShape> {
        vec![
            ZooShape::Box {
                w: 0.08,
                d: 0.06,
                h: 0.04,
            },
            ZooShape::Cylinder {
                radius: 0.03,
                height: 0.08,
            },
            ZooShape::Wedge {
                w: 0.08,
                d: 0.05,
                h: 0.05,
            },
            ZooShape::LShape {
                size: 0.08,
                thickness: 0.035,
                depth: 0.04,
            },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ZooShape::Box { .. } => "box",
            ZooShape::Cylinder { .. } => "cylinder",
            ZooShape::Wedge { .. } => "wedge",
            ZooShape::LShape { .. } => "lshape",
        }
    }

    pub fn mesh(&self) -> TriangleMesh {
        match *self {
            ZooShape::Box { w, d, h } => box_mesh(w, d, h),
            ZooShape::Cylinder { radius, height } => cylinder_mesh(radius, height),
            ZooShape::Wedge { w, d, h } => wedge_mesh(w, d, h),
            ZooShape::LShape {
                size,
                thickness,
                depth,
            } => lshape_mesh(size, thickness, depth),
        }
    }

    /// Height of the body origin above the plane in the canonical rest
    /// orientation (identity rotation).
    pub fn rest_height(&self) -> f64 {
        match *self {
            ZooShape::Box { h, .. } => h / 2.0,
            ZooShape::Cylinder { height, .. } => height / 2.0,
            ZooShape::Wedge { h, .. } => h / 2.0,
            ZooShape::LShape { size, .. } => size / 2.0,
        }
    }

    /// Footprint radius for non-overlap checks when placing objects.
    pub fn footprint_radius(&self) -> f64 {
        match *self {
            ZooShape::Box { w, d, .. } => 0.5 * (w * w + d * d).sqrt(),
            ZooShape::Cylinder { radius, .. } => radius,
            ZooShape::Wedge { w, d, .. } => 0.5 * (w * w + d * d).sqrt(),
            ZooShape::LShape { size, depth, .. } => 0.5 * (size * size + depth * depth).sqrt(),
        }
    }

    /// Declared discrete proper symmetry group (rotations, identity first).
    pub fn symmetries(&self) -> Vec<Matrix3<f64>> {
        match *self {
            ZooShape::Box { .. } => {
                // Cuboid group: 180° about each principal axis.
                vec![
                    Matrix3::identity(),
                    *Rotation3::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI)
                        .matrix(),
                    *Rotation3::from_axis_angle(&Vector3::y_axis(), std::f64::consts::PI)
                        .matrix(),
                    *Rotation3::from_axis_angle(&Vector3::z_axis(), std::f64::consts::PI)
                        .matrix(),
                ]
            }
            ZooShape::Cylinder { .. } => (0..CYLINDER_SEGMENTS)
                .map(|k| {
                    *Rotation3::from_axis_angle(
                        &Vector3::z_axis(),
                        k as f64 * std::f64::consts::TAU / CYLINDER_SEGMENTS as f64,
                    )
                    .matrix()
                })
                .collect(),
            ZooShape::Wedge { .. } | ZooShape::LShape { .. } => vec![Matrix3::identity()],
        }
    }
}

struct MeshBuilder {
    vertices: Vec<Vector3<f64>>,
    normals: Vec<Vector3<f64>>,
    triangles: Vec<[u32; 3]>,
}

impl MeshBuilder {
    fn new() -> Self {
        Self {
            vertices: Vec::new(),
            normals: Vec::new(),
            triangles: Vec::new(),
        }
    }

    fn vertex(&mut self, p: Vector3<f64>, n: Vector3<f64>) -> u32 {
        self.vertices.push(p);
        self.normals.push(n);
        (self.vertices.len() - 1) as u32
    }

    /// Quad with one flat normal, split into two triangles.
    fn quad(&mut self, corners: [Vector3<f64>; 4], normal: Vector3<f64>) {
        let ids = corners.map(|c| self.vertex(c, normal));
        self.triangles.push([ids[0], ids[1], ids[2]]);
        self.triangles.push([ids[0], ids[2], ids[3]]);
    }

    fn build(self) -> TriangleMesh {
        TriangleMesh::new(self.vertices, self.triangles, self.normals)
            .expect("procedural mesh is valid")
    }
}

/// Axis-aligned box centered at the origin, extents `w × d × h`.
pub fn box_mesh(w: f64, d: f64, h: f64) -> TriangleMesh {
    let (x, y, z) = (w / 2.0, d / 2.0, h / 2.0);
    let mut b = MeshBuilder::new();
    // +z, -z, +x, -x, +y, -y faces, outward CCW winding.
    b.quad(
        [
            Vector3::new(-x, -y, z),
            Vector3::new(x, -y, z),
            Vector3::new(x, y, z),
            Vector3::new(-x, y, z),
        ],
        Vector3::z(),
    );
    b.quad(
        [
            Vector3::new(-x, -y, -z),
            Vector3::new(-x, y, -z),
            Vector3::new(x, y, -z),
            Vector3::new(x, -y, -z),
        ],
        -Vector3::z(),
    );
    b.quad(
        [
            Vector3::new(x, -y, -z),
            Vector3::new(x, y, -z),
            Vector3::new(x, y, z),
            Vector3::new(x, -y, z),
        ],
        Vector3::x(),
    );
    b.quad(
        [
            Vector3::new(-x, -y, -z),
            Vector3::new(-x, -y, z),
            Vector3::new(-x, y, z),
            Vector3::new(-x, y, -z),
        ],
        -Vector3::x(),
    );
    b.quad(
        [
            Vector3::new(-x, y, -z),
            Vector3::new(-x, y, z),
            Vector3::new(x, y, z),
            Vector3::new(x, y, -z),
        ],
        Vector3::y(),
    );
    b.quad(
        [
            Vector3::new(-x, -y, -z),
            Vector3::new(x, -y, -z),
            Vector3::new(x, -y, z),
            Vector3::new(-x, -y, z),
        ],
        -Vector3::y(),
    );
    b.build()
}

/// Regular 24-gon prism (cylinder stand-in) with smooth side normals,
/// axis +z, centered at the origin.
pub fn cylinder_mesh(radius: f64, height: f64) -> TriangleMesh {
    let n = CYLINDER_SEGMENTS;
    let z = height / 2.0;
    let mut b = MeshBuilder::new();
    let ring: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / n as f64;
            (radius * a.cos(), radius * a.sin())
        })
        .collect();
    // Side with radial normals.
    let mut bottom_ids = Vec::with_capacity(n);
    let mut top_ids = Vec::with_capacity(n);
    for &(x, y) in &ring {
        let normal = Vector3::new(x, y, 0.0).normalize();
        bottom_ids.push(b.vertex(Vector3::new(x, y, -z), normal));
        top_ids.push(b.vertex(Vector3::new(x, y, z), normal));
    }
    for k in 0..n {
        let k1 = (k + 1) % n;
        b.triangles
            .push([bottom_ids[k], bottom_ids[k1], top_ids[k1]]);
        b.triangles.push([bottom_ids[k], top_ids[k1], top_ids[k]]);
    }
    // Caps with flat normals.
    for (zc, normal) in [(z, Vector3::z()), (-z, -Vector3::z())] {
        let center = b.vertex(Vector3::new(0.0, 0.0, zc), normal);
        let ids: Vec<u32> = ring
            .iter()
            .map(|&(x, y)| b.vertex(Vector3::new(x, y, zc), normal))
            .collect();
        for k in 0..n {
            let k1 = (k + 1) % n;
            if zc > 0.0 {
                b.triangles.push([center, ids[k], ids[k1]]);
            } else {
                b.triangles.push([center, ids[k1], ids[k]]);
            }
        }
    }
    b.build()
}

/// Right-triangular prism: rectangular base `w × d`, vertical back face,
/// slanted front, height `h`; centered at the origin.
pub fn wedge_mesh(w: f64, d: f64, h: f64) -> TriangleMesh {
    let (x, y, z) = (w / 2.0, d / 2.0, h / 2.0);
    let mut b = MeshBuilder::new();
    // Cross-section in xz: A(-x,-z), B(x,-z), C(-x,z).
    let slant = Vector3::new(h, 0.0, w).normalize();
    // Base (-z).
    b.quad(
        [
            Vector3::new(-x, -y, -z),
            Vector3::new(-x, y, -z),
            Vector3::new(x, y, -z),
            Vector3::new(x, -y, -z),
        ],
        -Vector3::z(),
    );
    // Back (-x).
    b.quad(
        [
            Vector3::new(-x, -y, -z),
            Vector3::new(-x, -y, z),
            Vector3::new(-x, y, z),
            Vector3::new(-x, y, -z),
        ],
        -Vector3::x(),
    );
    // Slanted face from B up to C.
    b.quad(
        [
            Vector3::new(x, -y, -z),
            Vector3::new(x, y, -z),
            Vector3::new(-x, y, z),
            Vector3::new(-x, -y, z),
        ],
        slant,
    );
    // Triangular caps.
    let cap = |b: &mut MeshBuilder, yy: f64, normal: Vector3<f64>| {
        let a = b.vertex(Vector3::new(-x, yy, -z), normal);
        let p = b.vertex(Vector3::new(x, yy, -z), normal);
        let c = b.vertex(Vector3::new(-x, yy, z), normal);
        if yy > 0.0 {
            b.triangles.push([a, p, c]);
        } else {
            b.triangles.push([a, c, p]);
        }
    };
    cap(&mut b, y, Vector3::y());
    cap(&mut b, -y, -Vector3::y());
    b.build()
}

/// L-shaped prism: outer square `size × size` cross-section with an arm
/// `thickness` wide, extruded `depth` along y; centered on its bounding box.
pub fn lshape_mesh(size: f64, thickness: f64, depth: f64) -> TriangleMesh {
    let a = size;
    let t = thickness;
    let y = depth / 2.0;
    let shift = Vector3::new(a / 2.0, 0.0, a / 2.0);
    // CCW outline in xz (x right, z up).
    let outline = [
        Vector3::new(0.0, 0.0, 0.0),
        Vector3::new(a, 0.0, 0.0),
        Vector3::new(a, 0.0, t),
        Vector3::new(t, 0.0, t),
        Vector3::new(t, 0.0, a),
        Vector3::new(0.0, 0.0, a),
    ]
    .map(|p| p - shift);
    let mut b = MeshBuilder::new();
    for i in 0..outline.len() {
        let p0 = outline[i];
        let p1 = outline[(i + 1) % outline.len()];
        let d = p1 - p0;
        let normal = Vector3::new(d.z, 0.0, -d.x).normalize();
        b.quad(
            [
                p0 + Vector3::new(0.0, -y, 0.0),
                p1 + Vector3::new(0.0, -y, 0.0),
                p1 + Vector3::new(0.0, y, 0.0),
                p0 + Vector3::new(0.0, y, 0.0),
            ],
            normal,
        );
    }
    // Caps: two rectangles per side (bottom bar + upright bar).
    for (yy, normal) in [(y, Vector3::y()), (-y, -Vector3::y())] {
        let rects = [
            // Bottom bar [0,a] x [0,t].
            [
                Vector3::new(0.0, 0.0, 0.0),
                Vector3::new(a, 0.0, 0.0),
                Vector3::new(a, 0.0, t),
                Vector3::new(0.0, 0.0, t),
            ],
            // Upright bar [0,t] x [t,a].
            [
                Vector3::new(0.0, 0.0, t),
                Vector3::new(t, 0.0, t),
                Vector3::new(t, 0.0, a),
                Vector3::new(0.0, 0.0, a),
            ],
        ];
        for rect in rects {
            let mut corners = rect.map(|p| p - shift + Vector3::new(0.0, yy, 0.0));
            if yy < 0.0 {
                corners.reverse();
            }
            b.quad(corners, normal);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::make_collision_shape;

    #[test]
    fn zoo_meshes_are_valid_and_simulable() {
        for shape in ZooShape::default_zoo() {
            let mesh = shape.mesh();
            mesh.validate().expect("valid zoo mesh");
            let collision = make_collision_shape(&mesh).expect("simulable zoo mesh");
            assert!(collision.volume > 1e-6, "{} volume", shape.name());
            // Resting height keeps the lowest vertex on the plane.
            let (lo, _) = mesh.bounds();
            assert!(
                (shape.rest_height() + lo.z).abs() < 1e-9,
                "{} rest height",
                shape.name()
            );
        }
    }

    #[test]
    fn cylinder_symmetries_preserve_mesh() {
        let shape = ZooShape::Cylinder {
            radius: 0.03,
            height: 0.08,
        };
        for sym in shape.symmetries() {
            assert!((sym.determinant() - 1.0).abs() < 1e-9);
        }
        assert_eq!(shape.symmetries().len(), CYLINDER_SEGMENTS);
    }

    #[test]
    fn box_volume_matches_dims() {
        let mesh = box_mesh(0.08, 0.06, 0.04);
        let shape = make_collision_shape(&mesh).unwrap();
        assert!((shape.volume - 0.08 * 0.06 * 0.04).abs() < 1e-12);
    }

    #[test]
    fn lshape_hull_fills_the_notch() {
        let mesh = lshape_mesh(0.08, 0.035, 0.04);
        let shape = make_collision_shape(&mesh).unwrap();
        // Hull volume exceeds the L solid volume (notch filled).
        let l_volume = (0.08 * 0.035 + 0.035 * (0.08 - 0.035)) * 0.04;
        assert!(shape.volume > l_volume * 1.2);
    }
}
