use nalgebra::{Vector2, Vector3};

use crate::geometry::{CameraIntrinsics, Pose, TriangleMesh};
use crate::render::RenderBuffer;

/// Geometry in front of this camera-space depth is clipped.
const NEAR_PLANE: f64 = 1e-4;

/// One object to rasterize: mesh, camera-frame pose and instance id.
#[derive(Clone, Copy)]
pub struct Instance<'a> {
    pub mesh: &'a TriangleMesh,
    pub pose: Pose,
    pub id: u32,
}

impl<'a> Instance<'a> {
    pub fn new(mesh: &'a TriangleMesh, pose: Pose, id: u32) -> Self {
        Self { mesh, pose, id }
    }
}

/// Camera-space vertex with its (posed, not yet normalized) normal.
#[derive(Clone, Copy)]
struct ClipVertex {
    position: Vector3<f64>,
    normal: Vector3<f64>,
}

/// Perspective-correct rasterization of all instances into a shared z-buffer.
///
/// Pixel centers sit at integer+0.5; ties on triangle edges follow the
/// top-left fill rule. Backfaces are rasterized and their normals flipped
/// toward the camera. Deterministic for identical inputs; an empty instance
/// list yields an all-background buffer.
pub fn render(instances: &[Instance], k: &CameraIntrinsics) -> RenderBuffer {
    let mut buffer = RenderBuffer::new(k.width, k.height);
    for instance in instances {
        let rotation = instance.pose.rotation();
        let vertices: Vec<Vector3<f64>> = instance
            .mesh
            .vertices
            .iter()
            .map(|v| instance.pose.transform_point(v))
            .collect();
        let normals: Vec<Vector3<f64>> = instance
            .mesh
            .normals
            .iter()
            .map(|n| rotation * n)
            .collect();
        for tri in &instance.mesh.triangles {
            let corners = [
                ClipVertex {
                    position: vertices[tri[0] as usize],
                    normal: normals[tri[0] as usize],
                },
                ClipVertex {
                    position: vertices[tri[1] as usize],
                    normal: normals[tri[1] as usize],
                },
                ClipVertex {
                    position: vertices[tri[2] as usize],
                    normal: normals[tri[2] as usize],
                },
            ];
            let clipped = clip_near(&corners);
            if clipped.len() < 3 {
                continue;
            }
            for i in 1..clipped.len() - 1 {
                raster_triangle(
                    &mut buffer,
                    k,
                    instance.id,
                    &[clipped[0], clipped[i], clipped[i + 1]],
                );
            }
        }
    }
    buffer
}

/// Sutherland-Hodgman clip against `z >= NEAR_PLANE`; yields 0, 3 or 4 vertices.
fn clip_near(tri: &[ClipVertex; 3]) -> Vec<ClipVertex> {
    let mut out = Vec::with_capacity(4);
    for i in 0..3 {
        let a = tri[i];
        let b = tri[(i + 1) % 3];
        let a_in = a.position.z >= NEAR_PLANE;
        let b_in = b.position.z >= NEAR_PLANE;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            let t = (NEAR_PLANE - a.position.z) / (b.position.z - a.position.z);
            out.push(ClipVertex {
                position: a.position + (b.position - a.position) * t,
                normal: a.normal + (b.normal - a.normal) * t,
            });
        }
    }
    out
}

#[inline]
fn edge(a: &Vector2<f64>, b: &Vector2<f64>, p: &Vector2<f64>) -> f64 {
    (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
}

/// Tie-breaking rule: counts a boundary pixel iff its edge is a top or left
/// edge. With inside = positive edge functions in a y-down image, top edges
/// run in +x and left edges in -y.
#[inline]
fn is_top_left(a: &Vector2<f64>, b: &Vector2<f64>) -> bool {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    (dy == 0.0 && dx > 0.0) || dy < 0.0
}

fn raster_triangle(buffer: &mut RenderBuffer, k: &CameraIntrinsics, id: u32, tri: &[ClipVertex; 3]) {
    let mut v = *tri;
    let mut screen = [Vector2::zeros(); 3];
    for i in 0..3 {
        let p = v[i].position;
        screen[i] = Vector2::new(k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy);
    }
    let mut area2 = edge(&screen[0], &screen[1], &screen[2]);
    if area2 == 0.0 {
        return;
    }
    if area2 < 0.0 {
        v.swap(1, 2);
        screen.swap(1, 2);
        area2 = -area2;
    }

    let min_x = screen.iter().map(|s| s.x).fold(f64::INFINITY, f64::min);
    let max_x = screen.iter().map(|s| s.x).fold(f64::NEG_INFINITY, f64::max);
    let min_y = screen.iter().map(|s| s.y).fold(f64::INFINITY, f64::min);
    let max_y = screen.iter().map(|s| s.y).fold(f64::NEG_INFINITY, f64::max);
    // First and last pixel whose center (i+0.5) can fall inside the bbox.
    let x0 = (min_x - 0.5).ceil().max(0.0) as usize;
    let x1 = ((max_x - 0.5).floor().min((buffer.width - 1) as f64)).max(0.0) as usize;
    let y0 = (min_y - 0.5).ceil().max(0.0) as usize;
    let y1 = ((max_y - 0.5).floor().min((buffer.height - 1) as f64)).max(0.0) as usize;
    if min_x > buffer.width as f64 || max_x < 0.0 || min_y > buffer.height as f64 || max_y < 0.0 {
        return;
    }

    let inv_z = [
        1.0 / v[0].position.z,
        1.0 / v[1].position.z,
        1.0 / v[2].position.z,
    ];
    let edges = [(1usize, 2usize), (2, 0), (0, 1)];
    let accept_zero: Vec<bool> = edges
        .iter()
        .map(|&(a, b)| is_top_left(&screen[a], &screen[b]))
        .collect();

    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = Vector2::new(x as f64 + 0.5, y as f64 + 0.5);
            let mut w = [0.0f64; 3];
            let mut inside = true;
            for (ei, &(a, b)) in edges.iter().enumerate() {
                let value = edge(&screen[a], &screen[b], &p);
                if value < 0.0 || (value == 0.0 && !accept_zero[ei]) {
                    inside = false;
                    break;
                }
                w[ei] = value;
            }
            if !inside {
                continue;
            }
            let l0 = w[0] / area2;
            let l1 = w[1] / area2;
            let l2 = w[2] / area2;
            let denom = l0 * inv_z[0] + l1 * inv_z[1] + l2 * inv_z[2];
            if denom <= 0.0 {
                continue;
            }
            let depth = 1.0 / denom;
            let idx = buffer.idx(x, y);
            if buffer.depth[idx] > 0.0 && buffer.depth[idx] <= depth {
                continue;
            }
            // Perspective-correct normal interpolation, renormalized.
            let mut n = (v[0].normal * (l0 * inv_z[0])
                + v[1].normal * (l1 * inv_z[1])
                + v[2].normal * (l2 * inv_z[2]))
                / denom;
            let len = n.norm();
            if len < 1e-12 {
                n = Vector3::new(0.0, 0.0, -1.0);
            } else {
                n /= len;
            }
            // Orient toward the camera (backfaces are kept).
            let view = Vector3::new(
                (p.x - k.cx) / k.fx,
                (p.y - k.cy) / k.fy,
                1.0,
            );
            if n.dot(&view) > 0.0 {
                n = -n;
            }
            buffer.depth[idx] = depth;
            buffer.normal[idx] = n;
            buffer.instance[idx] = id;
        }
    }
}
