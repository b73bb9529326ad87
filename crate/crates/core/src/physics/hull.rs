use std::collections::HashSet;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::TriangleMesh;

/// Convex hull as an outward-oriented triangle soup over its own vertices.
#[derive(Debug, Clone)]
pub struct ConvexHull {
    pub vertices: Vec<Vector3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

/// Rigid collision geometry: convex hull, uniform-density mass properties
/// (center of mass, inertia per unit mass about it) and the hull's face
/// planes `(outward unit normal, offset)` in body frame.
#[derive(Debug, Clone)]
pub struct CollisionShape {
    pub hull: ConvexHull,
    pub volume: f64,
    pub com: Vector3<f64>,
    pub unit_inertia: Matrix3<f64>,
    pub planes: Vec<(Vector3<f64>, f64)>,
}

impl CollisionShape {
    /// Signed distance from a body-frame point to the hull surface along the
    /// least-separating face: negative inside. Also returns that face index.
    pub fn face_distance(&self, p: &Vector3<f64>) -> (f64, usize) {
        let mut best = f64::NEG_INFINITY;
        let mut face = 0;
        for (i, (n, d)) in self.planes.iter().enumerate() {
            let s = n.dot(p) - d;
            if s > best {
                best = s;
                face = i;
            }
        }
        (best, face)
    }
}

/// Builds the collision shape of a mesh: convex hull of its vertices, with
/// center of mass and inertia from the hull volume integrals at uniform
/// density. Flat or otherwise degenerate meshes are rejected.
pub fn make_collision_shape(mesh: &TriangleMesh) -> Result<CollisionShape> {
    let hull = convex_hull(&mesh.vertices)?;
    let (volume, com, unit_inertia) = mass_properties(&hull)?;
    let planes = hull
        .triangles
        .iter()
        .map(|tri| {
            let [a, b, c] = tri.map(|i| hull.vertices[i as usize]);
            let n = (b - a).cross(&(c - a)).normalize();
            (n, n.dot(&a))
        })
        .collect();
    Ok(CollisionShape {
        hull,
        volume,
        com,
        unit_inertia,
        planes,
    })
}

/// Quickhull over a point set. Fails for fewer than 4 non-coplanar points.
pub fn convex_hull(points: &[Vector3<f64>]) -> Result<ConvexHull> {
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, c| m.max(c.abs()));
    let eps = 1e-12 + 1e-9 * scale;

    let (i0, i1, i2, i3) = initial_simplex(points, eps)?;

    #[derive(Debug)]
    struct Face {
        verts: [usize; 3],
        normal: Vector3<f64>,
        offset: f64,
        outside: Vec<usize>,
        alive: bool,
    }

    let interior = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;
    let make_face = |a: usize, b: usize, c: usize| -> Face {
        let mut verts = [a, b, c];
        let mut normal = (points[b] - points[a]).cross(&(points[c] - points[a]));
        normal.normalize_mut();
        let mut offset = normal.dot(&points[a]);
        if normal.dot(&interior) - offset > 0.0 {
            verts.swap(1, 2);
            normal = -normal;
            offset = -offset;
        }
        Face {
            verts,
            normal,
            offset,
            outside: Vec::new(),
            alive: true,
        }
    };

    let mut faces = vec![
        make_face(i0, i1, i2),
        make_face(i0, i1, i3),
        make_face(i0, i2, i3),
        make_face(i1, i2, i3),
    ];

    let simplex = [i0, i1, i2, i3];
    for p in 0..points.len() {
        if simplex.contains(&p) {
            continue;
        }
        for face in faces.iter_mut() {
            if face.normal.dot(&points[p]) - face.offset > eps {
                face.outside.push(p);
                break;
            }
        }
    }

    let max_rounds = 16 * points.len() + 64;
    for _ in 0..max_rounds {
        let Some(face_idx) = faces
            .iter()
            .position(|f| f.alive && !f.outside.is_empty())
        else {
            break;
        };
        // Farthest outside point of that face (lowest index wins ties).
        let apex = *faces[face_idx]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                let fa = faces[face_idx].normal.dot(&points[a]);
                let fb = faces[face_idx].normal.dot(&points[b]);
                fa.total_cmp(&fb).then(b.cmp(&a))
            })
            .expect("non-empty outside set");
        let apex_point = points[apex];

        let visible: Vec<usize> = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive && f.normal.dot(&apex_point) - f.offset > eps)
            .map(|(i, _)| i)
            .collect();

        // Horizon: directed edges of visible faces whose reverse edge is not
        // shared with another visible face.
        let mut edge_set: HashSet<(usize, usize)> = HashSet::new();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &fi in &visible {
            let v = faces[fi].verts;
            for (a, b) in [(v[0], v[1]), (v[1], v[2]), (v[2], v[0])] {
                edge_set.insert((a, b));
                edges.push((a, b));
            }
        }
        let horizon: Vec<(usize, usize)> = edges
            .iter()
            .filter(|(a, b)| !edge_set.contains(&(*b, *a)))
            .copied()
            .collect();

        let mut orphans: Vec<usize> = Vec::new();
        for &fi in &visible {
            faces[fi].alive = false;
            orphans.extend(faces[fi].outside.drain(..));
        }

        let first_new = faces.len();
        for &(a, b) in &horizon {
            faces.push(make_face(a, b, apex));
        }
        for p in orphans {
            if p == apex {
                continue;
            }
            for face in faces[first_new..].iter_mut() {
                if face.normal.dot(&points[p]) - face.offset > eps {
                    face.outside.push(p);
                    break;
                }
            }
        }
    }

    // Compact to the vertices actually used by alive faces.
    let mut remap = vec![u32::MAX; points.len()];
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for face in faces.iter().filter(|f| f.alive) {
        let mut tri = [0u32; 3];
        for (slot, &v) in face.verts.iter().enumerate() {
            if remap[v] == u32::MAX {
                remap[v] = vertices.len() as u32;
                vertices.push(points[v]);
            }
            tri[slot] = remap[v];
        }
        triangles.push(tri);
    }
    if triangles.len() < 4 {
        return Err(Error::DegenerateShape("hull collapsed".into()));
    }
    Ok(ConvexHull {
        vertices,
        triangles,
    })
}

fn initial_simplex(points: &[Vector3<f64>], eps: f64) -> Result<(usize, usize, usize, usize)> {
    if points.len() < 4 {
        return Err(Error::DegenerateShape(format!(
            "{} points (need at least 4)",
            points.len()
        )));
    }
    // Most distant pair among the axis extremes.
    let mut extremes = Vec::new();
    for axis in 0..3 {
        let min = (0..points.len())
            .min_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis]))
            .unwrap();
        let max = (0..points.len())
            .max_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis]))
            .unwrap();
        extremes.push(min);
        extremes.push(max);
    }
    let mut best = (0, 1, 0.0);
    for &a in &extremes {
        for &b in &extremes {
            let d = (points[a] - points[b]).norm_squared();
            if d > best.2 {
                best = (a, b, d);
            }
        }
    }
    let (i0, i1, d) = best;
    if d.sqrt() < eps {
        return Err(Error::DegenerateShape("all points coincident".into()));
    }
    let dir = (points[i1] - points[i0]).normalize();
    let i2 = (0..points.len())
        .max_by(|&a, &b| {
            let da = ((points[a] - points[i0]) - dir * dir.dot(&(points[a] - points[i0]))).norm();
            let db = ((points[b] - points[i0]) - dir * dir.dot(&(points[b] - points[i0]))).norm();
            da.total_cmp(&db)
        })
        .unwrap();
    let line_dist =
        ((points[i2] - points[i0]) - dir * dir.dot(&(points[i2] - points[i0]))).norm();
    if line_dist < eps {
        return Err(Error::DegenerateShape("points are collinear".into()));
    }
    let normal = (points[i1] - points[i0])
        .cross(&(points[i2] - points[i0]))
        .normalize();
    let offset = normal.dot(&points[i0]);
    let i3 = (0..points.len())
        .max_by(|&a, &b| {
            let da = (normal.dot(&points[a]) - offset).abs();
            let db = (normal.dot(&points[b]) - offset).abs();
            da.total_cmp(&db)
        })
        .unwrap();
    if (normal.dot(&points[i3]) - offset).abs() < eps {
        return Err(Error::DegenerateShape("points are coplanar".into()));
    }
    Ok((i0, i1, i2, i3))
}

/// Volume, center of mass and inertia per unit mass (about the center of
/// mass) of a closed, outward-oriented triangulated solid.
fn mass_properties(hull: &ConvexHull) -> Result<(f64, Vector3<f64>, Matrix3<f64>)> {
    // Volume integrals of 1, x, y, z, x², y², z², xy, yz, zx via the
    // divergence theorem, accumulated per face.
    fn subexpressions(w0: f64, w1: f64, w2: f64) -> (f64, f64, f64, f64, f64, f64) {
        let temp0 = w0 + w1;
        let f1 = temp0 + w2;
        let temp1 = w0 * w0;
        let temp2 = temp1 + w1 * temp0;
        let f2 = temp2 + w2 * f1;
        let f3 = w0 * temp1 + w1 * temp2 + w2 * f2;
        let g0 = f2 + w0 * (f1 + w0);
        let g1 = f2 + w1 * (f1 + w1);
        let g2 = f2 + w2 * (f1 + w2);
        (f1, f2, f3, g0, g1, g2)
    }

    let mut intg = [0.0f64; 10];
    for tri in &hull.triangles {
        let [p0, p1, p2] = tri.map(|i| hull.vertices[i as usize]);
        let (a1, b1, c1) = (p1.x - p0.x, p1.y - p0.y, p1.z - p0.z);
        let (a2, b2, c2) = (p2.x - p0.x, p2.y - p0.y, p2.z - p0.z);
        let d0 = b1 * c2 - b2 * c1;
        let d1 = a2 * c1 - a1 * c2;
        let d2 = a1 * b2 - a2 * b1;
        let (f1x, f2x, f3x, g0x, g1x, g2x) = subexpressions(p0.x, p1.x, p2.x);
        let (_f1y, f2y, f3y, g0y, g1y, g2y) = subexpressions(p0.y, p1.y, p2.y);
        let (_f1z, f2z, f3z, g0z, g1z, g2z) = subexpressions(p0.z, p1.z, p2.z);
        intg[0] += d0 * f1x;
        intg[1] += d0 * f2x;
        intg[2] += d1 * f2y;
        intg[3] += d2 * f2z;
        intg[4] += d0 * f3x;
        intg[5] += d1 * f3y;
        intg[6] += d2 * f3z;
        intg[7] += d0 * (p0.y * g0x + p1.y * g1x + p2.y * g2x);
        intg[8] += d1 * (p0.z * g0y + p1.z * g1y + p2.z * g2y);
        intg[9] += d2 * (p0.x * g0z + p1.x * g1z + p2.x * g2z);
    }
    let mult = [
        1.0 / 6.0,
        1.0 / 24.0,
        1.0 / 24.0,
        1.0 / 24.0,
        1.0 / 60.0,
        1.0 / 60.0,
        1.0 / 60.0,
        1.0 / 120.0,
        1.0 / 120.0,
        1.0 / 120.0,
    ];
    for (v, m) in intg.iter_mut().zip(mult) {
        *v *= m;
    }

    let volume = intg[0];
    if volume < 1e-9 {
        return Err(Error::DegenerateShape(format!(
            "hull volume {volume:.3e} m^3 is not positive"
        )));
    }
    let com = Vector3::new(intg[1], intg[2], intg[3]) / volume;
    // Inertia about the center of mass, density 1.
    let mut ixx = intg[5] + intg[6] - volume * (com.y * com.y + com.z * com.z);
    let mut iyy = intg[4] + intg[6] - volume * (com.z * com.z + com.x * com.x);
    let mut izz = intg[4] + intg[5] - volume * (com.x * com.x + com.y * com.y);
    let mut ixy = -(intg[7] - volume * com.x * com.y);
    let mut iyz = -(intg[8] - volume * com.y * com.z);
    let mut ixz = -(intg[9] - volume * com.z * com.x);
    // Per unit mass.
    ixx /= volume;
    iyy /= volume;
    izz /= volume;
    ixy /= volume;
    iyz /= volume;
    ixz /= volume;
    let unit_inertia = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);
    Ok((volume, com, unit_inertia))
}
