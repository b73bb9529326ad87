//! ASCII OBJ subset: `v`, `vn` and triangular `f` records.
//!
//! Faces may index as `f v`, `f v//vn` or `f v/vt/vn` (texture indices are
//! ignored). Indices are 1-based; negative (relative) indices are supported.
//! When no normals are present, per-vertex normals are computed from the
//! faces.

use std::fs;
use std::io::Write;
use std::path::Path;

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::TriangleMesh;

pub fn load_obj(path: &Path) -> Result<TriangleMesh> {
    let text = fs::read_to_string(path)?;
    parse_obj(&text).map_err(|msg| Error::Parse {
        path: path.display().to_string(),
        msg,
    })
}

fn parse_obj(text: &str) -> std::result::Result<TriangleMesh, String> {
    let mut positions: Vec<Vector3<f64>> = Vec::new();
    let mut normals_in: Vec<Vector3<f64>> = Vec::new();
    // One output vertex per unique (position, normal) pair.
    let mut vertex_map: std::collections::HashMap<(u32, i64), u32> = std::collections::HashMap::new();
    let mut vertices: Vec<Vector3<f64>> = Vec::new();
    let mut out_normals: Vec<Vector3<f64>> = Vec::new();
    let mut triangles: Vec<[u32; 3]> = Vec::new();
    let mut has_normals = false;

    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let tag = parts.next().unwrap();
        let fields: Vec<&str> = parts.collect();
        let ctx = |msg: &str| format!("line {}: {}", lineno + 1, msg);
        match tag {
            "v" => {
                if fields.len() < 3 {
                    return Err(ctx("vertex needs 3 coordinates"));
                }
                let coords: std::result::Result<Vec<f64>, _> =
                    fields[..3].iter().map(|f| f.parse::<f64>()).collect();
                let coords = coords.map_err(|e| ctx(&e.to_string()))?;
                positions.push(Vector3::new(coords[0], coords[1], coords[2]));
            }
            "vn" => {
                if fields.len() < 3 {
                    return Err(ctx("normal needs 3 coordinates"));
                }
                let coords: std::result::Result<Vec<f64>, _> =
                    fields[..3].iter().map(|f| f.parse::<f64>()).collect();
                let coords = coords.map_err(|e| ctx(&e.to_string()))?;
                let n = Vector3::new(coords[0], coords[1], coords[2]);
                let len = n.norm();
                if len < 1e-12 {
                    return Err(ctx("zero-length normal"));
                }
                normals_in.push(n / len);
            }
            "f" => {
                if fields.len() != 3 {
                    return Err(ctx("only triangular faces are supported"));
                }
                let mut tri = [0u32; 3];
                for (slot, field) in fields.iter().enumerate() {
                    let mut it = field.split('/');
                    let v_str = it.next().unwrap_or("");
                    let _vt = it.next();
                    let vn_str = it.next().unwrap_or("");
                    let vi = resolve_index(v_str, positions.len())
                        .ok_or_else(|| ctx(&format!("bad vertex index '{field}'")))?;
                    let ni: i64 = if vn_str.is_empty() {
                        -1
                    } else {
                        has_normals = true;
                        resolve_index(vn_str, normals_in.len())
                            .ok_or_else(|| ctx(&format!("bad normal index '{field}'")))?
                            as i64
                    };
                    let key = (vi as u32, ni);
                    let out_idx = *vertex_map.entry(key).or_insert_with(|| {
                        vertices.push(positions[vi]);
                        out_normals.push(if ni >= 0 {
                            normals_in[ni as usize]
                        } else {
                            Vector3::z()
                        });
                        (vertices.len() - 1) as u32
                    });
                    tri[slot] = out_idx;
                }
                triangles.push(tri);
            }
            // vt, o, g, s, usemtl, mtllib are irrelevant to the geometry.
            _ => {}
        }
    }

    if has_normals {
        TriangleMesh::new(vertices, triangles, out_normals).map_err(|e| e.to_string())
    } else {
        TriangleMesh::with_computed_normals(vertices, triangles).map_err(|e| e.to_string())
    }
}

fn resolve_index(s: &str, len: usize) -> Option<usize> {
    let raw: i64 = s.parse().ok()?;
    let idx = if raw > 0 {
        raw - 1
    } else if raw < 0 {
        len as i64 + raw
    } else {
        return None;
    };
    if idx >= 0 && (idx as usize) < len {
        Some(idx as usize)
    } else {
        None
    }
}

pub fn save_obj(path: &Path, mesh: &TriangleMesh) -> Result<()> {
    let mut out = String::new();
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    for n in &mesh.normals {
        out.push_str(&format!("vn {} {} {}\n", n.x, n.y, n.z));
    }
    for t in &mesh.triangles {
        out.push_str(&format!(
            "f {0}//{0} {1}//{1} {2}//{2}\n",
            t[0] + 1,
            t[1] + 1,
            t[2] + 1
        ));
    }
    let mut file = fs::File::create(path)?;
    file.write_all(out.as_bytes())?;
    Ok(())
}
