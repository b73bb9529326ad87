//! 16-bit PGM depth maps (value = millimeters, 0 = invalid) and PPM dumps
//! for normals and score heatmaps.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{DepthImage, NormalMap};

/// Writes depth as big-endian 16-bit PGM, millimeters, 0 = invalid.
pub fn save_depth_pgm(path: &Path, depth: &DepthImage) -> Result<()> {
    let mut buf = Vec::with_capacity(32 + depth.data.len() * 2);
    buf.extend_from_slice(format!("P5\n{} {}\n65535\n", depth.width, depth.height).as_bytes());
    for &d in &depth.data {
        let mm = if d > 0.0 && d.is_finite() {
            (d * 1000.0).round().clamp(0.0, 65535.0) as u16
        } else {
            0
        };
        buf.extend_from_slice(&mm.to_be_bytes());
    }
    fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

pub fn load_depth_pgm(path: &Path) -> Result<DepthImage> {
    let bytes = fs::read(path)?;
    parse_depth_pgm(&bytes).map_err(|msg| Error::Parse {
        path: path.display().to_string(),
        msg,
    })
}

fn parse_depth_pgm(bytes: &[u8]) -> std::result::Result<DepthImage, String> {
    let mut pos = 0usize;
    let mut tokens = Vec::new();
    // Header: magic, width, height, maxval; '#' starts a comment.
    while tokens.len() < 4 && pos < bytes.len() {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos > start {
            tokens.push(
                std::str::from_utf8(&bytes[start..pos])
                    .map_err(|e| e.to_string())?
                    .to_string(),
            );
        }
    }
    if tokens.len() < 4 || tokens[0] != "P5" {
        return Err("not a binary PGM (P5) file".into());
    }
    let width: usize = tokens[1].parse().map_err(|_| "bad width")?;
    let height: usize = tokens[2].parse().map_err(|_| "bad height")?;
    let maxval: usize = tokens[3].parse().map_err(|_| "bad maxval")?;
    if maxval != 65535 {
        return Err(format!("expected 16-bit PGM (maxval 65535), got {maxval}"));
    }
    pos += 1; // single whitespace after maxval
    let needed = width * height * 2;
    if bytes.len() < pos + needed {
        return Err("truncated pixel data".into());
    }
    let mut depth = DepthImage::new(width, height);
    for i in 0..width * height {
        let hi = bytes[pos + 2 * i] as u16;
        let lo = bytes[pos + 2 * i + 1] as u16;
        let mm = (hi << 8) | lo;
        depth.data[i] = mm as f64 / 1000.0;
    }
    Ok(depth)
}

/// Writes an 8-bit binary PPM from interleaved RGB bytes.
pub fn save_rgb_ppm(path: &Path, width: usize, height: usize, rgb: &[u8]) -> Result<()> {
    assert_eq!(rgb.len(), width * height * 3);
    let mut buf = Vec::with_capacity(32 + rgb.len());
    buf.extend_from_slice(format!("P6\n{width} {height}\n255\n").as_bytes());
    buf.extend_from_slice(rgb);
    fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

/// Normals mapped to RGB (`[-1,1] → [0,255]`); invalid pixels are black.
pub fn save_normals_ppm(path: &Path, map: &NormalMap) -> Result<()> {
    let mut rgb = vec![0u8; map.width * map.height * 3];
    for i in 0..map.width * map.height {
        if map.valid[i] {
            let n = map.normals[i];
            for c in 0..3 {
                rgb[3 * i + c] = ((n[c] * 0.5 + 0.5) * 255.0).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    save_rgb_ppm(path, map.width, map.height, &rgb)
}

/// Score heatmap: invalid pixels gray, scores ramp blue (0) to red (1).
pub fn save_heatmap_ppm(path: &Path, width: usize, height: usize, values: &[Option<f64>]) -> Result<()> {
    assert_eq!(values.len(), width * height);
    let mut rgb = vec![0u8; width * height * 3];
    for (i, v) in values.iter().enumerate() {
        let (r, g, b) = match v {
            None => (60, 60, 60),
            Some(s) => {
                let s = s.clamp(0.0, 1.0);
                (
                    (s * 255.0).round() as u8,
                    ((1.0 - (2.0 * s - 1.0).abs()) * 200.0).round() as u8,
                    ((1.0 - s) * 255.0).round() as u8,
                )
            }
        };
        rgb[3 * i] = r;
        rgb[3 * i + 1] = g;
        rgb[3 * i + 2] = b;
    }
    save_rgb_ppm(path, width, height, &rgb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_pgm_roundtrip_millimeters() {
        let mut depth = DepthImage::new(3, 2);
        depth.data = vec![0.0, 0.5, 1.2345, 0.001, 65.535, f64::NAN];
        let dir = std::env::temp_dir().join("posefit_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("depth.pgm");
        save_depth_pgm(&path, &depth).unwrap();
        let loaded = load_depth_pgm(&path).unwrap();
        assert_eq!(loaded.width, 3);
        assert_eq!(loaded.height, 2);
        assert_eq!(loaded.data[0], 0.0);
        assert!((loaded.data[1] - 0.5).abs() < 1e-9);
        // Quantized to millimeters (1234.5 rounds to 1235).
        assert!((loaded.data[2] - 1.235).abs() < 1e-9);
        assert_eq!(loaded.data[5], 0.0);
    }
}
