//! File formats: ASCII OBJ meshes, 16-bit PGM depth maps and PPM images.

mod obj;
mod pgm;

pub use obj::{load_obj, save_obj};
pub use pgm::{load_depth_pgm, save_depth_pgm, save_heatmap_ppm, save_normals_ppm, save_rgb_ppm};
