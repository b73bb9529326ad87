//! CPU rasterizer producing per-pixel depth, normal and instance-id buffers.

mod buffer;
mod raster;
mod reduce;

pub use buffer::{RenderBuffer, BACKGROUND};
pub use raster::{render, Instance};
pub use reduce::{reduce_sums, ScoreGrid};
