//! Depth-based verification and refinement of 6-DoF object pose hypotheses.
//!
//! The library combines three ingredients into a single refinement loop:
//!
//! 1. a CPU rasterizer ([`render`]) that turns a pose hypothesis into per-pixel
//!    depth/normal/instance buffers,
//! 2. a verification score ([`verify`]) measuring how well those buffers agree
//!    with a segmented RGB-D observation, and
//! 3. rigid-body settling ([`physics`]) against a supporting plane and already
//!    placed objects.
//!
//! On top of these, [`pipeline`] implements the refinement strategies for
//! single objects (physics-guided, supervised and bandit-allocated variants)
//! and for multi-object scenes (dependency-ordered breadth/depth search), and
//! [`harness`] provides synthetic scenes, corruption protocols, pose-error
//! metrics and the experiment runner behind the `posefit` CLI.

pub mod bandit;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod physics;
pub mod pipeline;
pub mod refine;
pub mod render;
pub mod spatial;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::Pose;
