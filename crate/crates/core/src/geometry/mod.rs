//! Rigid-body math, meshes, point clouds, camera projection and the
//! perturbation samplers used by the experiment protocols.

mod camera;
mod cloud;
mod depth_ops;
mod image;
mod mesh;
mod perturb;
mod plane;
mod pose;

pub use camera::CameraIntrinsics;
pub use cloud::PointCloud;
pub use depth_ops::{backproject, estimate_normals, DISCONTINUITY_THRESHOLD};
pub use image::{DepthImage, NormalMap, PixelMask};
pub use mesh::TriangleMesh;
pub use perturb::{perturb_rotation, perturb_translation, uniform_unit_vector};
pub use plane::{fit_support_plane, FittedPlane, Plane, RANSAC_TRIALS};
pub use pose::Pose;
