//! Simplified rigid-body settling: one free body dropped/relaxed under
//! gravity against a supporting plane and fixed environment bodies.

mod hull;
mod solver;

pub use hull::{convex_hull, make_collision_shape, CollisionShape, ConvexHull};
pub use solver::{
    rotation_only_update, settle, settle_trace, SettleOutcome, SettleStep, SimEnv, SimParams,
    GRAVITY,
};
