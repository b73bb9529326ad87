//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid point cloud: {0}")]
    InvalidCloud(String),

    #[error("no supporting plane found (best inlier ratio {ratio:.3}, required {required:.3})")]
    NoSupportPlane { ratio: f64, required: f64 },

    #[error("degenerate correspondence set: {0}")]
    DegenerateCorrespondences(String),

    #[error("degenerate collision shape: {0}")]
    DegenerateShape(String),

    #[error("reward {0} outside [0, 1]")]
    RewardOutOfRange(f64),

    #[error("bandit has no arms")]
    NoArms,

    #[error("scene layout infeasible after {0} attempts")]
    LayoutInfeasible(usize),

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error in {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
