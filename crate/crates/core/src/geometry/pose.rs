use nalgebra::{Matrix3, Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

/// Maximum orthonormality defect accepted by [`Pose::new`].
pub const ROTATION_TOLERANCE: f64 = 1e-6;

/// Orthonormality drift beyond which composition re-orthonormalizes.
const DRIFT_TOLERANCE: f64 = 1e-9;

/// A rigid transform: `x ↦ R x + t` with `R` a proper rotation.
///
/// Translations are in meters. The rotation is kept orthonormal with
/// determinant +1; composition re-orthonormalizes when accumulated drift
/// exceeds `1e-9`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    rotation: Matrix3<f64>,
    translation: Vector3<f64>,
}

impl Pose {
    /// Builds a pose from a rotation matrix and translation vector.
    ///
    /// Panics if `rotation` is not orthonormal with determinant +1 within
    /// [`ROTATION_TOLERANCE`].
    pub fn new(rotation: Matrix3<f64>, translation: Vector3<f64>) -> Self {
        assert!(
            rotation_defect(&rotation) <= ROTATION_TOLERANCE,
            "rotation is not orthonormal with det +1 (defect {:.3e})",
            rotation_defect(&rotation)
        );
        Self {
            rotation,
            translation,
        }
    }

    pub fn identity() -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_axis_angle(axis: Unit<Vector3<f64>>, angle_rad: f64) -> Self {
        Self {
            rotation: *Rotation3::from_axis_angle(&axis, angle_rad).matrix(),
            translation: Vector3::zeros(),
        }
    }

    pub fn from_translation(translation: Vector3<f64>) -> Self {
        Self {
            rotation: Matrix3::identity(),
            translation,
        }
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// Replaces the translation, keeping the rotation.
    pub fn with_translation(&self, translation: Vector3<f64>) -> Self {
        Self {
            rotation: self.rotation,
            translation,
        }
    }

    /// Replaces the rotation, keeping the translation.
    pub fn with_rotation(&self, rotation: Matrix3<f64>) -> Self {
        Self::new(rotation, self.translation)
    }

    /// Composition: the result applies `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        let mut rotation = self.rotation * other.rotation;
        if rotation_defect(&rotation) > DRIFT_TOLERANCE {
            rotation = orthonormalize(&rotation);
        }
        Pose {
            rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let rt = self.rotation.transpose();
        Pose {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn transform_point(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * p + self.translation
    }

    pub fn transform_vector(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.rotation * v
    }

    /// Geodesic rotation distance to `other`, in radians.
    pub fn geodesic_angle(&self, other: &Pose) -> f64 {
        rotation_geodesic(&self.rotation, &other.rotation)
    }

    /// Geodesic rotation distance to `other`, in degrees.
    pub fn geodesic_angle_deg(&self, other: &Pose) -> f64 {
        self.geodesic_angle(other).to_degrees()
    }

    pub fn translation_distance(&self, other: &Pose) -> f64 {
        (self.translation - other.translation).norm()
    }
}

/// Angle of the relative rotation between two rotation matrices, in radians.
pub fn rotation_geodesic(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let rel = a.transpose() * b;
    let cos = ((rel.trace() - 1.0) / 2.0).clamp(-1.0, 1.0);
    cos.acos()
}

/// Max-norm defect of `R Rᵀ - I` plus the determinant error.
fn rotation_defect(r: &Matrix3<f64>) -> f64 {
    let gram = r * r.transpose() - Matrix3::identity();
    let ortho = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ortho.max((r.determinant() - 1.0).abs())
}

/// Nearest proper rotation in the Frobenius sense (polar decomposition).
pub fn orthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    let mut fixed = u * v_t;
    if fixed.determinant() < 0.0 {
        let mut u = u;
        u.column_mut(2).scale_mut(-1.0);
        fixed = u * v_t;
    }
    fixed
}
