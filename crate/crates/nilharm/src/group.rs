//! Group arithmetic for `N` and its quotient `N'`, plus the orthogonal action.
//!
//! Both groups are written in exponential coordinates, where `exp` is the
//! identity map and inversion is negation: the product saturates the
//! Baker-Campbell-Hausdorff series because the Lie algebra is two-step.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroupError {
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("matrix is not orthogonal (|m^T m - I| = {defect:e} exceeds {tol:e})")]
    NotOrthogonal { defect: f64, tol: f64 },
}

/// Point of `N`: first layer `x`, central layer `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPoint {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
}

/// Point of the quotient `N'`: first layer `x`, single central coordinate `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupPointPrime {
    pub x: Vector3<f64>,
    pub t: f64,
}

impl GroupPoint {
    pub fn new(x: [f64; 3], y: [f64; 3]) -> Result<Self, GroupError> {
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(GroupError::NonFinite);
        }
        Ok(GroupPoint { x: Vector3::from(x), y: Vector3::from(y) })
    }

    pub fn identity() -> Self {
        GroupPoint { x: Vector3::zeros(), y: Vector3::zeros() }
    }

    /// `(x, y) * (x', y') = (x + x', y + y' + (x ^ x')/2)`.
    pub fn multiply(&self, other: &GroupPoint) -> GroupPoint {
        GroupPoint {
            x: self.x + other.x,
            y: self.y + other.y + 0.5 * self.x.cross(&other.x),
        }
    }

    /// Two-step nilpotency makes the inverse plain negation.
    pub fn inverse(&self) -> GroupPoint {
        GroupPoint { x: -self.x, y: -self.y }
    }

    pub fn coords(&self) -> [f64; 6] {
        [self.x[0], self.x[1], self.x[2], self.y[0], self.y[1], self.y[2]]
    }

    pub fn from_coords(z: &[f64]) -> Self {
        assert_eq!(z.len(), 6);
        GroupPoint {
            x: Vector3::new(z[0], z[1], z[2]),
            y: Vector3::new(z[3], z[4], z[5]),
        }
    }
}

impl GroupPointPrime {
    pub fn new(x: [f64; 3], t: f64) -> Result<Self, GroupError> {
        if x.iter().any(|v| !v.is_finite()) || !t.is_finite() {
            return Err(GroupError::NonFinite);
        }
        Ok(GroupPointPrime { x: Vector3::from(x), t })
    }

    pub fn identity() -> Self {
        GroupPointPrime { x: Vector3::zeros(), t: 0.0 }
    }

    /// `(x, t) * (x', t') = (x + x', t + t' + [x ^ x']_3 / 2)`.
    pub fn multiply(&self, other: &GroupPointPrime) -> GroupPointPrime {
        GroupPointPrime {
            x: self.x + other.x,
            t: self.t + other.t + 0.5 * (self.x[0] * other.x[1] - self.x[1] * other.x[0]),
        }
    }

    pub fn inverse(&self) -> GroupPointPrime {
        GroupPointPrime { x: -self.x, t: -self.t }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x[0], self.x[1], self.x[2], self.t]
    }

    pub fn from_coords(z: &[f64]) -> Self {
        assert_eq!(z.len(), 4);
        GroupPointPrime { x: Vector3::new(z[0], z[1], z[2]), t: z[3] }
    }
}

/// Tolerance for accepting a matrix as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Element of `O(3)` acting on `N` by `k.(x, y) = (kx, det(k) ky)`.
///
/// The action is a group automorphism for either sign of the determinant;
/// `SO(3)` additionally fixes the invariant `x . y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    m: Matrix3<f64>,
    det: f64,
}

impl Rotation {
    pub fn new(m: Matrix3<f64>) -> Result<Self, GroupError> {
        if m.iter().any(|v| !v.is_finite()) {
            return Err(GroupError::NonFinite);
        }
        let defect = (m.transpose() * m - Matrix3::identity()).norm();
        if defect > ORTHOGONALITY_TOL {
            return Err(GroupError::NotOrthogonal { defect, tol: ORTHOGONALITY_TOL });
        }
        // Orthogonality pins det to +-1 up to roundoff; store the sign.
        let det = if m.determinant() > 0.0 { 1.0 } else { -1.0 };
        Ok(Rotation { m, det })
    }

    pub fn identity() -> Self {
        Rotation { m: Matrix3::identity(), det: 1.0 }
    }

    /// Rotation by `angle` about coordinate axis `axis` (0, 1, or 2).
    pub fn about_axis(axis: usize, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let m = match axis {
            0 => Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
            1 => Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c),
            2 => Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0),
            _ => panic!("axis out of range"),
        };
        Rotation { m, det: 1.0 }
    }

    /// The reflection `diag(1, 1, -1)`, an orientation-reversing element.
    pub fn flip_z() -> Self {
        Rotation { m: Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)), det: -1.0 }
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation { m: self.m * other.m, det: self.det * other.det }
    }

    pub fn transpose(&self) -> Rotation {
        Rotation { m: self.m.transpose(), det: self.det }
    }

    pub fn act(&self, g: &GroupPoint) -> GroupPoint {
        GroupPoint { x: self.m * g.x, y: self.det * (self.m * g.y) }
    }

    pub fn act_vec(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.m * v
    }
}
