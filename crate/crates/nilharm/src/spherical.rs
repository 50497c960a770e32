//! The bounded spherical functions of the two Gelfand pairs, their closed
//! forms, and the eigenvalues they take under the invariant operators.
//!
//! On `N` the generic (regular) functions are sphere averages
//!
//! ```text
//! phi_{lambda,l,r}(x, y) =
//!     avg_{u in S^2} e^{-i(lambda y.u + r x.u)}
//!     Lscaled_l(lambda (|x|^2 - (x.u)^2) / 2)
//! ```
//!
//! with `lambda > 0`, degenerating to `sinc(R |x|)` when the central
//! frequency vanishes.  On the quotient `N'` both families have closed
//! forms built from the scaled Laguerre functions and `J0`.

use num_complex::Complex64;
use thiserror::Error;

use crate::group::{GroupPoint, GroupPointPrime};
use crate::quad::SphereRule;
use crate::specfun::{bessel_j0, laguerre_scaled, sinc};

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("lambda must be positive and finite, got {0}")]
    BadLambda(f64),
    #[error("{name} must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("{name} must be nonnegative, got {value}")]
    Negative { name: &'static str, value: f64 },
}

fn check_finite(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ParamError::NotFinite { name, value })
    }
}

fn check_nonneg(name: &'static str, value: f64) -> Result<f64, ParamError> {
    if check_finite(name, value)? < 0.0 {
        Err(ParamError::Negative { name, value })
    } else {
        Ok(value)
    }
}

/// Parameters of a generic spherical function on `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regular {
    pub lambda: f64,
    pub l: usize,
    pub r: f64,
}

impl Regular {
    pub fn new(lambda: f64, l: usize, r: f64) -> Result<Self, ParamError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(ParamError::BadLambda(lambda));
        }
        check_finite("r", r)?;
        Ok(Regular { lambda, l, r })
    }

    /// Eigenvalues under `(L, Delta, D)`.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let Regular { lambda, l, r } = *self;
        [
            lambda * (2 * l + 1) as f64 + r * r,
            lambda * lambda,
            lambda * r,
        ]
    }
}

/// Parameters of a degenerate spherical function on `N`, supported on the
/// vanishing central frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singular {
    pub radius: f64,
}

impl Singular {
    pub fn new(radius: f64) -> Result<Self, ParamError> {
        check_nonneg("radius", radius)?;
        Ok(Singular { radius })
    }

    pub fn eigenvalues(&self) -> [f64; 3] {
        [self.radius * self.radius, 0.0, 0.0]
    }
}

/// Parameters of a generic spherical function on `N'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularPrime {
    pub lambda: f64,
    pub l: usize,
    pub r: f64,
}

impl RegularPrime {
    pub fn new(lambda: f64, l: usize, r: f64) -> Result<Self, ParamError> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(ParamError::BadLambda(lambda));
        }
        check_finite("r", r)?;
        Ok(RegularPrime { lambda, l, r })
    }

    /// Eigenvalues under `(L', Delta', D', -X3'^2)`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let RegularPrime { lambda, l, r } = *self;
        [
            lambda * (2 * l + 1) as f64 + r * r,
            lambda * lambda,
            lambda * r,
            r * r,
        ]
    }
}

/// Parameters of a degenerate spherical function on `N'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPrime {
    pub zeta: f64,
    pub r: f64,
}

impl SingularPrime {
    pub fn new(zeta: f64, r: f64) -> Result<Self, ParamError> {
        check_nonneg("zeta", zeta)?;
        check_finite("r", r)?;
        Ok(SingularPrime { zeta, r })
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let SingularPrime { zeta, r } = *self;
        [zeta * zeta + r * r, 0.0, 0.0, r * r]
    }
}

/// Generic spherical function on `N`, averaged with the given sphere rule.
///
/// The value is real (the `u -> -u` symmetry conjugates the integrand);
/// the imaginary part that survives measures quadrature noise.
pub fn phi(p: &Regular, g: &GroupPoint, rule: &SphereRule) -> Complex64 {
    let Regular { lambda, l, r } = *p;
    let x = g.x;
    let y = g.y;
    let xx = x.norm_squared();
    rule.average(|u| {
        let xu = x[0] * u[0] + x[1] * u[1] + x[2] * u[2];
        let yu = y[0] * u[0] + y[1] * u[1] + y[2] * u[2];
        let lag = laguerre_scaled(l, lambda * (xx - xu * xu) / 2.0);
        let phase = -(lambda * yu + r * xu);
        Complex64::new(phase.cos() * lag, phase.sin() * lag)
    })
}

/// Degenerate spherical function on `N`: `sinc(R |x|)`, blind to the
/// central variable.
pub fn phi_singular(p: &Singular, g: &GroupPoint) -> f64 {
    sinc(p.radius * g.x.norm())
}

/// Generic spherical function on `N'`:
/// `cos(lambda t + r x3) Lscaled_l(lambda (x1^2 + x2^2) / 2)`.
pub fn phi_prime(p: &RegularPrime, g: &GroupPointPrime) -> f64 {
    let RegularPrime { lambda, l, r } = *p;
    let rho2 = g.x[0] * g.x[0] + g.x[1] * g.x[1];
    (lambda * g.t + r * g.x[2]).cos() * laguerre_scaled(l, lambda * rho2 / 2.0)
}

/// Degenerate spherical function on `N'`:
/// `J0(zeta sqrt(x1^2 + x2^2)) cos(r x3)`.
pub fn phi_prime_singular(p: &SingularPrime, g: &GroupPointPrime) -> f64 {
    let rho = (g.x[0] * g.x[0] + g.x[1] * g.x[1]).sqrt();
    bessel_j0(p.zeta * rho) * (p.r * g.x[2]).cos()
}

/// Any spherical function of either pair, for callers that dispatch on
/// user input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphericalFunction {
    Regular(Regular),
    Singular(Singular),
    RegularPrime(RegularPrime),
    SingularPrime(SingularPrime),
}

impl SphericalFunction {
    pub fn space(&self) -> crate::space::Space {
        match self {
            SphericalFunction::Regular(_) | SphericalFunction::Singular(_) => {
                crate::space::Space::N
            }
            _ => crate::space::Space::NPrime,
        }
    }

    /// Eigenvalues under the invariant operators of the function's pair:
    /// three entries on `N`, four on `N'`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self {
            SphericalFunction::Regular(p) => p.eigenvalues().to_vec(),
            SphericalFunction::Singular(p) => p.eigenvalues().to_vec(),
            SphericalFunction::RegularPrime(p) => p.eigenvalues().to_vec(),
            SphericalFunction::SingularPrime(p) => p.eigenvalues().to_vec(),
        }
    }

    /// Evaluates at a coordinate tuple of the matching dimension.
    pub fn eval(&self, coords: &[f64], rule: &SphereRule) -> Complex64 {
        match self {
            SphericalFunction::Regular(p) => {
                phi(p, &GroupPoint::from_coords(coords), rule)
            }
            SphericalFunction::Singular(p) => {
                Complex64::new(phi_singular(p, &GroupPoint::from_coords(coords)), 0.0)
            }
            SphericalFunction::RegularPrime(p) => {
                Complex64::new(phi_prime(p, &GroupPointPrime::from_coords(coords)), 0.0)
            }
            SphericalFunction::SingularPrime(p) => Complex64::new(
                phi_prime_singular(p, &GroupPointPrime::from_coords(coords)),
                0.0,
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{self, so3_rule, sphere_rule};
    use approx::assert_abs_diff_eq;

    fn g6(z: [f64; 6]) -> GroupPoint {
        GroupPoint::from_coords(&z)
    }

    #[test]
    fn parameter_validation() {
        assert!(Regular::new(0.0, 1, 0.5).is_err());
        assert!(Regular::new(-1.0, 1, 0.5).is_err());
        assert!(Regular::new(1.0, 1, f64::NAN).is_err());
        assert!(Singular::new(-0.1).is_err());
        assert!(SingularPrime::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn normalised_at_the_identity() {
        let rule = sphere_rule(32);
        let e = GroupPoint::identity();
        for (lambda, l, r) in [(0.7, 0usize, 0.0), (1.3, 2, 0.8), (2.0, 5, -1.1)] {
            let p = Regular::new(lambda, l, r).unwrap();
            let v = phi(&p, &e, &rule);
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-13);
        }
        assert_eq!(phi_singular(&Singular::new(2.0).unwrap(), &e), 1.0);
        let ep = GroupPointPrime::identity();
        assert_eq!(phi_prime(&RegularPrime::new(0.9, 3, 0.4).unwrap(), &ep), 1.0);
        assert_eq!(phi_prime_singular(&SingularPrime::new(1.7, 0.3).unwrap(), &ep), 1.0);
    }

    #[test]
    fn values_are_real_and_symmetric_under_inversion() {
        let rule = sphere_rule(48);
        let p = Regular::new(1.1, 2, 0.6).unwrap();
        let g = g6([0.5, -0.3, 0.8, 0.4, 0.2, -0.7]);
        let v = phi(&p, &g, &rule);
        let w = phi(&p, &g.inverse(), &rule);
        assert!(v.im.abs() < 1e-13, "imaginary leak {}", v.im);
        assert_abs_diff_eq!(v.re, w.re, epsilon = 1e-12);
    }

    #[test]
    fn rotation_invariance_within_quadrature_error() {
        let rule = sphere_rule(48);
        let p = Regular::new(0.8, 1, 0.9).unwrap();
        let g = g6([0.6, 0.1, -0.4, 0.3, -0.5, 0.2]);
        let k = crate::group::Rotation::about_axis(0, 0.83)
            .compose(&crate::group::Rotation::about_axis(2, -1.31));
        let v = phi(&p, &g, &rule);
        let w = phi(&p, &k.act(&g), &rule);
        assert_abs_diff_eq!(v.re, w.re, epsilon = 1e-10);
    }

    /// With the polar axis along `x`, the sphere average collapses to one
    /// dimension:
    /// `1/2 int_{-1}^{1} cos((lambda y.xhat + r|x|) s)
    ///      J0(lambda |y_perp| sqrt(1-s^2))
    ///      Lscaled_l(lambda |x|^2 (1-s^2)/2) ds`.
    fn phi_collapsed(p: &Regular, g: &GroupPoint) -> f64 {
        let x = g.x;
        let y = g.y;
        let nx = x.norm();
        assert!(nx > 0.0);
        let xhat = x / nx;
        let y_par = y.dot(&xhat);
        let y_perp = (y - y_par * xhat).norm();
        let (ss, ws) = quad::gl_on(-1.0, 1.0, 160);
        0.5 * ss
            .iter()
            .zip(&ws)
            .map(|(&s, w)| {
                let c = 1.0 - s * s;
                w * ((p.lambda * y_par + p.r * nx) * s).cos()
                    * bessel_j0(p.lambda * y_perp * c.sqrt())
                    * laguerre_scaled(p.l, p.lambda * nx * nx * c / 2.0)
            })
            .sum::<f64>()
    }

    #[test]
    fn sphere_average_matches_collapsed_form() {
        let rule = sphere_rule(64);
        for (lambda, l, r, z) in [
            (0.9, 0usize, 0.0, [0.8, 0.0, 0.0, 0.0, 0.7, 0.1]),
            (1.4, 2, 0.7, [0.5, -0.6, 0.3, 0.9, 0.2, -0.4]),
            (2.2, 4, -1.0, [0.3, 0.2, -0.8, -0.1, 0.6, 0.5]),
        ] {
            let p = Regular::new(lambda, l, r).unwrap();
            let g = g6(z);
            let direct = phi(&p, &g, &rule);
            let collapsed = phi_collapsed(&p, &g);
            assert_abs_diff_eq!(direct.re, collapsed, epsilon = 1e-11);
        }
    }

    #[test]
    fn vanishing_first_layer_reduces_to_sinc_in_y() {
        let rule = sphere_rule(48);
        let p = Regular::new(1.5, 3, 0.8).unwrap();
        let g = g6([0.0, 0.0, 0.0, 0.4, -0.2, 0.6]);
        let v = phi(&p, &g, &rule);
        assert_abs_diff_eq!(v.re, sinc(1.5 * g.y.norm()), epsilon = 1e-12);
    }

    #[test]
    fn degenerate_family_is_a_continuous_limit() {
        // lambda -> 0 of the generic quotient function recovers the
        // zeta = 0 degenerate one.
        let g = GroupPointPrime::new([0.7, -0.4, 0.9], 0.6).unwrap();
        let reg = RegularPrime::new(1e-9, 4, 0.8).unwrap();
        let sing = SingularPrime::new(0.0, 0.8).unwrap();
        assert_abs_diff_eq!(
            phi_prime(&reg, &g),
            phi_prime_singular(&sing, &g),
            epsilon = 1e-7
        );
    }

    #[test]
    fn singular_product_formula_closes_under_group_averaging() {
        // avg_K phi(g (k.h)) = phi(g) phi(h) — checked for the sinc family
        // where each side is cheap and exact.
        let p = Singular::new(1.3).unwrap();
        let g = g6([0.7, -0.2, 0.4, 0.1, 0.0, -0.3]);
        let h = g6([-0.3, 0.5, 0.1, 0.2, -0.1, 0.4]);
        let rule = so3_rule(16);
        let lhs = rule.average(|k| {
            Complex64::new(phi_singular(&p, &g.multiply(&k.act(&h))), 0.0)
        });
        let rhs = phi_singular(&p, &g) * phi_singular(&p, &h);
        assert_abs_diff_eq!(lhs.re, rhs, epsilon = 1e-10);
    }

    #[test]
    fn quotient_product_formula_closes_under_group_averaging() {
        // Same identity on N', where the acting group is the stabiliser
        // of e3: rotations about the third axis together with the flip.
        let p = RegularPrime::new(0.9, 2, 0.7).unwrap();
        let g = GroupPointPrime::new([0.6, -0.1, 0.5], 0.2).unwrap();
        let h = GroupPointPrime::new([-0.2, 0.4, 0.3], -0.4).unwrap();
        let m = 64;
        let mut acc = 0.0;
        for j in 0..m {
            let a = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
            let (s, c) = a.sin_cos();
            // Rotate (x1, x2), keep x3 and t...
            let rx1 = h.x[0] * c - h.x[1] * s;
            let rx2 = h.x[0] * s + h.x[1] * c;
            for flip in [1.0f64, -1.0] {
                // ...then optionally apply diag(1, -1, -1), which fixes the
                // quotient kernel and sends (x2, x3, t) to minus itself.
                let hk = GroupPointPrime::new(
                    [rx1, flip * rx2, flip * h.x[2]],
                    flip * h.t,
                )
                .unwrap();
                acc += phi_prime(&p, &g.multiply(&hk));
            }
        }
        let lhs = acc / (2 * m) as f64;
        let rhs = phi_prime(&p, &g) * phi_prime(&p, &h);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
    }
}
