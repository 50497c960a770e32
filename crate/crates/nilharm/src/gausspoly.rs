//! Polynomials times Gaussians: `p(z) exp(-z^T S z)`.
//!
//! The class is closed under differential operators with polynomial
//! coefficients, and its integrals are exact — full-space ones by the
//! Wick/Stein moment recursion, partial ones (needed by the central Radon
//! map) whenever the integrated block decouples in the exponent.  That
//! makes these functions the reference family for checking the numerical
//! transforms.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::diffop::DiffOp;
use crate::poly::{Coeff, Exponents, Poly};
use crate::rat::GaussRat;
use crate::space::{Space, MAX_VARS};

#[derive(Debug, Error, PartialEq)]
pub enum GaussError {
    #[error("quadratic form must be {expected}x{expected}, got {got} rows")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadratic form must be symmetric")]
    NotSymmetric,
    #[error("quadratic form must be positive definite on the integrated variables")]
    NotPositive,
    #[error("integrated variables couple to retained ones in the exponent")]
    Coupled,
    #[error("variable map must send the retained variables onto the target space")]
    BadMap,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussPoly {
    prefactor: Poly<Complex64>,
    quad: DMatrix<f64>,
}

impl GaussPoly {
    pub fn new(prefactor: Poly<Complex64>, quad: DMatrix<f64>) -> Result<Self, GaussError> {
        let dim = prefactor.space().dim();
        if quad.nrows() != dim || quad.ncols() != dim {
            return Err(GaussError::DimensionMismatch { expected: dim, got: quad.nrows() });
        }
        if (&quad - quad.transpose()).amax() > 1e-12 {
            return Err(GaussError::NotSymmetric);
        }
        // Store the exactly symmetric part so later algebra can rely on it.
        let sym = 0.5 * (&quad + quad.transpose());
        Ok(GaussPoly { prefactor, quad: sym })
    }

    /// `exp(-a |z|^2)` with unit prefactor.
    pub fn isotropic(space: Space, a: f64) -> Self {
        GaussPoly {
            prefactor: Poly::one(space),
            quad: DMatrix::identity(space.dim(), space.dim()) * a,
        }
    }

    pub fn space(&self) -> Space {
        self.prefactor.space()
    }

    pub fn prefactor(&self) -> &Poly<Complex64> {
        &self.prefactor
    }

    pub fn quad(&self) -> &DMatrix<f64> {
        &self.quad
    }

    pub fn eval(&self, z: &[f64]) -> Complex64 {
        let dim = self.space().dim();
        let mut q = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                q += z[i] * self.quad[(i, j)] * z[j];
            }
        }
        self.prefactor.eval(z) * (-q).exp()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        GaussPoly { prefactor: self.prefactor.scale(&c), quad: self.quad.clone() }
    }

    pub fn mul_poly(&self, p: &Poly<Complex64>) -> Self {
        GaussPoly { prefactor: &self.prefactor * p, quad: self.quad.clone() }
    }

    pub fn add(&self, other: &GaussPoly) -> Result<Self, GaussError> {
        if (&self.quad - &other.quad).amax() > 0.0 {
            // Sums across different exponents leave the class.
            return Err(GaussError::NotSymmetric);
        }
        Ok(GaussPoly {
            prefactor: &self.prefactor + &other.prefactor,
            quad: self.quad.clone(),
        })
    }

    /// Smallest eigenvalue of the exponent matrix — the slowest decay
    /// rate, which determines safe truncation radii.
    pub fn min_decay(&self) -> f64 {
        self.quad
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }

    /// Derivative in variable `i`:
    /// `d_i (p e^{-Q}) = (d_i p - p d_i Q) e^{-Q}`.
    fn derivative(&self, i: usize) -> Self {
        let space = self.space();
        let dim = space.dim();
        let mut dq = Poly::zero(space);
        for j in 0..dim {
            let s = self.quad[(i, j)];
            if s != 0.0 {
                let term = Poly::var(space, j)
                    .expect("index within dimension")
                    .scale(&Complex64::new(2.0 * s, 0.0));
                dq = &dq + &term;
            }
        }
        let dp = self.prefactor.diff(i).expect("index within dimension");
        GaussPoly {
            prefactor: &dp - &(&self.prefactor * &dq),
            quad: self.quad.clone(),
        }
    }

    /// Applies a polynomial-coefficient operator exactly; the result
    /// shares this function's exponent.
    pub fn apply_op(&self, op: &DiffOp<GaussRat>) -> Self {
        let space = self.space();
        let mut total = Poly::zero(space);
        for (alpha, coeff) in op.terms() {
            let mut g = self.clone();
            for (i, &k) in alpha.iter().enumerate() {
                for _ in 0..k {
                    g = g.derivative(i);
                }
            }
            let num = coeff.map_coeffs(|c| c.to_c64());
            total = &total + &(&g.prefactor * &num);
        }
        GaussPoly { prefactor: total, quad: self.quad.clone() }
    }

    /// Exact integral over the whole space.
    pub fn integral(&self) -> Result<Complex64, GaussError> {
        let dim = self.space().dim();
        let chol =
            nalgebra::Cholesky::new(self.quad.clone()).ok_or(GaussError::NotPositive)?;
        let det: f64 = (0..dim).map(|i| chol.l()[(i, i)]).product::<f64>().powi(2);
        let sigma = nalgebra::Cholesky::new(2.0 * &self.quad)
            .ok_or(GaussError::NotPositive)?
            .inverse();
        let norm = std::f64::consts::PI.powf(dim as f64 / 2.0) / det.sqrt();
        let mut memo = HashMap::new();
        let mut total = Complex64::new(0.0, 0.0);
        for (e, c) in self.prefactor.terms() {
            let alpha: Vec<u8> = e[..dim].to_vec();
            total += c * wick(&sigma, &alpha, &mut memo);
        }
        Ok(norm * total)
    }

    /// Integrates out the variables in `kill`, remapping the survivors to
    /// `target` through `map` (old index -> new index).  The exponent must
    /// not couple killed and kept variables.
    pub fn integrate_out(
        &self,
        kill: &[usize],
        target: Space,
        map: &[Option<usize>],
    ) -> Result<GaussPoly, GaussError> {
        let dim = self.space().dim();
        if map.len() != dim {
            return Err(GaussError::BadMap);
        }
        let kept: Vec<usize> = (0..dim).filter(|i| !kill.contains(i)).collect();
        let mut seen = vec![false; target.dim()];
        for &i in &kept {
            match map[i] {
                Some(j) if j < target.dim() && !seen[j] => seen[j] = true,
                _ => return Err(GaussError::BadMap),
            }
        }
        if kill.iter().any(|&i| map[i].is_some()) || !seen.iter().all(|&s| s) {
            return Err(GaussError::BadMap);
        }
        for &i in kill {
            for &j in &kept {
                if self.quad[(i, j)].abs() > 1e-14 {
                    return Err(GaussError::Coupled);
                }
            }
        }

        let dk = kill.len();
        let block = DMatrix::from_fn(dk, dk, |a, b| self.quad[(kill[a], kill[b])]);
        let chol = nalgebra::Cholesky::new(block.clone()).ok_or(GaussError::NotPositive)?;
        let det: f64 = (0..dk).map(|i| chol.l()[(i, i)]).product::<f64>().powi(2);
        let sigma = nalgebra::Cholesky::new(2.0 * &block)
            .ok_or(GaussError::NotPositive)?
            .inverse();
        let norm = std::f64::consts::PI.powf(dk as f64 / 2.0) / det.sqrt();

        let mut memo = HashMap::new();
        let mut terms: Vec<(Exponents, Complex64)> = Vec::new();
        for (e, c) in self.prefactor.terms() {
            let beta: Vec<u8> = kill.iter().map(|&i| e[i]).collect();
            let moment = wick(&sigma, &beta, &mut memo);
            if moment == 0.0 {
                continue;
            }
            let mut ne = [0u8; MAX_VARS];
            for &i in &kept {
                ne[map[i].expect("validated above")] = e[i];
            }
            terms.push((ne, c * moment * norm));
        }
        let mut quad = DMatrix::zeros(target.dim(), target.dim());
        for &i in &kept {
            for &j in &kept {
                quad[(map[i].unwrap(), map[j].unwrap())] = self.quad[(i, j)];
            }
        }
        Ok(GaussPoly { prefactor: Poly::from_terms(target, terms), quad })
    }
}

/// Centered Gaussian moment `E[z^alpha]` for covariance `sigma`, by the
/// Stein identity `E[z_i f] = sum_j sigma_ij E[d_j f]`.
fn wick(sigma: &DMatrix<f64>, alpha: &[u8], memo: &mut HashMap<Vec<u8>, f64>) -> f64 {
    let Some(i) = alpha.iter().position(|&k| k > 0) else {
        return 1.0;
    };
    if let Some(&v) = memo.get(alpha) {
        return v;
    }
    let mut gamma = alpha.to_vec();
    gamma[i] -= 1;
    let mut total = 0.0;
    for j in 0..gamma.len() {
        if gamma[j] > 0 {
            let mut next = gamma.clone();
            next[j] -= 1;
            total += sigma[(i, j)] * gamma[j] as f64 * wick(sigma, &next, memo);
        }
    }
    memo.insert(alpha.to_vec(), total);
    total
}

/// Unit-mass Gaussian `pi^-3 exp(-|x|^2 - |y|^2)` on `N`.
pub fn schwartz_n() -> GaussPoly {
    GaussPoly::isotropic(Space::N, 1.0)
        .scale(Complex64::new(std::f64::consts::PI.powi(-3), 0.0))
}

/// Unit-mass Gaussian `pi^-2 exp(-|x|^2 - t^2)` on `N'` — the exact image
/// of [`schwartz_n`] under integrating out the first two central
/// variables.
pub fn schwartz_n_prime() -> GaussPoly {
    GaussPoly::isotropic(Space::NPrime, 1.0)
        .scale(Complex64::new(std::f64::consts::PI.powi(-2), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    fn var(space: Space, i: usize) -> Poly<Complex64> {
        Poly::var(space, i).unwrap()
    }

    #[test]
    fn isotropic_moments_match_closed_forms() {
        let g = GaussPoly::isotropic(Space::N, 1.0);
        assert_abs_diff_eq!(g.integral().unwrap().re, PI.powi(3), epsilon = 1e-12);

        let x2 = g.mul_poly(&var(Space::N, 0).pow(2));
        assert_abs_diff_eq!(x2.integral().unwrap().re, PI.powi(3) / 2.0, epsilon = 1e-12);

        let x4 = g.mul_poly(&var(Space::N, 0).pow(4));
        assert_abs_diff_eq!(
            x4.integral().unwrap().re,
            3.0 * PI.powi(3) / 4.0,
            epsilon = 1e-12
        );

        let odd = g.mul_poly(&var(Space::N, 2));
        assert_abs_diff_eq!(odd.integral().unwrap().re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn correlated_moment_matches_hand_computation() {
        // exp(-(x1^2 + x2^2 + x1 x2 / 2) - x3^2 - t^2) on the quotient:
        // covariance of the coupled block is (2S)^-1, so E[x1 x2] = -2/15.
        let mut quad = DMatrix::identity(4, 4);
        quad[(0, 1)] = 0.25;
        quad[(1, 0)] = 0.25;
        let g = GaussPoly::new(
            &var(Space::NPrime, 0) * &var(Space::NPrime, 1),
            quad,
        )
        .unwrap();
        let expected = PI * PI * (16.0 / 15.0f64).sqrt() * (-2.0 / 15.0);
        assert_abs_diff_eq!(g.integral().unwrap().re, expected, epsilon = 1e-12);
    }

    #[test]
    fn integral_agrees_with_brute_quadrature() {
        let mut quad = DMatrix::identity(4, 4);
        quad[(0, 1)] = 0.25;
        quad[(1, 0)] = 0.25;
        let g = GaussPoly::new(
            &var(Space::NPrime, 0).pow(2) * &var(Space::NPrime, 1).pow(2),
            quad,
        )
        .unwrap();
        // Quadrature over the coupled plane, exact pi per decoupled axis.
        let (xs, ws) = crate::quad::gl_on(-7.0, 7.0, 80);
        let mut plane = 0.0;
        for (a, wa) in xs.iter().zip(&ws) {
            for (b, wb) in xs.iter().zip(&ws) {
                plane += wa
                    * wb
                    * a.powi(2)
                    * b.powi(2)
                    * (-(a * a + b * b + 0.5 * a * b)).exp();
            }
        }
        assert_abs_diff_eq!(
            g.integral().unwrap().re,
            plane * PI,
            epsilon = 1e-10
        );
    }

    #[test]
    fn partial_integration_collapses_the_central_plane() {
        let g = GaussPoly::isotropic(Space::N, 1.0)
            .mul_poly(&(&var(Space::N, 0).pow(2) * &var(Space::N, 3).pow(2)));
        let map = [Some(0), Some(1), Some(2), None, None, Some(3)];
        let reduced = g.integrate_out(&[3, 4], Space::NPrime, &map).unwrap();
        // int y1^2 e^{-y1^2 - y2^2} = pi/2, so the image is
        // (pi/2) x1^2 exp(-|x|^2 - t^2) with t the old y3.
        let z = [0.4, -0.3, 0.2, 0.5];
        let expected = PI / 2.0
            * z[0]
            * z[0]
            * (-(z[0] * z[0] + z[1] * z[1] + z[2] * z[2] + z[3] * z[3])).exp();
        assert_abs_diff_eq!(reduced.eval(&z).re, expected, epsilon = 1e-14);
    }

    #[test]
    fn coupled_exponent_is_rejected() {
        let mut quad = DMatrix::identity(6, 6);
        quad[(0, 3)] = 0.1;
        quad[(3, 0)] = 0.1;
        let g = GaussPoly::new(Poly::one(Space::N), quad).unwrap();
        let map = [Some(0), Some(1), Some(2), None, None, Some(3)];
        assert_eq!(
            g.integrate_out(&[3, 4], Space::NPrime, &map).unwrap_err(),
            GaussError::Coupled
        );
    }

    #[test]
    fn schwartz_functions_have_unit_mass() {
        assert_abs_diff_eq!(schwartz_n().integral().unwrap().re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(
            schwartz_n_prime().integral().unwrap().re,
            1.0,
            epsilon = 1e-13
        );
        let map = [Some(0), Some(1), Some(2), None, None, Some(3)];
        let reduced = schwartz_n().integrate_out(&[3, 4], Space::NPrime, &map).unwrap();
        assert_eq!(reduced.quad(), schwartz_n_prime().quad());
        let z = [0.3, -0.2, 0.5, 0.4];
        assert_abs_diff_eq!(
            reduced.eval(&z).re,
            schwartz_n_prime().eval(&z).re,
            epsilon = 1e-15
        );
    }

    #[test]
    fn sublaplacian_of_a_first_layer_gaussian() {
        // On a function of x alone, every central derivative in L dies and
        // L e^{-|x|^2} = (6 - 4|x|^2) e^{-|x|^2} at every point of N.
        let quad = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[
            1.0, 1.0, 1.0, 0.0, 0.0, 0.0,
        ]));
        let g = GaussPoly::new(Poly::one(Space::N), quad).unwrap();
        let lg = g.apply_op(&diffop::sublaplacian(Space::N));
        let z = [0.3, -0.1, 0.4, 0.2, -0.6, 0.5];
        let xx: f64 = z[..3].iter().map(|v| v * v).sum();
        assert_abs_diff_eq!(
            lg.eval(&z).re,
            (6.0 - 4.0 * xx) * (-xx).exp(),
            epsilon = 1e-13
        );
        // The full Gaussian picks up central contributions; check those
        // against finite differences instead of a closed form.
        let g = GaussPoly::isotropic(Space::N, 1.0);
        let lg = g.apply_op(&diffop::sublaplacian(Space::N));
        let f = |w: &[f64]| g.eval(w);
        let ap = crate::numdiff::OpApplier::new(&f, &z, crate::numdiff::DEFAULT_STEP);
        let (num, err) = ap.apply(&diffop::sublaplacian(Space::N));
        assert!((lg.eval(&z) - num).norm() <= 1e-7 + 10.0 * err);
    }

    #[test]
    fn operator_application_commutes_with_numeric_checks_on_quotient() {
        let g = GaussPoly::isotropic(Space::NPrime, 0.8);
        let op = diffop::invariant_ops(Space::NPrime).remove(0);
        let lg = g.apply_op(&op);
        let z = [0.5, 0.2, -0.3, 0.7];
        let f = |w: &[f64]| g.eval(w);
        let ap = crate::numdiff::OpApplier::new(&f, &z, crate::numdiff::DEFAULT_STEP);
        let (num, err) = ap.apply(&op);
        assert!((lg.eval(&z) - num).norm() <= 1e-7 + 10.0 * err);
    }
}
