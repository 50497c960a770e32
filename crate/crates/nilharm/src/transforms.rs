//! The spherical (Gelfand) transforms of both pairs and the central Radon
//! transform connecting them.
//!
//! All integrals exploit invariance: a rotation-invariant function on `N`
//! is determined by `(|x|, |y|, x.y)`, so the six-dimensional integral
//! collapses to three radial-type axes with the measure factor
//! `8 pi^2 s^2 sigma^2 ds dsigma dc`, and the sphere average inside the
//! generic spherical function collapses to its polar cosine with the
//! azimuth integrated exactly into `J0`.  On the quotient the invariant
//! coordinates are `(rho, x3, t)` with measure `2 pi rho`.

use num_complex::Complex64;
use thiserror::Error;

use crate::gausspoly::{GaussError, GaussPoly};
use crate::group::{GroupPoint, GroupPointPrime};
use crate::poly::{Exponents, Poly};
use crate::quad::{self, Compensated};
use crate::rat::GaussRat;
use crate::space::{Space, MAX_VARS};
use crate::specfun::{bessel_j0, laguerre_scaled, sinc};
use crate::spherical::{Regular, RegularPrime, Singular, SingularPrime};

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("operator does not descend: {0}")]
    NotProjectable(&'static str),
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

/// Orders and truncation radius for the transform quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GelfandSettings {
    /// Nodes on each radial axis.
    pub radial_order: usize,
    /// Nodes on the inner-product cosine axis.
    pub angular_order: usize,
    /// Polar nodes inside the generic spherical function.
    pub sphere_order: usize,
    /// Radial cutoff; integrands must be negligible beyond it.
    pub truncation: f64,
}

impl Default for GelfandSettings {
    fn default() -> Self {
        GelfandSettings {
            radial_order: quad::DEFAULT_RADIAL_ORDER,
            angular_order: quad::DEFAULT_ANGULAR_ORDER,
            sphere_order: quad::DEFAULT_SPHERE_ORDER,
            truncation: quad::truncation_radius(1.0),
        }
    }
}

impl GelfandSettings {
    /// Same truncation with every order halved (but kept sensible); the
    /// difference against the full evaluation estimates quadrature error.
    pub fn halved(&self) -> Self {
        GelfandSettings {
            radial_order: (self.radial_order / 2).max(8),
            angular_order: (self.angular_order / 2).max(8),
            sphere_order: (self.sphere_order / 2).max(8),
            truncation: self.truncation,
        }
    }
}

/// Representative point of the invariant class `(s, sigma, c)` on `N`.
fn rep_point(s: f64, sigma: f64, c: f64) -> GroupPoint {
    GroupPoint {
        x: nalgebra::Vector3::new(s, 0.0, 0.0),
        y: nalgebra::Vector3::new(sigma * c, sigma * (1.0 - c * c).max(0.0).sqrt(), 0.0),
    }
}

/// Spherical transform on `N` at a generic parameter: integrates
/// `F phi_{lambda,l,r}` with the reduced kernel
///
/// ```text
/// phi(s, sigma, c) = 1/2 int_{-1}^1 cos((r s + lambda sigma c) t)
///     J0(lambda sigma sqrt(1-c^2) sqrt(1-t^2))
///     Lscaled_l(lambda s^2 (1-t^2)/2) dt .
/// ```
pub fn gelfand_n(
    f: &dyn Fn(&GroupPoint) -> f64,
    p: &Regular,
    st: &GelfandSettings,
) -> f64 {
    let Regular { lambda, l, r } = *p;
    let (ss, ws) = quad::gl_on(0.0, st.truncation, st.radial_order);
    let (qs, wq) = quad::gl_on(0.0, st.truncation, st.radial_order);
    let (cs, wc) = quad::gl_on(-1.0, 1.0, st.angular_order);
    let (ts, wt) = quad::gl_on(-1.0, 1.0, st.sphere_order);
    let nt = ts.len();

    // Tables over the inner polar node: the Laguerre factor only sees
    // (s, t) and the Bessel factor only (sigma, c, t).
    let lag: Vec<Vec<f64>> = ss
        .iter()
        .map(|&s| {
            ts.iter()
                .map(|&t| laguerre_scaled(l, lambda * s * s * (1.0 - t * t) / 2.0))
                .collect()
        })
        .collect();
    let bes: Vec<Vec<f64>> = qs
        .iter()
        .flat_map(|&sigma| {
            cs.iter().map(move |&c| {
                let a = lambda * sigma * (1.0 - c * c).max(0.0).sqrt();
                ts.iter()
                    .map(|&t| bessel_j0(a * (1.0 - t * t).max(0.0).sqrt()))
                    .collect::<Vec<f64>>()
            })
        })
        .collect();

    let jac = 8.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut contributions = Vec::with_capacity(ss.len() * qs.len() * cs.len());
    for (i, (&s, wsi)) in ss.iter().zip(&ws).enumerate() {
        for (j, (&sigma, wqj)) in qs.iter().zip(&wq).enumerate() {
            for (k, (&c, wck)) in cs.iter().zip(&wc).enumerate() {
                let fv = f(&rep_point(s, sigma, c));
                if fv == 0.0 {
                    contributions.push(0.0);
                    continue;
                }
                let freq = r * s + lambda * sigma * c;
                let row = &bes[j * cs.len() + k];
                let mut kernel = 0.0;
                for m in 0..nt {
                    kernel += wt[m] * lag[i][m] * row[m] * (freq * ts[m]).cos();
                }
                kernel *= 0.5;
                contributions.push(wsi * wqj * wck * jac * s * s * sigma * sigma * fv * kernel);
            }
        }
    }
    quad::sum_ordered(&contributions)
}

/// Spherical transform on `N` against the degenerate family
/// `sinc(R |x|)`; no inner average is needed.
pub fn gelfand_n_singular(
    f: &dyn Fn(&GroupPoint) -> f64,
    p: &Singular,
    st: &GelfandSettings,
) -> f64 {
    let (ss, ws) = quad::gl_on(0.0, st.truncation, st.radial_order);
    let (qs, wq) = quad::gl_on(0.0, st.truncation, st.radial_order);
    let (cs, wc) = quad::gl_on(-1.0, 1.0, st.angular_order);
    let jac = 8.0 * std::f64::consts::PI * std::f64::consts::PI;
    let mut contributions = Vec::with_capacity(ss.len() * qs.len() * cs.len());
    for (&s, wsi) in ss.iter().zip(&ws) {
        let kernel = sinc(p.radius * s);
        for (&sigma, wqj) in qs.iter().zip(&wq) {
            for (&c, wck) in cs.iter().zip(&wc) {
                let fv = f(&rep_point(s, sigma, c));
                contributions
                    .push(wsi * wqj * wck * jac * s * s * sigma * sigma * fv * kernel);
            }
        }
    }
    quad::sum_ordered(&contributions)
}

/// Spherical transform on the quotient at a generic parameter.
pub fn gelfand_prime(
    f: &dyn Fn(&GroupPointPrime) -> f64,
    p: &RegularPrime,
    st: &GelfandSettings,
) -> f64 {
    let RegularPrime { lambda, l, r } = *p;
    gelfand_prime_kernel(f, st, |rho, x3, t| {
        (lambda * t + r * x3).cos() * laguerre_scaled(l, lambda * rho * rho / 2.0)
    })
}

/// Spherical transform on the quotient against the degenerate family.
pub fn gelfand_prime_singular(
    f: &dyn Fn(&GroupPointPrime) -> f64,
    p: &SingularPrime,
    st: &GelfandSettings,
) -> f64 {
    let SingularPrime { zeta, r } = *p;
    gelfand_prime_kernel(f, st, |rho, x3, _t| {
        bessel_j0(zeta * rho) * (r * x3).cos()
    })
}

fn gelfand_prime_kernel(
    f: &dyn Fn(&GroupPointPrime) -> f64,
    st: &GelfandSettings,
    kernel: impl Fn(f64, f64, f64) -> f64,
) -> f64 {
    let (rs, wr) = quad::gl_on(0.0, st.truncation, st.radial_order);
    let (xs, wx) = quad::gl_on(-st.truncation, st.truncation, st.radial_order);
    let (ts, wt) = quad::gl_on(-st.truncation, st.truncation, st.radial_order);
    let jac = 2.0 * std::f64::consts::PI;
    let mut contributions = Vec::with_capacity(rs.len() * xs.len() * ts.len());
    for (&rho, wa) in rs.iter().zip(&wr) {
        for (&x3, wb) in xs.iter().zip(&wx) {
            for (&t, wd) in ts.iter().zip(&wt) {
                let g = GroupPointPrime {
                    x: nalgebra::Vector3::new(rho, 0.0, x3),
                    t,
                };
                contributions.push(wa * wb * wd * jac * rho * f(&g) * kernel(rho, x3, t));
            }
        }
    }
    quad::sum_ordered(&contributions)
}

/// Runs a transform at full and halved orders; the difference is an
/// a-posteriori error estimate.
pub fn refined(
    eval: impl Fn(&GelfandSettings) -> f64,
    st: &GelfandSettings,
) -> (f64, f64) {
    let full = eval(st);
    let coarse = eval(&st.halved());
    (full, (full - coarse).abs())
}

/// Central Radon transform by quadrature: integrates the first two
/// central variables at fixed `(x, t)`.
pub fn radon_quad(
    f: &dyn Fn(&GroupPoint) -> f64,
    g: &GroupPointPrime,
    order: usize,
    radius: f64,
) -> f64 {
    let (ys, wy) = quad::gl_on(-radius, radius, order);
    let mut contributions = Vec::with_capacity(ys.len() * ys.len());
    for (&y1, w1) in ys.iter().zip(&wy) {
        for (&y2, w2) in ys.iter().zip(&wy) {
            let p = GroupPoint {
                x: g.x,
                y: nalgebra::Vector3::new(y1, y2, g.t),
            };
            contributions.push(w1 * w2 * f(&p));
        }
    }
    quad::sum_ordered(&contributions)
}

/// Variable map realising the quotient `N -> N'`: the first layer passes
/// through and the surviving central coordinate becomes `t`.
const RADON_KILL: [usize; 2] = [3, 4];
const RADON_MAP: [Option<usize>; 6] =
    [Some(0), Some(1), Some(2), None, None, Some(3)];

/// Exact Radon transform of a Gaussian-polynomial function.  Fails if the
/// exponent couples the integrated plane to the surviving variables.
pub fn radon_exact(g: &GaussPoly) -> Result<GaussPoly, TransformError> {
    if g.space() != Space::N {
        return Err(TransformError::NotProjectable("input must live on N"));
    }
    Ok(g.integrate_out(&RADON_KILL, Space::NPrime, &RADON_MAP)?)
}

fn remap_exponents(e: &Exponents) -> Exponents {
    let mut out = [0u8; MAX_VARS];
    out[0] = e[0];
    out[1] = e[1];
    out[2] = e[2];
    out[3] = e[5];
    out
}

/// Pushes an operator on `N` down to the quotient: derivative terms along
/// the integrated plane integrate to zero, the surviving central
/// direction is renamed to `t`.  Coefficients may involve `x` and the
/// surviving direction, but not the integrated ones.
pub fn radon_op(op: &crate::diffop::DiffOp<GaussRat>) -> Result<crate::diffop::DiffOp<GaussRat>, TransformError> {
    if op.space() != Space::N {
        return Err(TransformError::NotProjectable("operator must live on N"));
    }
    let mut terms: Vec<(Exponents, Poly<GaussRat>)> = Vec::new();
    for (alpha, coeff) in op.terms() {
        if alpha[3] > 0 || alpha[4] > 0 {
            continue;
        }
        let mut new_coeff = Poly::zero(Space::NPrime);
        for (e, c) in coeff.terms() {
            if e[3] > 0 || e[4] > 0 {
                return Err(TransformError::NotProjectable(
                    "coefficient depends on an integrated central variable",
                ));
            }
            new_coeff = &new_coeff
                + &Poly::from_terms(Space::NPrime, [(remap_exponents(e), c.clone())]);
        }
        terms.push((remap_exponents(alpha), new_coeff));
    }
    Ok(crate::diffop::DiffOp::from_terms(Space::NPrime, terms))
}

/// Configuration of the moment-polynomiality test for functions on the
/// quotient.
#[derive(Debug, Clone)]
pub struct MomentSettings {
    /// Sphere radii `|x| = R` on which the fits run.
    pub shells: Vec<f64>,
    /// Fractions of each radius used as `x3` sample points.
    pub stations: Vec<f64>,
    /// Order of the Gauss rule for the `t` integrals.
    pub t_order: usize,
    /// Half-width of the `t` integrals.
    pub t_radius: f64,
}

impl Default for MomentSettings {
    fn default() -> Self {
        MomentSettings {
            shells: vec![0.5, 1.0, 1.5],
            stations: vec![-0.9, -0.6, -0.3, 0.0, 0.3, 0.6, 0.9],
            t_order: quad::DEFAULT_RADIAL_ORDER,
            t_radius: quad::truncation_radius(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFit {
    pub degree: usize,
    pub shell: f64,
    /// Max deviation of the fitted polynomial, relative to the moment's
    /// own scale.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct MomentReport {
    pub fits: Vec<MomentFit>,
    pub worst_residual: f64,
}

/// Tests the range law of the central Radon transform: for a function in
/// the image, the `j`-th `t`-moment restricted to the sphere `|x| = R`
/// must be a polynomial of degree at most `j` in `x3`.
///
/// The moments are sampled at `x = (sqrt(R^2 - x3^2), 0, x3)`, which
/// covers all classes of invariant points on the shell, and fitted by
/// least squares; the reported residual is the worst relative misfit.
pub fn moment_check(
    f: &dyn Fn(&GroupPointPrime) -> f64,
    max_degree: usize,
    st: &MomentSettings,
) -> MomentReport {
    let (ts, wt) = quad::gl_on(-st.t_radius, st.t_radius, st.t_order);
    let mut fits = Vec::new();
    for &shell in &st.shells {
        // Moments m_j at each station on the shell.
        let stations: Vec<f64> = st.stations.iter().map(|v| v * shell).collect();
        let mut moments = vec![Vec::with_capacity(stations.len()); max_degree + 1];
        for &x3 in &stations {
            let horizontal = (shell * shell - x3 * x3).max(0.0).sqrt();
            let g0 = nalgebra::Vector3::new(horizontal, 0.0, x3);
            for j in 0..=max_degree {
                let mut acc = Compensated::new();
                for (&t, w) in ts.iter().zip(&wt) {
                    let g = GroupPointPrime { x: g0, t };
                    acc.add(w * t.powi(j as i32) * f(&g));
                }
                moments[j].push(acc.value());
            }
        }
        for (j, vals) in moments.iter().enumerate() {
            fits.push(MomentFit {
                degree: j,
                shell,
                residual: poly_fit_residual(&stations, vals, j),
            });
        }
    }
    let worst = fits.iter().map(|f| f.residual).fold(0.0, f64::max);
    MomentReport { fits, worst_residual: worst }
}

/// Least-squares degree-`deg` fit residual, relative to the data scale.
fn poly_fit_residual(xs: &[f64], ys: &[f64], deg: usize) -> f64 {
    let rows = xs.len();
    let cols = deg + 1;
    let a = nalgebra::DMatrix::from_fn(rows, cols, |i, j| xs[i].powi(j as i32));
    let b = nalgebra::DVector::from_column_slice(ys);
    let svd = nalgebra::SVD::new(a.clone(), true, true);
    let coef = svd.solve(&b, 1e-13).expect("least squares is well posed");
    let fit = a * coef;
    let scale = ys.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    (0..rows).map(|i| (fit[i] - b[i]).abs()).fold(0.0, f64::max) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop;
    use crate::gausspoly::{schwartz_n, schwartz_n_prime};
    use approx::assert_abs_diff_eq;

    /// Closed form of the generic transform of the unit-mass Gaussian,
    /// from the Laplace transform of the Laguerre polynomials:
    /// `e^{-(lambda^2 + r^2)/4} (1 - lambda/4)^l / (1 + lambda/4)^{l+1}`.
    fn gaussian_transform(lambda: f64, l: usize, r: f64) -> f64 {
        (-(lambda * lambda + r * r) / 4.0).exp() * (1.0 - lambda / 4.0).powi(l as i32)
            / (1.0 + lambda / 4.0).powi(l as i32 + 1)
    }

    fn quick() -> GelfandSettings {
        GelfandSettings {
            radial_order: 48,
            angular_order: 24,
            sphere_order: 32,
            truncation: 7.0,
        }
    }

    #[test]
    fn transform_of_the_gaussian_matches_closed_form_on_the_singular_ray() {
        let f = schwartz_n();
        let fe = move |g: &GroupPoint| f.eval(&g.coords()).re;
        for &radius in &[0.0, 0.8, 1.6] {
            let got = gelfand_n_singular(&fe, &Singular { radius }, &quick());
            assert_abs_diff_eq!(got, (-radius * radius / 4.0).exp(), epsilon = 1e-9);
        }
    }

    #[test]
    fn transform_of_the_gaussian_matches_closed_form_at_generic_parameters() {
        let f = schwartz_n();
        let fe = move |g: &GroupPoint| f.eval(&g.coords()).re;
        for &(lambda, l, r) in &[(0.9, 0usize, 0.0), (1.4, 1, 0.7), (2.1, 3, -0.5)] {
            let got = gelfand_n(&fe, &Regular { lambda, l, r }, &quick());
            assert_abs_diff_eq!(got, gaussian_transform(lambda, l, r), epsilon = 1e-8);
        }
    }

    #[test]
    fn quotient_transform_matches_the_same_closed_forms() {
        let f = schwartz_n_prime();
        let fe = move |g: &GroupPointPrime| f.eval(&g.coords()).re;
        for &(lambda, l, r) in &[(0.9, 0usize, 0.0), (1.4, 1, 0.7)] {
            let got = gelfand_prime(&fe, &RegularPrime { lambda, l, r }, &quick());
            assert_abs_diff_eq!(got, gaussian_transform(lambda, l, r), epsilon = 1e-8);
        }
        for &(zeta, r) in &[(0.0, 0.0), (1.0, 0.6)] {
            let got = gelfand_prime_singular(&fe, &SingularPrime { zeta, r }, &quick());
            assert_abs_diff_eq!(
                got,
                (-(zeta * zeta + r * r) / 4.0).exp(),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn exact_and_quadrature_radon_agree() {
        let f = schwartz_n();
        let fe = |g: &GroupPoint| f.eval(&g.coords()).re;
        let image = radon_exact(&f).unwrap();
        for &(x, t) in &[([0.4, -0.2, 0.7], 0.3), ([0.0, 0.0, 0.0], 0.0), ([1.1, 0.2, -0.5], -0.8)] {
            let g = GroupPointPrime::new(x, t).unwrap();
            let direct = radon_quad(&fe, &g, 64, 7.0);
            assert_abs_diff_eq!(direct, image.eval(&g.coords()).re, epsilon = 1e-12);
        }
    }

    #[test]
    fn invariant_operators_descend_to_their_quotient_counterparts() {
        // The structural heart of the correspondence: pushing (L, Delta, D)
        // through the quotient yields exactly (L', Delta', D').
        let downstairs = diffop::invariant_ops(Space::NPrime);
        for (op, expected) in diffop::invariant_ops(Space::N).iter().zip(&downstairs) {
            assert_eq!(&radon_op(op).unwrap(), expected);
        }
    }

    #[test]
    fn operators_with_transverse_coefficients_do_not_descend() {
        // y1 * d_x1 has a coefficient the fibre integral cannot remove.
        let bad = diffop::DiffOp::mul_by(&Poly::var(Space::N, 3).unwrap())
            .compose(&diffop::DiffOp::partial(Space::N, 0).unwrap());
        assert!(matches!(
            radon_op(&bad),
            Err(TransformError::NotProjectable(_))
        ));
    }

    #[test]
    fn gaussian_image_passes_the_moment_test() {
        let image = radon_exact(&schwartz_n()).unwrap();
        let fe = move |g: &GroupPointPrime| image.eval(&g.coords()).re;
        let report = moment_check(&fe, 3, &MomentSettings::default());
        assert!(
            report.worst_residual < 1e-10,
            "range test failed: {}",
            report.worst_residual
        );
    }

    #[test]
    fn non_image_function_fails_the_moment_test() {
        // rho^2 x3 t e^{-|x|^2 - t^2} is invariant but its first moment is
        // cubic in x3 on every shell.
        let fe = |g: &GroupPointPrime| {
            let rho2 = g.x[0] * g.x[0] + g.x[1] * g.x[1];
            rho2 * g.x[2] * g.t * (-(g.x.norm_squared() + g.t * g.t)).exp()
        };
        let report = moment_check(&fe, 1, &MomentSettings::default());
        assert!(
            report.worst_residual > 1e-2,
            "counterexample slipped through: {}",
            report.worst_residual
        );
    }

    #[test]
    fn transform_diagonalises_the_invariant_operators() {
        // G(L F) = eta1 G(F) at a generic parameter, with L F computed
        // exactly on the Gaussian class.
        let f = schwartz_n();
        let p = Regular { lambda: 1.2, l: 1, r: 0.4 };
        let st = quick();
        let base = {
            let fe = |g: &GroupPoint| f.eval(&g.coords()).re;
            gelfand_n(&fe, &p, &st)
        };
        let eta = p.eigenvalues();
        for (op, expected) in
            diffop::invariant_ops(Space::N).iter().zip(eta.iter())
        {
            let lf = f.apply_op(op);
            let fe = move |g: &GroupPoint| lf.eval(&g.coords()).re;
            let got = gelfand_n(&fe, &p, &st);
            assert_abs_diff_eq!(got, expected * base, epsilon = 1e-7);
        }
    }

    #[test]
    fn refinement_reports_a_sane_error_estimate() {
        let f = schwartz_n();
        let p = Singular { radius: 1.0 };
        let (v, err) = refined(
            |st| {
                let fe = |g: &GroupPoint| f.eval(&g.coords()).re;
                gelfand_n_singular(&fe, &p, st)
            },
            &quick(),
        );
        assert_abs_diff_eq!(v, (-0.25f64).exp(), epsilon = 1e-9);
        assert!(err < 1e-6);
    }
}
