//! Quadrature rules and deterministic summation.
//!
//! Everything here is bitwise reproducible: nodes come from Newton
//! iterations with fixed starting points and tolerances, and sums are
//! evaluated in a fixed order with Neumaier compensation, so a run with
//! the same inputs yields the same bytes regardless of thread count.

use num_complex::Complex64;

use crate::group::Rotation;

/// Default polar order for averages over the unit sphere.
pub const DEFAULT_SPHERE_ORDER: usize = 64;
/// Default polar order for averages over the rotation group.
pub const DEFAULT_SO3_ORDER: usize = 24;
/// Default order for radial Gauss-Legendre panels.
pub const DEFAULT_RADIAL_ORDER: usize = 96;
/// Default order for auxiliary angular directions.
pub const DEFAULT_ANGULAR_ORDER: usize = 32;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending nodes.
///
/// Newton iteration on the Legendre recurrence, seeded with the Chebyshev
/// approximation `cos(pi (i - 1/4)/(n + 1/2))`; the lower half is mirrored
/// so the rule is exactly symmetric.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // i-th root counted from the +1 end.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (_, d2) = legendre_with_derivative(n, x);
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = if (x * x - 1.0).abs() < 1e-30 {
        // Endpoint limit, not reached by interior roots.
        0.5 * (n * (n + 1)) as f64 * x.powi(n as i32 + 1)
    } else {
        n as f64 * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, d)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gl_on(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        xs.iter().map(|x| mid + half * x).collect(),
        ws.iter().map(|w| half * w).collect(),
    )
}

/// Neumaier-compensated accumulator; immune to magnitude inversions that
/// defeat plain Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn new() -> Self {
        Compensated::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const SUM_CHUNK: usize = 1024;

/// Sums a slice in its given order: compensated within fixed chunks, then
/// compensated over the chunk totals.  Parallel callers produce terms into
/// the slice and get the same bits as a serial run.
pub fn sum_ordered(vals: &[f64]) -> f64 {
    let mut outer = Compensated::new();
    for chunk in vals.chunks(SUM_CHUNK) {
        let mut inner = Compensated::new();
        for &v in chunk {
            inner.add(v);
        }
        outer.add(inner.value());
    }
    outer.value()
}

pub fn sum_ordered_c(vals: &[Complex64]) -> Complex64 {
    let mut re = Compensated::new();
    let mut im = Compensated::new();
    for chunk in vals.chunks(SUM_CHUNK) {
        let mut cre = Compensated::new();
        let mut cim = Compensated::new();
        for v in chunk {
            cre.add(v.re);
            cim.add(v.im);
        }
        re.add(cre.value());
        im.add(cim.value());
    }
    Complex64::new(re.value(), im.value())
}

/// Quadrature on the unit sphere normalised to the mean:
/// `sum_j w_j f(u_j) ~ (1/4pi) int_{S^2} f`.
///
/// Product of Gauss-Legendre in the polar cosine with a `2n`-point uniform
/// azimuth, so trigonometric polynomials of degree below `2n` are averaged
/// exactly in the azimuth.
pub struct SphereRule {
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

pub fn sphere_rule(n: usize) -> SphereRule {
    let (ts, tw) = gauss_legendre(n);
    let m = 2 * n;
    let mut nodes = Vec::with_capacity(n * m);
    let mut weights = Vec::with_capacity(n * m);
    for (t, wt) in ts.iter().zip(&tw) {
        let s = (1.0 - t * t).max(0.0).sqrt();
        for a in 0..m {
            let phi = 2.0 * std::f64::consts::PI * a as f64 / m as f64;
            nodes.push([s * phi.cos(), s * phi.sin(), *t]);
            weights.push(wt / 2.0 / m as f64);
        }
    }
    SphereRule { nodes, weights }
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn average(&self, mut f: impl FnMut(&[f64; 3]) -> Complex64) -> Complex64 {
        let mut re = Compensated::new();
        let mut im = Compensated::new();
        for (u, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(u);
            re.add(w * v.re);
            im.add(w * v.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

/// Quadrature on the rotation group normalised to the mean, in `Z-Y-Z`
/// Euler angles: uniform `2n`-point grids in the two azimuths, Gauss-
/// Legendre in the middle cosine.  `4n^3` nodes in total.
pub struct So3Rule {
    pub rotations: Vec<Rotation>,
    pub weights: Vec<f64>,
}

pub fn so3_rule(n: usize) -> So3Rule {
    let (cs, cw) = gauss_legendre(n);
    let m = 2 * n;
    let mut rotations = Vec::with_capacity(m * n * m);
    let mut weights = Vec::with_capacity(m * n * m);
    for a in 0..m {
        let alpha = 2.0 * std::f64::consts::PI * a as f64 / m as f64;
        let rz_a = Rotation::about_axis(2, alpha);
        for (c, wc) in cs.iter().zip(&cw) {
            let ry = Rotation::about_axis(1, c.acos());
            let partial = rz_a.compose(&ry);
            for g in 0..m {
                let gamma = 2.0 * std::f64::consts::PI * g as f64 / m as f64;
                rotations.push(partial.compose(&Rotation::about_axis(2, gamma)));
                weights.push(wc / 2.0 / (m * m) as f64);
            }
        }
    }
    So3Rule { rotations, weights }
}

impl So3Rule {
    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }

    pub fn average(&self, mut f: impl FnMut(&Rotation) -> Complex64) -> Complex64 {
        let mut re = Compensated::new();
        let mut im = Compensated::new();
        for (k, w) in self.rotations.iter().zip(&self.weights) {
            let v = f(k);
            re.add(w * v.re);
            im.add(w * v.im);
        }
        Complex64::new(re.value(), im.value())
    }
}

/// Truncation radius for integrands bounded by `C exp(-a r^2)`: beyond it
/// the tail is below `1e-16` of the peak, with two units of margin.
pub fn truncation_radius(a_min: f64) -> f64 {
    assert!(a_min > 0.0);
    (1e16f64.ln() / a_min).sqrt() + 2.0
}
