//! Special functions needed by the spherical-function formulas: the
//! exponentially scaled Laguerre polynomials, the Bessel function `J0`,
//! and the unnormalised sinc.
//!
//! Everything is computed from recurrences or convergent integral
//! representations — no coefficient tables — so each value can be checked
//! against an independent identity in the tests.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::dd::Dd;
use crate::quad;

/// `sin(x)/x`, continued through the origin by its even power series.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Scaled Laguerre function `e^{-u/2} L_l(u)`.
///
/// The scaling folds straight into the three-term recurrence
/// `(n+1) L_{n+1} = (2n+1-u) L_n - n L_{n-1}`, started from the scaled
/// seeds, so large `u` never produces an intermediate overflow.
pub fn laguerre_scaled(l: usize, u: f64) -> f64 {
    let seed = (-0.5 * u).exp();
    if l == 0 {
        return seed;
    }
    let mut prev = seed;
    let mut cur = (1.0 - u) * seed;
    for n in 1..l {
        let n = n as f64;
        let next = ((2.0 * n + 1.0 - u) * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Where the `J0` evaluation switches from the power series to the
/// Hankel-form evaluation.
const J0_SPLIT: f64 = 12.0;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= J0_SPLIT {
        j0_series(x)
    } else {
        j0_hankel(x)
    }
}

/// Alternating power series `sum (-1)^k (x^2/4)^k / (k!)^2`, accumulated in
/// double-double arithmetic.  The largest term near `x = 12` is about
/// `4e3`, so the extended accumulator keeps the cancelled result accurate
/// to full double precision.
fn j0_series(x: f64) -> f64 {
    let q = Dd::from(x * 0.5).mul(Dd::from(x * 0.5));
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for k in 1..200 {
        let kf = k as f64;
        term = term.mul(q).div_f64(-kf * kf);
        sum = sum.add(term);
        if term.abs_hi() < 1e-40 {
            break;
        }
    }
    sum.value()
}

fn hankel_rule() -> &'static (Vec<f64>, Vec<f64>) {
    // e^{-v^2} is below 1e-21 past v = 7; 80 nodes resolve the rest to
    // machine precision.
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| quad::gl_on(0.0, 7.0, 80))
}

/// Hankel-form evaluation from the exact Laplace representation
/// `H0(x) = sqrt(2/(pi x)) e^{i(x - pi/4)} A(x)` with
/// `A(x) = (2/sqrt(pi)) int_0^inf e^{-v^2} (1 + i v^2/(2x))^{-1/2} dv`,
/// so `J0 = sqrt(2/(pi x)) (Re A cos(x - pi/4) - Im A sin(x - pi/4))`.
/// The integral converges for every `x > 0` — this is not the divergent
/// asymptotic series, whose error floor would be visible at this scale.
fn j0_hankel(x: f64) -> f64 {
    let (vs, ws) = hankel_rule();
    let mut re = quad::Compensated::new();
    let mut im = quad::Compensated::new();
    for (v, w) in vs.iter().zip(ws) {
        let g = (Complex64::new(1.0, v * v / (2.0 * x))).sqrt().inv();
        let e = w * (-v * v).exp();
        re.add(e * g.re);
        im.add(e * g.im);
    }
    let norm = 2.0 / std::f64::consts::PI.sqrt();
    let (p, q) = (norm * re.value(), norm * im.value());
    let chi = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
