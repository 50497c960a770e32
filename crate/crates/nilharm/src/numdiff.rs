//! High-order finite differences for checking operators against functions
//! that are only available pointwise.
//!
//! Stencil weights are solved exactly over the rationals from the moment
//! conditions, so the only floating-point error left is truncation plus
//! roundoff.  Every application is Richardson-extrapolated from steps `h`
//! and `h/2`, and the difference of the two levels is reported as the
//! error estimate.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::diffop::DiffOp;
use crate::poly::Exponents;
use crate::rat::{rational_to_f64, GaussRat};
use crate::space::MAX_VARS;

/// Default base step; with fourth-order stencils this keeps truncation and
/// roundoff balanced for derivative orders up to four.
pub const DEFAULT_STEP: f64 = 1e-2;

/// Maximum per-variable derivative order the stencil table covers.
pub const MAX_ORDER: usize = 4;

/// Centered nodes and weights approximating `d^k/dt^k` at fourth order:
/// `f^(k)(0) ~ h^-k sum_s w_s f(s h)`.
fn stencil(k: usize) -> &'static (Vec<i64>, Vec<f64>) {
    static TABLE: OnceLock<Vec<(Vec<i64>, Vec<f64>)>> = OnceLock::new();
    &TABLE.get_or_init(|| (0..=MAX_ORDER).map(solve_stencil).collect())[k]
}

/// Solves the moment system `sum_s w_s s^m = k! [m = k]` for
/// `m = 0..2r` over the symmetric nodes `-r..r`, exactly in rational
/// arithmetic.  `r = 2` suffices for `k <= 2`; `k = 3, 4` need `r = 3`.
fn solve_stencil(k: usize) -> (Vec<i64>, Vec<f64>) {
    if k == 0 {
        return (vec![0], vec![1.0]);
    }
    let r: i64 = if k <= 2 { 2 } else { 3 };
    let nodes: Vec<i64> = (-r..=r).collect();
    let m = nodes.len();
    let big = |v: i64| BigRational::from_integer(BigInt::from(v));

    // Augmented moment matrix, row per power of the node.
    let mut a: Vec<Vec<BigRational>> = (0..m)
        .map(|row| {
            let mut line: Vec<BigRational> =
                nodes.iter().map(|&s| big(s).pow(row as i32)).collect();
            let rhs = if row == k {
                (1..=k as i64).map(big).product()
            } else {
                BigRational::zero()
            };
            line.push(rhs);
            line
        })
        .collect();

    // Exact Gauss-Jordan; the Vandermonde system is nonsingular.
    for col in 0..m {
        let pivot = (col..m)
            .find(|&row| !a[row][col].is_zero())
            .expect("Vandermonde rows are independent");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in &mut a[col] {
            *v /= p.clone();
        }
        for row in 0..m {
            if row != col && !a[row][col].is_zero() {
                let factor = a[row][col].clone();
                for j in 0..=m {
                    let delta = &factor * &a[col][j];
                    a[row][j] -= delta;
                }
            }
        }
    }

    let weights = (0..m).map(|row| rational_to_f64(&a[row][m])).collect();
    (nodes, weights)
}

/// Evaluates derivatives of one function at one point, sharing sampled
/// values across all requested operators.
///
/// Sample points live on the `h/2` grid, so the two Richardson levels and
/// every term of every operator draw from the same cache — important when
/// one function evaluation costs a full quadrature.
pub struct OpApplier<'a> {
    f: &'a dyn Fn(&[f64]) -> Complex64,
    base: Vec<f64>,
    h: f64,
    cache: RefCell<HashMap<[i32; MAX_VARS], Complex64>>,
}

impl<'a> OpApplier<'a> {
    pub fn new(f: &'a dyn Fn(&[f64]) -> Complex64, base: &[f64], h: f64) -> Self {
        assert!(h > 0.0 && h.is_finite());
        OpApplier {
            f,
            base: base.to_vec(),
            h,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn sample(&self, offsets: [i32; MAX_VARS]) -> Complex64 {
        if let Some(v) = self.cache.borrow().get(&offsets) {
            return *v;
        }
        let step = self.h / 2.0;
        let mut z = self.base.clone();
        for (i, &s) in offsets.iter().enumerate() {
            if i < z.len() {
                z[i] += step * s as f64;
            }
        }
        let v = (self.f)(&z);
        self.cache.borrow_mut().insert(offsets, v);
        v
    }

    /// Tensor-product stencil for the multi-index `alpha`, with node
    /// spacing `scale` half-steps.
    fn tensor_derivative(&self, alpha: &Exponents, scale: i32) -> Complex64 {
        let vars: Vec<usize> = (0..MAX_VARS).filter(|&i| alpha[i] > 0).collect();
        let order: usize = alpha.iter().map(|&k| k as usize).sum();
        let h_eff = self.h / 2.0 * scale as f64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut idx = vec![0usize; vars.len()];
        loop {
            let mut offsets = [0i32; MAX_VARS];
            let mut weight = 1.0;
            for (slot, &i) in vars.iter().enumerate() {
                let (nodes, weights) = stencil(alpha[i] as usize);
                offsets[i] = nodes[idx[slot]] as i32 * scale;
                weight *= weights[idx[slot]];
            }
            total += weight * self.sample(offsets);
            // Odometer over the per-variable node lists.
            let mut slot = 0;
            loop {
                if slot == vars.len() {
                    return total / h_eff.powi(order as i32);
                }
                idx[slot] += 1;
                if idx[slot] < stencil(alpha[vars[slot]] as usize).0.len() {
                    break;
                }
                idx[slot] = 0;
                slot += 1;
            }
        }
    }

    fn level_sum(&self, op: &DiffOp<GaussRat>, scale: i32) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (alpha, coeff) in op.terms() {
            let c = coeff.eval(&self.base);
            if c.norm() != 0.0 {
                total += c * self.tensor_derivative(alpha, scale);
            }
        }
        total
    }

    /// Applies `op` to the function at the base point.  Returns the
    /// Richardson-extrapolated value and the inter-level difference as an
    /// error estimate.
    pub fn apply(&self, op: &DiffOp<GaussRat>) -> (Complex64, f64) {
        assert!(
            op.terms().all(|(a, _)| a.iter().all(|&k| (k as usize) <= MAX_ORDER)),
            "stencil table covers per-variable orders up to {MAX_ORDER}"
        );
        let coarse = self.level_sum(op, 2);
        let fine = self.level_sum(op, 1);
        ((16.0 * fine - coarse) / 15.0, (fine - coarse).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop;
    use crate::poly::Poly;
    use crate::space::Space;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stencils_satisfy_moment_conditions() {
        for k in 1..=MAX_ORDER {
            let (nodes, weights) = stencil(k);
            let top = nodes.len() - 1;
            for m in 0..=top {
                let moment: f64 = nodes
                    .iter()
                    .zip(weights)
                    .map(|(&s, &w)| w * (s as f64).powi(m as i32))
                    .sum();
                let expected =
                    if m == k { (1..=k as i64).product::<i64>() as f64 } else { 0.0 };
                assert_abs_diff_eq!(moment, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mixed_second_derivative_of_exponential() {
        let f = |z: &[f64]| Complex64::new(z[0].exp() * z[1].cos(), 0.0);
        let base = [0.3, -0.7, 0.0, 0.0, 0.0, 0.0];
        let ap = OpApplier::new(&f, &base, DEFAULT_STEP);
        let mut e = [0u8; MAX_VARS];
        e[0] = 1;
        e[1] = 1;
        let op = DiffOp::from_terms(Space::N, [(e, Poly::one(Space::N))]);
        let (v, err) = ap.apply(&op);
        let exact = 0.3f64.exp() * 0.7f64.sin();
        assert_abs_diff_eq!(v.re, exact, epsilon = 1e-9);
        assert!(err < 1e-6);
    }

    #[test]
    fn fourth_derivative_stays_accurate() {
        let f = |z: &[f64]| Complex64::new((2.0 * z[2]).exp(), 0.0);
        let base = [0.0, 0.0, 0.2, 0.0, 0.0, 0.0];
        let ap = OpApplier::new(&f, &base, DEFAULT_STEP);
        let mut e = [0u8; MAX_VARS];
        e[2] = 4;
        let op = DiffOp::from_terms(Space::N, [(e, Poly::one(Space::N))]);
        let (v, _) = ap.apply(&op);
        assert_abs_diff_eq!(v.re, 16.0 * 0.4f64.exp(), epsilon = 1e-4);
    }

    #[test]
    fn matches_symbolic_application_on_a_polynomial() {
        let space = Space::N;
        let x1 = Poly::<crate::rat::GaussRat>::var(space, 0).unwrap();
        let y2 = Poly::var(space, 4).unwrap();
        let f_poly = &(&x1.pow(3) + &(&x1 * &y2.pow(2))) + &y2.pow(4);
        let f_num = f_poly.to_numeric();
        let f = move |z: &[f64]| f_num.eval(z);
        let z = [0.4, -0.2, 0.7, 0.3, -0.5, 0.1];
        let op = diffop::sublaplacian(space);
        let symbolic = op.apply(&f_poly).eval(&z);
        let ap = OpApplier::new(&f, &z, DEFAULT_STEP);
        let (numeric, err) = ap.apply(&op);
        assert!((numeric - symbolic).norm() <= 1e-7 + 10.0 * err);
    }

    #[test]
    fn sample_cache_is_shared_between_operators() {
        use std::cell::Cell;
        let calls = Cell::new(0usize);
        let f = |z: &[f64]| {
            calls.set(calls.get() + 1);
            Complex64::new(z.iter().map(|v| v * v).sum(), 0.0)
        };
        let base = [0.1; 6];
        let ap = OpApplier::new(&f, &base, DEFAULT_STEP);
        let lap = diffop::sublaplacian(Space::N);
        ap.apply(&lap);
        let first = calls.get();
        ap.apply(&lap);
        assert_eq!(calls.get(), first, "second application must hit the cache");
    }
}
