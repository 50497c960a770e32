//! Sparse multivariate polynomials over an exact or floating scalar.
//!
//! A `Poly<C>` is a canonical map from exponent vectors to nonzero
//! coefficients, tagged with the [`Space`] its variables live on.  The exact
//! instantiation `Poly<GaussRat>` carries all symbolic work (operator
//! coefficients, symmetrization inputs); `Poly<Complex64>` is the polynomial
//! part of Gaussian test functions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::rat::{self, GaussRat};
use crate::space::{Space, MAX_VARS};

/// Exponent vector; slots past `space.dim()` stay zero.
pub type Exponents = [u8; MAX_VARS];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("operands live on different spaces ({left} vs {right})")]
    SpaceMismatch { left: Space, right: Space },
    #[error("variable index {index} out of range for space {space}")]
    VarOutOfRange { index: usize, space: Space },
    #[error("operation requires space {expected}, got {got}")]
    WrongSpace { expected: Space, got: Space },
}

/// Scalar types a polynomial can be built over.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Coeff for GaussRat {
    fn from_int(n: i64) -> Self {
        rat::from_int(n)
    }
    fn to_c64(&self) -> Complex64 {
        rat::to_c64(self)
    }
}

impl Coeff for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C: Coeff> {
    space: Space,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero(space: Space) -> Self {
        Poly { space, terms: BTreeMap::new() }
    }

    pub fn constant(space: Space, c: C) -> Self {
        let mut p = Poly::zero(space);
        if !c.is_zero() {
            p.terms.insert([0; MAX_VARS], c);
        }
        p
    }

    pub fn one(space: Space) -> Self {
        Poly::constant(space, C::one())
    }

    /// The coordinate function with index `i`.
    pub fn var(space: Space, i: usize) -> Result<Self, AlgebraError> {
        if i >= space.dim() {
            return Err(AlgebraError::VarOutOfRange { index: i, space });
        }
        let mut e = [0u8; MAX_VARS];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, C::one());
        Ok(Poly { space, terms })
    }

    /// Builds from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(space: Space, it: impl IntoIterator<Item = (Exponents, C)>) -> Self {
        let mut p = Poly::zero(space);
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        debug_assert!(e[self.space.dim()..].iter().all(|&k| k == 0));
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.space);
        }
        Poly::from_terms(
            self.space,
            self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())),
        )
    }

    /// Partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> Result<Self, AlgebraError> {
        if i >= self.space.dim() {
            return Err(AlgebraError::VarOutOfRange { index: i, space: self.space });
        }
        let mut out = Poly::zero(self.space);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut en = *e;
            en[i] -= 1;
            out.add_term(en, c.clone() * C::from_int(e[i] as i64));
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one(self.space);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, z: &[f64]) -> Complex64 {
        assert_eq!(z.len(), self.space.dim(), "point dimension mismatch");
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (i, &k) in e[..self.space.dim()].iter().enumerate() {
                if k > 0 {
                    m *= z[i].powi(k as i32);
                }
            }
            acc += c.to_c64() * m;
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.space, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    fn assert_same_space(&self, other: &Self) {
        assert_eq!(
            self.space, other.space,
            "operands live on different spaces ({} vs {})",
            self.space, other.space
        );
    }
}

impl Poly<GaussRat> {
    pub fn to_numeric(&self) -> Poly<Complex64> {
        self.map_coeffs(rat::to_c64)
    }

    /// True if every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }
}

impl Poly<Complex64> {
    pub fn conj(&self) -> Self {
        self.map_coeffs(|c| c.conj())
    }
}

impl<C: Coeff> Add for &Poly<C> {
    type Output = Poly<C>;
    fn add(self, rhs: Self) -> Poly<C> {
        self.assert_same_space(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &Poly<C> {
    type Output = Poly<C>;
    fn sub(self, rhs: Self) -> Poly<C> {
        self.assert_same_space(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<C: Coeff> Mul for &Poly<C> {
    type Output = Poly<C>;
    fn mul(self, rhs: Self) -> Poly<C> {
        self.assert_same_space(rhs);
        let mut out = Poly::zero(self.space);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0u8; MAX_VARS];
                for i in 0..MAX_VARS {
                    e[i] = ea[i].checked_add(eb[i]).expect("exponent overflow");
                }
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

/// Display ordering shared with `DiffOp`: total degree descending, then
/// exponent vector lexicographically descending, so `x1` terms lead.
pub(crate) fn display_order(a: &Exponents, b: &Exponents) -> std::cmp::Ordering {
    let da: usize = a.iter().map(|&k| k as usize).sum();
    let db: usize = b.iter().map(|&k| k as usize).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

pub(crate) fn render_monomial(space: Space, e: &Exponents) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e[..space.dim()].iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(space.var_name(i).to_string()),
            _ => parts.push(format!("{}^{}", space.var_name(i), k)),
        }
    }
    parts.join(" ")
}

impl fmt::Display for Poly<GaussRat> {
    /// Stable text form, e.g. `(1/2)x3` or `(-1)x1^2 + (1)x2 x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| display_order(a, b));
        let rendered: Vec<String> = keys
            .into_iter()
            .map(|e| {
                let c = &self.terms[e];
                let mono = render_monomial(self.space, e);
                if mono.is_empty() {
                    format!("({})", rat::render(c))
                } else {
                    format!("({}){}", rat::render(c), mono)
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// `|x|^2` on either space.
pub fn norm_x_squared(space: Space) -> Poly<GaussRat> {
    let mut p = Poly::zero(space);
    for i in 0..3 {
        p = &p + &Poly::var(space, i).unwrap().pow(2);
    }
    p
}

/// `|y|^2` on `N`.
pub fn norm_y_squared() -> Poly<GaussRat> {
    let mut p = Poly::zero(Space::N);
    for i in 3..6 {
        p = &p + &Poly::var(Space::N, i).unwrap().pow(2);
    }
    p
}

/// `x . y` on `N`.
pub fn x_dot_y() -> Poly<GaussRat> {
    let mut p = Poly::zero(Space::N);
    for i in 0..3 {
        p = &p + &(&Poly::var(Space::N, i).unwrap() * &Poly::var(Space::N, i + 3).unwrap());
    }
    p
}

/// `t^2` on `N'`.
pub fn t_squared() -> Poly<GaussRat> {
    Poly::var(Space::NPrime, 3).unwrap().pow(2)
}

/// `x3 t` on `N'`.
pub fn x3_t() -> Poly<GaussRat> {
    &Poly::var(Space::NPrime, 2).unwrap() * &Poly::var(Space::NPrime, 3).unwrap()
}

/// `x3^2` on `N'`.
pub fn x3_squared() -> Poly<GaussRat> {
    Poly::var(Space::NPrime, 2).unwrap().pow(2)
}

/// Generators of the rotation-invariant polynomials: `(|x|^2, |y|^2, x.y)` on
/// `N`, `(|x|^2, t^2, x3 t, x3^2)` on `N'`.
pub fn hilbert_basis(space: Space) -> Vec<Poly<GaussRat>> {
    match space {
        Space::N => vec![norm_x_squared(space), norm_y_squared(), x_dot_y()],
        Space::NPrime => vec![norm_x_squared(space), t_squared(), x3_t(), x3_squared()],
    }
}
