//! Differential operators with polynomial coefficients, written in global
//! exponential coordinates.
//!
//! An operator is a finite sum `sum_a p_a(z) d^a` over multi-indices `a`.
//! Two products are provided: [`DiffOp::compose`] is true operator
//! composition (Leibniz rule, derivatives hit the coefficients), while
//! [`DiffOp::symbol_product`] multiplies coefficients and adds derivative
//! orders without any correction terms.  The latter is what symmetrization
//! of an algebra polynomial produces here: right translation by
//! `exp(u . E)` is affine in `u`, so the mixed `u`-derivatives that define
//! the symmetrized operator never differentiate the field coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::poly::{self, AlgebraError, Coeff, Exponents, Poly};
use crate::rat::{self, GaussRat};
use crate::space::{Space, MAX_VARS};

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp<C: Coeff> {
    space: Space,
    /// Maps the derivative multi-index to its polynomial coefficient.
    terms: BTreeMap<Exponents, Poly<C>>,
}

fn multi_degree(e: &Exponents) -> usize {
    e.iter().map(|&k| k as usize).sum()
}

fn binom(n: u8, k: u8) -> i64 {
    let (n, k) = (n as i64, k as i64);
    let mut v = 1i64;
    for j in 0..k {
        v = v * (n - j) / (j + 1);
    }
    v
}

/// All multi-indices `g <= a` componentwise, in odometer order.
fn sub_indices(a: &Exponents) -> Vec<Exponents> {
    let mut out = vec![[0u8; MAX_VARS]];
    for (i, &top) in a.iter().enumerate() {
        if top == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (top as usize + 1));
        for base in &out {
            for k in 0..=top {
                let mut e = *base;
                e[i] = k;
                next.push(e);
            }
        }
        out = next;
    }
    out
}

impl<C: Coeff> DiffOp<C> {
    pub fn zero(space: Space) -> Self {
        DiffOp { space, terms: BTreeMap::new() }
    }

    /// The identity operator (multiplication by one).
    pub fn identity(space: Space) -> Self {
        let mut op = DiffOp::zero(space);
        op.add_term([0; MAX_VARS], Poly::one(space));
        op
    }

    /// The bare partial derivative in variable `i`.
    pub fn partial(space: Space, i: usize) -> Result<Self, AlgebraError> {
        if i >= space.dim() {
            return Err(AlgebraError::VarOutOfRange { index: i, space });
        }
        let mut e = [0u8; MAX_VARS];
        e[i] = 1;
        let mut op = DiffOp::zero(space);
        op.add_term(e, Poly::one(space));
        Ok(op)
    }

    /// Multiplication by the polynomial `p`.
    pub fn mul_by(p: &Poly<C>) -> Self {
        let mut op = DiffOp::zero(p.space());
        op.add_term([0; MAX_VARS], p.clone());
        op
    }

    pub fn from_terms(
        space: Space,
        it: impl IntoIterator<Item = (Exponents, Poly<C>)>,
    ) -> Self {
        let mut op = DiffOp::zero(space);
        for (e, p) in it {
            op.add_term(e, p);
        }
        op
    }

    fn add_term(&mut self, e: Exponents, p: Poly<C>) {
        if p.is_zero() {
            return;
        }
        assert_eq!(p.space(), self.space, "coefficient lives on the wrong space");
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &p;
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

    /// Highest total derivative order present.
    pub fn order(&self) -> usize {
        self.terms.keys().map(multi_degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Poly<C>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> Poly<C> {
        self.terms.get(e).cloned().unwrap_or_else(|| Poly::zero(self.space))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut op = DiffOp::zero(self.space);
        for (e, p) in &self.terms {
            op.add_term(*e, p.scale(c));
        }
        op
    }

    /// Operator composition `self . other`: apply `other` first.  The
    /// Leibniz rule routes derivatives of `self` onto the coefficients of
    /// `other`:
    /// `p d^a (q d^b) = sum_{g<=a} binom(a,g) p (d^{a-g} q) d^{g+b}`.
    pub fn compose(&self, other: &DiffOp<C>) -> DiffOp<C> {
        assert_eq!(
            self.space, other.space,
            "operands live on different spaces"
        );
        let mut out = DiffOp::zero(self.space);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                for g in sub_indices(a) {
                    // d^{a-g} q, with the product of per-variable binomials.
                    let mut dq = q.clone();
                    let mut scale = 1i64;
                    for i in 0..MAX_VARS {
                        scale *= binom(a[i], g[i]);
                        for _ in 0..(a[i] - g[i]) {
                            dq = dq.diff(i).expect("index within space by construction");
                        }
                        if dq.is_zero() {
                            break;
                        }
                    }
                    if dq.is_zero() || scale == 0 {
                        continue;
                    }
                    let mut e = g;
                    for i in 0..MAX_VARS {
                        e[i] += b[i];
                    }
                    out.add_term(e, (&dq * p).scale(&C::from_int(scale)));
                }
            }
        }
        out
    }

    /// Principal-symbol product: coefficients multiply, derivative orders
    /// add, and no derivative ever lands on a coefficient.
    pub fn symbol_product(&self, other: &DiffOp<C>) -> DiffOp<C> {
        assert_eq!(
            self.space, other.space,
            "operands live on different spaces"
        );
        let mut out = DiffOp::zero(self.space);
        for (a, p) in &self.terms {
            for (b, q) in &other.terms {
                let mut e = *a;
                for i in 0..MAX_VARS {
                    e[i] += b[i];
                }
                out.add_term(e, p * q);
            }
        }
        out
    }

    /// Applies the operator to a polynomial.
    pub fn apply(&self, f: &Poly<C>) -> Poly<C> {
        assert_eq!(
            self.space,
            f.space(),
            "operands live on different spaces"
        );
        let mut out = Poly::zero(self.space);
        for (a, p) in &self.terms {
            let mut df = f.clone();
            for i in 0..MAX_VARS {
                for _ in 0..a[i] {
                    df = df.diff(i).expect("index within space by construction");
                }
                if df.is_zero() {
                    break;
                }
            }
            if !df.is_zero() {
                out = &out + &(&df * p);
            }
        }
        out
    }

    pub fn commutator(&self, other: &DiffOp<C>) -> DiffOp<C> {
        &self.compose(other) - &other.compose(self)
    }
}

impl<C: Coeff> Add for &DiffOp<C> {
    type Output = DiffOp<C>;
    fn add(self, rhs: Self) -> DiffOp<C> {
        assert_eq!(self.space, rhs.space, "operands live on different spaces");
        let mut out = self.clone();
        for (e, p) in &rhs.terms {
            out.add_term(*e, p.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &DiffOp<C> {
    type Output = DiffOp<C>;
    fn sub(self, rhs: Self) -> DiffOp<C> {
        self + &-rhs
    }
}

impl<C: Coeff> Neg for &DiffOp<C> {
    type Output = DiffOp<C>;
    fn neg(self) -> DiffOp<C> {
        let mut out = DiffOp::zero(self.space);
        for (e, p) in &self.terms {
            out.add_term(*e, -p);
        }
        out
    }
}

fn render_partials(space: Space, e: &Exponents) -> String {
    let mut s = String::new();
    for (i, &k) in e[..space.dim()].iter().enumerate() {
        match k {
            0 => {}
            1 => s.push_str(&format!("∂{}", space.var_name(i))),
            _ => s.push_str(&format!("∂{}^{}", space.var_name(i), k)),
        }
    }
    s
}

impl fmt::Display for DiffOp<GaussRat> {
    /// Stable text form: terms ordered like polynomial display, each
    /// rendered `(coeff)∂-part`, with a space before the `∂` only when the
    /// coefficient ends in a variable, e.g. `(1/2)x3 ∂y2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "(0)");
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| poly::display_order(a, b));
        let rendered: Vec<String> = keys
            .into_iter()
            .map(|e| {
                let p = &self.terms[e];
                let partials = render_partials(self.space, e);
                let single_monomial = p.num_terms() == 1;
                let coeff = if single_monomial {
                    format!("{p}")
                } else {
                    format!("({p})")
                };
                if partials.is_empty() {
                    coeff
                } else if single_monomial && !coeff.ends_with(')') {
                    format!("{coeff} {partials}")
                } else {
                    format!("{coeff}{partials}")
                }
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// The left-invariant vector field attached to the `i`-th algebra direction.
///
/// On `N` these are `X1, X2, X3, Y1, Y2, Y3`; on `N'` they are
/// `X'1, X'2, X'3, T`.  Each is the derivative at `s = 0` of
/// `F(g . exp(s E_i))`, computed from the group law.
pub fn field(space: Space, i: usize) -> Result<DiffOp<GaussRat>, AlgebraError> {
    if i >= space.dim() {
        return Err(AlgebraError::VarOutOfRange { index: i, space });
    }
    let var = |j| Poly::<GaussRat>::var(space, j).expect("fixed index");
    let half = |j: usize| var(j).scale(&rat::ratio(1, 2));
    let e = |j: usize| {
        let mut e = [0u8; MAX_VARS];
        e[j] = 1;
        e
    };
    let op = match (space, i) {
        // X_j picks up the central drift (x ^ e_j)/2 from the group law.
        (Space::N, 0) => DiffOp::from_terms(
            space,
            [
                (e(0), Poly::one(space)),
                (e(4), half(2)),
                (e(5), -&half(1)),
            ],
        ),
        (Space::N, 1) => DiffOp::from_terms(
            space,
            [
                (e(1), Poly::one(space)),
                (e(3), -&half(2)),
                (e(5), half(0)),
            ],
        ),
        (Space::N, 2) => DiffOp::from_terms(
            space,
            [
                (e(2), Poly::one(space)),
                (e(3), half(1)),
                (e(4), -&half(0)),
            ],
        ),
        (Space::N, _) => DiffOp::partial(space, i)?,
        (Space::NPrime, 0) => DiffOp::from_terms(
            space,
            [(e(0), Poly::one(space)), (e(3), -&half(1))],
        ),
        (Space::NPrime, 1) => {
            DiffOp::from_terms(space, [(e(1), Poly::one(space)), (e(3), half(0))])
        }
        (Space::NPrime, _) => DiffOp::partial(space, i)?,
    };
    Ok(op)
}

pub fn fields(space: Space) -> Vec<DiffOp<GaussRat>> {
    (0..space.dim()).map(|i| field(space, i).expect("index in range")).collect()
}

/// Symmetrization of a polynomial on the Lie algebra into a left-invariant
/// operator, with the `-i` convention: the generator in direction `j` maps
/// to `-i` times the field `E_j`.
///
/// Because `g exp(u . E)` depends affinely on `u`, the symmetrized operator
/// of a monomial is the symbol product of the corresponding fields — the
/// `u`-derivatives never touch the coefficient polynomials.
pub fn symmetrize(p: &Poly<GaussRat>) -> DiffOp<GaussRat> {
    let space = p.space();
    let gens = fields(space);
    let mut out = DiffOp::zero(space);
    for (exps, c) in p.terms() {
        let mut prod = DiffOp::identity(space);
        for (j, &k) in exps[..space.dim()].iter().enumerate() {
            for _ in 0..k {
                prod = prod.symbol_product(&gens[j]);
            }
        }
        let phase = c.clone() * rat::i_to_neg(multi_degree(exps));
        out = &out + &prod.scale(&phase);
    }
    out
}

/// `L = -(X1^2 + X2^2 + X3^2)`, the positive sublaplacian.
pub fn sublaplacian(space: Space) -> DiffOp<GaussRat> {
    let mut op = DiffOp::zero(space);
    for i in 0..3 {
        let x = field(space, i).expect("fixed index");
        op = &op - &x.compose(&x);
    }
    op
}

/// The positive Laplacian of the central layer: `-sum Y_j^2` on `N`,
/// `-T^2` on `N'`.
pub fn central_laplacian(space: Space) -> DiffOp<GaussRat> {
    let mut op = DiffOp::zero(space);
    for i in 3..space.dim() {
        let y = field(space, i).expect("fixed index");
        op = &op - &y.compose(&y);
    }
    op
}

/// The mixed invariant operator: `-sum X_j Y_j` on `N`, `-X'3 T` on `N'`.
pub fn mixed_operator(space: Space) -> DiffOp<GaussRat> {
    let mut op = DiffOp::zero(space);
    match space {
        Space::N => {
            for i in 0..3 {
                let x = field(space, i).expect("fixed index");
                let y = field(space, i + 3).expect("fixed index");
                op = &op - &x.compose(&y);
            }
        }
        Space::NPrime => {
            let x3 = field(space, 2).expect("fixed index");
            let t = field(space, 3).expect("fixed index");
            op = &op - &x3.compose(&t);
        }
    }
    op
}

/// `-X'3^2` on `N'`, the extra generator the degenerate pair needs.
pub fn vertical_square() -> DiffOp<GaussRat> {
    let x3 = field(Space::NPrime, 2).expect("fixed index");
    -&x3.compose(&x3)
}

/// The canonical generators of the invariant-operator algebra, i.e. the
/// symmetrizations of [`poly::hilbert_basis`]: `(L, Δ, D)` on `N` and
/// `(L', Δ', D', -X'3^2)` on `N'`.
pub fn invariant_ops(space: Space) -> Vec<DiffOp<GaussRat>> {
    poly::hilbert_basis(space).iter().map(symmetrize).collect()
}
