//! Minimal double-double arithmetic (an unevaluated sum `hi + lo` of two
//! doubles, ~32 significant digits).  Used where a plain f64 accumulation
//! would lose digits to cancellation, e.g. the Bessel power series near its
//! branch switch.  Splitting follows Dekker, so no FMA is required.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Exact sum: `a + b = s + e` with `s = fl(a + b)`.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Dekker split of `a` into high and low 26-bit parts.
#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a; // 2^27 + 1
    let hi = c - (c - a);
    (hi, a - hi)
}

/// Exact product: `a * b = p + e` with `p = fl(a * b)`.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    fn renorm(hi: f64, lo: f64) -> Dd {
        let (s, e) = two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        Dd::renorm(s, e + self.lo + other.lo)
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        Dd::renorm(p, e + self.hi * other.lo + self.lo * other.hi)
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = ((self.hi - p) - e) + self.lo;
        Dd::renorm(q1, r / d)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn abs_hi(self) -> f64 {
        self.hi.abs()
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        // (1 + 1e-20) - 1 vanishes in f64 but survives in dd.
        let a = Dd::from(1.0).add(Dd { hi: 1e-20, lo: 0.0 });
        let d = a.add(Dd::from(-1.0));
        assert_eq!(d.value(), 1e-20);
    }

    #[test]
    fn product_carries_roundoff() {
        let x = Dd::from(1.0 + 2f64.powi(-30));
        let sq = x.mul(x);
        // (1+u)^2 = 1 + 2u + u^2; the u^2 term is below f64 resolution at hi.
        let expect_lo = 2f64.powi(-60);
        let residual = sq.add(Dd::from(-(1.0 + 2f64.powi(-29))));
        assert_eq!(residual.value(), expect_lo);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = Dd::from(std::f64::consts::PI);
        let y = x.div_f64(7.0).mul(Dd::from(7.0));
        let diff = y.add(x.neg());
        assert!(diff.value().abs() < 1e-30);
    }
}
