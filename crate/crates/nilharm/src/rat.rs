//! Exact Gaussian-rational scalars: complex numbers with `BigRational`
//! real and imaginary parts.  These are the coefficients of every symbolic
//! polynomial and differential operator; symmetrization introduces powers of
//! `1/i`, so a plain rational field is not closed under it.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type GaussRat = Complex<BigRational>;

pub fn from_int(n: i64) -> GaussRat {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

/// `n/d` as a real Gaussian rational; panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> GaussRat {
    assert!(d != 0, "zero denominator");
    Complex::new(
        BigRational::new(BigInt::from(n), BigInt::from(d)),
        BigRational::zero(),
    )
}

pub fn i_unit() -> GaussRat {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// `i^(-k)`, the scale attached to a degree-`k` monomial by symmetrization.
pub fn i_to_neg(k: usize) -> GaussRat {
    let one = BigRational::one();
    let zero = BigRational::zero();
    match k % 4 {
        0 => Complex::new(one, zero),
        1 => Complex::new(zero, -one),
        2 => Complex::new(-one, zero),
        _ => Complex::new(zero, one),
    }
}

pub fn to_c64(c: &GaussRat) -> num_complex::Complex64 {
    num_complex::Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

/// Exactly representable for every value this crate produces (small numerators
/// and power-of-two-ish denominators); falls back to a quotient of
/// approximations for huge operands.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = bigint_to_f64(r.numer());
    let den = bigint_to_f64(r.denom());
    num / den
}

fn bigint_to_f64(b: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    b.to_f64().unwrap_or(f64::NAN)
}

/// Stable text form: `0`, `3`, `-1/2`, `i`, `-i`, `2/3i`, `1+i`, `1/2-3i`.
pub fn render(c: &GaussRat) -> String {
    if c.im.is_zero() {
        return c.re.to_string();
    }
    let im_str = |im: &BigRational| -> String {
        if im.abs().is_one() {
            String::from("i")
        } else {
            format!("{}i", im.abs())
        }
    };
    if c.re.is_zero() {
        if c.im.is_negative() {
            format!("-{}", im_str(&c.im))
        } else {
            im_str(&c.im)
        }
    } else {
        let sign = if c.im.is_negative() { "-" } else { "+" };
        format!("{}{}{}", c.re, sign, im_str(&c.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_inverse_i_cycle() {
        let i = i_unit();
        for k in 0..8 {
            let mut expect = from_int(1);
            for _ in 0..k {
                expect = expect * i.clone();
            }
            // i^(-k) * i^k == 1
            assert_eq!(i_to_neg(k) * expect, from_int(1));
        }
    }

    #[test]
    fn renders_compactly() {
        assert_eq!(render(&from_int(-3)), "-3");
        assert_eq!(render(&ratio(1, 2)), "1/2");
        assert_eq!(render(&i_unit()), "i");
        assert_eq!(render(&(from_int(0) - i_unit())), "-i");
        assert_eq!(render(&(ratio(1, 2) - i_unit())), "1/2-i");
        assert_eq!(render(&(i_unit() * ratio(2, 3))), "2/3i");
    }

    #[test]
    fn f64_conversion_is_exact_for_dyadics() {
        assert_eq!(rational_to_f64(&ratio(-3, 4).re), -0.75);
        assert_eq!(rational_to_f64(&ratio(1, 3).re), 1.0 / 3.0);
    }
}
