//! Minimal double-double arithmetic for series that cancel heavily at large arguments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(0.0);
        if hi == 0.0 || !hi.is_finite() {
            return Dd::from_f64(hi);
        }
        let rest = r - BigRational::from_float(hi).unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)));
        Dd { hi, lo: rest.to_f64().unwrap_or(0.0) }
    }

    pub fn recip(self) -> Self {
        // Newton step on 1/hi
        let q = 1.0 / self.hi;
        let r = Dd::from_f64(1.0) - self * q;
        let q2 = r.hi / self.hi;
        let (s, e) = quick_two_sum(q, q2);
        Dd { hi: s, lo: e }
    }

    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, o: f64) -> Dd {
        let (p, e) = two_prod(self.hi, o);
        let (hi, lo) = quick_two_sum(p, e + self.lo * o);
        Dd { hi, lo }
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, o: CDd) -> CDd {
        CDd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Mul<Dd> for CDd {
    type Output = CDd;
    fn mul(self, o: Dd) -> CDd {
        CDd { re: self.re * o, im: self.im * o }
    }
}

impl CDd {
    pub fn norm(self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }
}

/// w = 2/(1 - i x) = 2(1 + i x)/(1 + x^2) in double-double.
pub(crate) fn two_over_one_minus_ix(x: f64) -> CDd {
    let (x2, x2e) = two_prod(x, x);
    let den = Dd::from_f64(1.0) + Dd { hi: x2, lo: x2e };
    let inv = den.recip() * 2.0;
    CDd { re: inv, im: inv * x }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_beats_double_precision() {
        let third = Dd::from_f64(1.0) * Dd::from_f64(3.0).recip();
        let back = third * 3.0 - Dd::from_f64(1.0);
        assert!(back.abs() < 1e-30);
        // (1 + 2^-60)^2 - 1 = 2^-59 + 2^-120
        let a = Dd { hi: 1.0, lo: 2f64.powi(-60) };
        let d = a * a - Dd::from_f64(1.0);
        assert!((d.to_f64() - 2f64.powi(-59)).abs() < 1e-34);
    }

    #[test]
    fn rational_conversion() {
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        let d = Dd::from_rational(&r);
        let err = (d * 3.0 - Dd::from_f64(1.0)).abs();
        assert!(err < 1e-31);
    }

    #[test]
    fn w_product_identity() {
        // w (1 - i x) = 2
        let x = 1234.5;
        let w = two_over_one_minus_ix(x);
        let one_minus_ix = CDd { re: Dd::from_f64(1.0), im: Dd::from_f64(-x) };
        let p = w * one_minus_ix;
        assert!((p.re - Dd::from_f64(2.0)).abs() < 1e-28);
        assert!(p.im.abs() < 1e-28);
    }
}
