//! Double-word ("double-double") arithmetic, just enough for the closed form.
//!
//! Algorithms and bounds are the standard FMA-based ones (Joldes, Muller,
//! Popescu 2017): with `u = 2^-53`, addition is within `3u^2`,
//! multiplication within `5u^2` and division within `15u^2`, relative.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Arithmetic the generic closed-form kernel runs in.
pub(crate) trait Wide:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    /// A per-operation relative error, generous enough to absorb complex
    /// arithmetic built from a handful of real operations.
    const UNIT: f64;
    fn of(x: f64) -> Self;
    fn f64(self) -> f64;

    fn powi(self, e: i32) -> Self {
        let mut base = if e < 0 { Self::of(1.0) / self } else { self };
        let mut e = e.unsigned_abs();
        let mut acc = Self::of(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Wide for f64 {
    const UNIT: f64 = f64::EPSILON;
    fn of(x: f64) -> Self {
        x
    }
    fn f64(self) -> f64 {
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn fast_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Wide for Dd {
    // 64 u^2
    const UNIT: f64 = 7.888609052210118e-31;
    fn of(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
    fn f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let s = two_sum(self.hi, y.hi);
        let t = two_sum(self.lo, y.lo);
        let v = fast_two_sum(s.hi, s.lo + t.hi);
        fast_two_sum(v.hi, t.lo + v.lo)
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
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let c = two_prod(self.hi, y.hi);
        let tl = self.hi.mul_add(y.lo, self.lo * y.hi);
        fast_two_sum(c.hi, c.lo + tl)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let th = self.hi / y.hi;
        let r = self - y * Dd::of(th);
        let tl = r.hi / y.hi;
        fast_two_sum(th, tl)
    }
}

/// Minimal complex number over [`Wide`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Wide> Cx<T> {
    pub fn of(re: f64, im: f64) -> Self {
        Cx { re: T::of(re), im: T::of(im) }
    }

    pub fn norm_f64(self) -> f64 {
        self.re.f64().hypot(self.im.f64())
    }

    pub fn scale(self, s: T) -> Self {
        Cx { re: self.re * s, im: self.im * s }
    }

    pub fn add(self, z: Self) -> Self {
        Cx { re: self.re + z.re, im: self.im + z.im }
    }

    pub fn sub_real(self, s: T) -> Self {
        Cx { re: self.re - s, im: self.im }
    }

    pub fn mul(self, z: Self) -> Self {
        Cx { re: self.re * z.re - self.im * z.im, im: self.re * z.im + self.im * z.re }
    }

    pub fn recip(self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        Cx { re: self.re / d, im: -self.im / d }
    }

    pub fn powi(self, e: i32) -> Self {
        let mut base = if e < 0 { self.recip() } else { self };
        let mut e = e.unsigned_abs();
        let mut acc = Cx::of(1.0, 0.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(x: Dd, want_hi: f64, want_lo: f64) -> f64 {
        ((x.hi - want_hi) + (x.lo - want_lo)).abs()
    }

    #[test]
    fn thirds_round_trip() {
        let third = Dd::of(1.0) / Dd::of(3.0);
        assert!(err(third * Dd::of(3.0), 1.0, 0.0) < 1e-31);
        assert!(err(third + third + third, 1.0, 0.0) < 1e-31);
    }

    #[test]
    fn recovers_bits_lost_in_binary64() {
        let big = Dd::of(1e17);
        let s = (big + Dd::of(1.0)) - big;
        assert_eq!(s.f64(), 1.0);
        let p = Dd::of(1.0 + f64::EPSILON) * Dd::of(1.0 - f64::EPSILON);
        assert_eq!(p.lo, -f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn powi_and_complex_inverse() {
        assert!(err(Dd::of(0.9).powi(-8) * Dd::of(0.9).powi(8), 1.0, 0.0) < 1e-30);
        let z = Cx::<Dd>::of(0.3, -0.7);
        let one = z.mul(z.recip());
        assert!((one.re.f64() - 1.0).abs() < 1e-30 && one.im.f64().abs() < 1e-30);
        let w = z.powi(-3).mul(z.powi(3));
        assert!((w.re.f64() - 1.0).abs() < 1e-29);
    }
}
