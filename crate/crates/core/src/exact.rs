//! Exact complex-rational scalars and the exact-mode parameter tuple.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::qcore::ModelParams;

/// A complex number with arbitrary-precision rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar(Complex<BigRational>);

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar(Complex::new(re, im))
    }

    pub fn real(re: BigRational) -> Self {
        ExactScalar::new(re, BigRational::zero())
    }

    pub fn from_integer(n: i64) -> Self {
        ExactScalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact image of a binary floating-point complex number.
    pub fn from_complex64(z: Complex64) -> Result<Self> {
        Ok(ExactScalar::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    pub fn zero() -> Self {
        ExactScalar::real(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::real(BigRational::one())
    }

    /// |z|^2, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.0.re * &self.0.re + &self.0.im * &self.0.im
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        ExactScalar::new(&self.0.re * r, &self.0.im * r)
    }

    pub fn checked_div(&self, rhs: &ExactScalar) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactScalar(self.0.clone() / rhs.0.clone()))
    }

    pub fn recip(&self) -> Result<Self> {
        ExactScalar::one().checked_div(self)
    }

    /// Integer power; negative exponents invert (errors on 0^-n).
    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = ExactScalar::one();
        let mut sq = base;
        let mut m = e.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc * &sq;
            }
            m >>= 1;
            if m > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Nearest binary64 complex value (each part rounded independently).
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.0.re), rational_to_f64(&self.0.im))
    }

    /// Euclidean magnitude, rounded to binary64.
    pub fn abs_f64(&self) -> f64 {
        self.to_complex64().norm()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im.is_zero() {
            write!(f, "{}", self.0.re)
        } else if self.0.im.is_negative() {
            write!(f, "{}-{}i", self.0.re, -self.0.im.clone())
        } else {
            write!(f, "{}+{}i", self.0.re, self.0.im)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl<'a> $tr<&'a ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                ExactScalar($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                ExactScalar($tr::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar(-self.0)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        ExactScalar::real(r)
    }
}

pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(format!("non-finite value {x}")))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer power of a rational; negative exponents invert.
pub fn rational_powi(r: &BigRational, e: i64) -> Result<BigRational> {
    if e < 0 && r.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let base = if e < 0 { r.recip() } else { r.clone() };
    let mut acc = BigRational::one();
    let mut sq = base;
    let mut m = e.unsigned_abs();
    while m > 0 {
        if m & 1 == 1 {
            acc *= &sq;
        }
        m >>= 1;
        if m > 0 {
            sq = &sq * &sq;
        }
    }
    Ok(acc)
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125` or `1e-3`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all).ok()?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    value *= rational_powi(&ten, shift as i64).ok()?;
    Some(if neg { -value } else { value })
}

/// Exact-mode mirror of [`ModelParams`]: every field rational.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactParams {
    pub q: BigRational,
    pub beta: ExactScalar,
    pub a: BigRational,
    pub b: i32,
    pub k: u32,
}

impl ExactParams {
    pub fn new(q: BigRational, beta: ExactScalar, a: BigRational, b: i32, k: u32) -> Result<Self> {
        if !(q.is_positive() && q < BigRational::one()) {
            return Err(Error::domain(format!("q = {q} must lie in (0, 1)")));
        }
        if k == 0 {
            return Err(Error::domain("k must be >= 1"));
        }
        if a.is_zero() {
            return Err(Error::domain("a must be nonzero"));
        }
        if b == 0 {
            return Err(Error::domain("b must be nonzero"));
        }
        if beta.is_zero() {
            return Err(Error::domain("beta must be nonzero"));
        }
        Ok(ExactParams { q, beta, a, b, k })
    }

    /// beta^b, exact.
    pub fn beta_pow_b(&self) -> ExactScalar {
        self.beta.powi(self.b as i64).expect("beta is nonzero")
    }

    /// a^b, exact.
    pub fn a_pow_b(&self) -> BigRational {
        rational_powi(&self.a, self.b as i64).expect("a is nonzero")
    }

    /// r = (beta/a)^b.
    pub fn ratio(&self) -> ExactScalar {
        let a_b = self.a_pow_b();
        self.beta_pow_b().scale(&a_b.recip())
    }

    /// Nearest floating-point parameter tuple.
    pub fn to_model(&self) -> Result<ModelParams> {
        ModelParams::new(
            rational_to_f64(&self.q),
            self.beta.to_complex64(),
            rational_to_f64(&self.a),
            self.b,
            self.k,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/3"), Some(rational(1, 3)));
        assert_eq!(parse_rational("-0.125"), Some(rational(-1, 8)));
        assert_eq!(parse_rational("2"), Some(rational(2, 1)));
        assert_eq!(parse_rational("1e-3"), Some(rational(1, 1000)));
        assert_eq!(parse_rational("2.5E1"), Some(rational(25, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn complex_division_and_powers() {
        let i = ExactScalar::new(rational(0, 1), rational(1, 1));
        assert_eq!(i.powi(2).unwrap(), ExactScalar::from_integer(-1));
        assert_eq!(i.powi(-1).unwrap(), -i.clone());
        let z = ExactScalar::new(rational(1, 2), rational(-3, 4));
        let w = z.checked_div(&z).unwrap();
        assert_eq!(w, ExactScalar::one());
        assert_eq!(z.checked_div(&ExactScalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn f64_round_trip_is_exact() {
        for x in [0.1, 1.0 / 3.0, -2.5e-7, 123456.789] {
            let r = rational_from_f64(x).unwrap();
            assert_eq!(rational_to_f64(&r), x);
        }
        assert_eq!(rational_to_f64(&rational(1, 3)), 1.0 / 3.0);
    }

    #[test]
    fn display() {
        let z = ExactScalar::new(rational(1, 2), rational(-3, 4));
        assert_eq!(z.to_string(), "1/2-3/4i");
        assert_eq!(ExactScalar::from_integer(-3).to_string(), "-3");
    }
}
