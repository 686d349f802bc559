//! q-numbers, integer combinatorics and the shared parameter/value types.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// The fixed symbols `(q, beta, a, b, k)` of the generating function.
///
/// `q` is real in `(0, 1)`, `b` a nonzero integer so that `a^b` and
/// `beta^b` are single valued, and `k >= 1` the order of the `t^k` factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub q: f64,
    pub beta: Complex64,
    pub a: f64,
    pub b: i32,
    pub k: u32,
}

impl ModelParams {
    pub fn new(q: f64, beta: Complex64, a: f64, b: i32, k: u32) -> Result<Self> {
        check_q(q)?;
        if k == 0 {
            return Err(Error::domain("k must be >= 1"));
        }
        if !a.is_finite() || a == 0.0 {
            return Err(Error::domain(format!("a = {a} must be finite and nonzero")));
        }
        if b == 0 {
            return Err(Error::domain("b must be nonzero"));
        }
        if !beta.is_finite() || beta == Complex64::new(0.0, 0.0) {
            return Err(Error::domain(format!("beta = {beta} must be finite and nonzero")));
        }
        Ok(ModelParams { q, beta, a, b, k })
    }

    pub fn real_beta(q: f64, beta: f64, a: f64, b: i32, k: u32) -> Result<Self> {
        ModelParams::new(q, Complex64::new(beta, 0.0), a, b, k)
    }

    /// r = (beta/a)^b, the geometric ratio of the defining series.
    pub fn ratio(&self) -> Complex64 {
        (self.beta / self.a).powi(self.b)
    }

    /// `[2]_q^(1-k)`.
    pub fn two_factor(&self) -> f64 {
        (1.0 + self.q).powi(1 - self.k as i32)
    }

    /// `a^(-b)`.
    pub fn a_inv_pow_b(&self) -> f64 {
        self.a.powi(-self.b)
    }

    /// Errors unless the defining series converges, returning |r|.
    pub fn convergent_ratio(&self) -> Result<f64> {
        let r = self.ratio().norm();
        if r < 1.0 {
            Ok(r)
        } else {
            Err(Error::NotConvergent { ratio: r })
        }
    }
}

/// Polynomial order `n` and argument `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    pub n: u32,
    pub x: f64,
}

impl EvalPoint {
    pub fn new(n: u32, x: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::domain(format!("x = {x} must be finite and >= 0")));
        }
        Ok(EvalPoint { n, x })
    }
}

/// How an [`ApproxValue`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Series,
    ClosedPrinted,
    ClosedCorrected,
    ExactDowncast,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::ClosedPrinted => "closed_printed",
            Method::ClosedCorrected => "closed_corrected",
            Method::ExactDowncast => "exact_downcast",
        }
    }
}

/// A complex value with a rigorous absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxValue {
    pub value: Complex64,
    pub abs_error_bound: f64,
    pub method: Method,
    pub terms_used: u64,
}

impl ApproxValue {
    pub fn exact_zero(method: Method) -> Self {
        ApproxValue { value: Complex64::new(0.0, 0.0), abs_error_bound: 0.0, method, terms_used: 0 }
    }
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("q = {q} must lie in (0, 1)")))
    }
}

/// The q-number `[x]_q = (1 - q^x)/(1 - q)`.
pub fn q_number(x: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(q_number_unchecked(x, q))
}

// expm1 keeps full relative accuracy for small x and for q close to 1.
#[inline]
pub(crate) fn q_number_unchecked(x: f64, q: f64) -> f64 {
    -(x * q.ln()).exp_m1() / (1.0 - q)
}

/// `[x]_q = 1 + q + ... + q^(x-1)` for integer `x` and rational `q`.
pub fn q_number_exact(x: u32, q: &BigRational) -> Result<BigRational> {
    if !(q.is_positive() && *q < BigRational::one()) {
        return Err(Error::domain(format!("q = {q} must lie in (0, 1)")));
    }
    let mut sum = BigRational::zero();
    let mut pow = BigRational::one();
    for _ in 0..x {
        sum += &pow;
        pow *= q;
    }
    Ok(sum)
}

/// Binomial coefficient; zero outside `0 <= l <= n`.
pub fn binomial(n: u64, l: i64) -> BigUint {
    if l < 0 || l as u64 > n {
        return BigUint::zero();
    }
    let l = (l as u64).min(n - l as u64);
    let mut acc = BigUint::one();
    for i in 0..l {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `n!/(n-k)! = n (n-1) ... (n-k+1)`.
pub fn falling_ratio(n: u64, k: u64) -> Result<BigUint> {
    if n < k {
        return Err(Error::domain(format!("falling_ratio needs n >= k, got n = {n}, k = {k}")));
    }
    Ok(((n - k + 1)..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i)))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub(crate) fn binomial_q(n: u64, l: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rational, rational_to_f64};
    use proptest::prelude::*;

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(0.0, 0.5).unwrap(), 0.0);
        assert!((q_number(1.0, 0.7).unwrap() - 1.0).abs() < 1e-15);
        assert!((q_number(2.0, 0.5).unwrap() - 1.5).abs() < 1e-15);
        assert!(matches!(q_number(1.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(q_number(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(q_number(1.0, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn q_number_exact_examples() {
        assert_eq!(q_number_exact(3, &rational(1, 2)).unwrap(), rational(7, 4));
        assert_eq!(q_number_exact(0, &rational(1, 3)).unwrap(), rational(0, 1));
        assert_eq!(q_number_exact(1, &rational(2, 3)).unwrap(), rational(1, 1));
        assert!(q_number_exact(2, &rational(3, 2)).is_err());
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(4, 7), BigUint::zero());
        assert_eq!(binomial(4, -1), BigUint::zero());
        // C(n,k) C(n-k,l) = C(n,k+l) C(k+l,k)
        assert_eq!(binomial(6, 2) * binomial(4, 1), BigUint::from(60u32));
        assert_eq!(binomial(6, 3) * binomial(3, 2), BigUint::from(60u32));
    }

    #[test]
    fn binomial_symmetry_and_pascal() {
        for n in 1..=64u64 {
            for l in 0..=n as i64 {
                assert_eq!(binomial(n, l), binomial(n, n as i64 - l));
                assert_eq!(binomial(n, l), binomial(n - 1, l - 1) + binomial(n - 1, l));
            }
        }
    }

    #[test]
    fn falling_ratio_examples() {
        assert_eq!(falling_ratio(5, 2).unwrap(), BigUint::from(20u32));
        assert_eq!(falling_ratio(3, 3).unwrap(), BigUint::from(6u32));
        for k in 0..10 {
            assert_eq!(falling_ratio(k, k).unwrap(), factorial(k));
        }
        assert!(falling_ratio(2, 3).is_err());
    }

    #[test]
    fn q_number_exact_matches_float() {
        for (p, d) in [(1, 2), (1, 3), (3, 4), (9, 10), (99, 100)] {
            let q = rational(p, d);
            let qf = rational_to_f64(&q);
            for x in 0..40u32 {
                let e = rational_to_f64(&q_number_exact(x, &q).unwrap());
                let f = q_number(x as f64, qf).unwrap();
                assert!((e - f).abs() <= 1e-15 * e.abs().max(1e-300) + 1e-300, "x={x} q={qf}");
            }
        }
    }

    #[test]
    fn exact_shift_rule() {
        let q = rational(2, 5);
        for x in 0..8u32 {
            for m in 0..8u32 {
                let lhs = q_number_exact(m + x, &q).unwrap();
                let qx = crate::exact::rational_powi(&q, x as i64).unwrap();
                let rhs = q_number_exact(x, &q).unwrap() + qx * q_number_exact(m, &q).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn model_params_validation() {
        assert!(ModelParams::real_beta(0.5, 0.3, 1.0, 1, 1).is_ok());
        assert!(ModelParams::real_beta(1.0, 0.3, 1.0, 1, 1).is_err());
        assert!(ModelParams::real_beta(0.5, 0.0, 1.0, 1, 1).is_err());
        assert!(ModelParams::real_beta(0.5, 0.3, 0.0, 1, 1).is_err());
        assert!(ModelParams::real_beta(0.5, 0.3, 1.0, 0, 1).is_err());
        assert!(ModelParams::real_beta(0.5, 0.3, 1.0, 1, 0).is_err());
        assert!(EvalPoint::new(2, -0.1).is_err());
    }

    proptest! {
        #[test]
        fn shift_rule(x in 0.0f64..20.0, m in 0u32..50, q in 0.01f64..0.99) {
            let lhs = q_number(m as f64 + x, q).unwrap();
            let rhs = q_number(x, q).unwrap() + q.powf(x) * q_number(m as f64, q).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
        }

        #[test]
        fn successor_rule(x in 0.0f64..50.0, q in 0.01f64..0.99) {
            let lhs = q_number(x + 1.0, q).unwrap();
            let rhs = 1.0 + q * q_number(x, q).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
        }

        #[test]
        fn bounded_and_increasing(x in 0.0f64..200.0, dx in 1e-3f64..10.0, q in 0.01f64..0.99) {
            let a = q_number(x, q).unwrap();
            let b = q_number(x + dx, q).unwrap();
            prop_assert!(a <= b);
            prop_assert!(b <= 1.0 / (1.0 - q));
        }
    }
}
