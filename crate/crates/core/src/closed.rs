//! The finite closed form
//!
//! ```text
//! S_n(x) = k! [2]_q^(1-k) / a^b (1/(1-q))^(n-k)
//!          * sum_{l=k}^{n} C(n,l) C(l,k) (-1)^(l-k) q^((l-k)x) / (beta^b q^(l-k) - a^b)
//! ```
//!
//! in two variants: `Printed` exactly as above, and `Corrected`, the same
//! sum multiplied by `a^b` (the value obtained by re-summing the geometric
//! series `sum_m (beta^b/a^b)^m q^(lm) = a^b / (a^b - beta^b q^l)`).
//!
//! The alternating binomial sum cancels badly for `q` near 1, so the
//! floating-point entry point escalates from binary64 to double-double to
//! exact rationals until its running error bound fits the budget.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dd::{Cx, Dd, Wide};
use crate::error::{Error, Result};
use crate::exact::{rational_from_f64, rational_powi, rational_to_f64, ExactParams, ExactScalar};
use crate::qcore::{binomial_q, factorial, q_number_unchecked, ApproxValue, EvalPoint, Method, ModelParams};

/// Which prefactor of the closed form to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedVariant {
    Printed,
    Corrected,
}

impl ClosedVariant {
    pub const ALL: [ClosedVariant; 2] = [ClosedVariant::Printed, ClosedVariant::Corrected];

    pub fn as_str(self) -> &'static str {
        match self {
            ClosedVariant::Printed => "printed",
            ClosedVariant::Corrected => "corrected",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ClosedVariant::Printed => "finite sum with prefactor k! [2]_q^(1-k) / a^b, as typeset",
            ClosedVariant::Corrected => "printed closed form multiplied by a^b",
        }
    }

    pub fn method(self) -> Method {
        match self {
            ClosedVariant::Printed => Method::ClosedPrinted,
            ClosedVariant::Corrected => Method::ClosedCorrected,
        }
    }
}

/// Raw inputs of the finite sum. `q` may be any rational other than 0 and 1
/// (the symmetry audit substitutes `1/q`), and `w` stands for `q^x`.
pub(crate) struct ClosedTerms<'a> {
    pub q: &'a BigRational,
    pub w: &'a BigRational,
    pub beta_b: &'a ExactScalar,
    pub a_b: &'a BigRational,
    pub k: u32,
}

pub(crate) enum PoleTest {
    Exact,
    /// Relative distance to the pole, measured against |a^b|.
    Relative(f64),
}

pub(crate) struct ClosedEval {
    pub value: ExactScalar,
    /// d value / d w, present when requested.
    pub dw: Option<ExactScalar>,
}

pub(crate) fn closed_kernel(
    t: &ClosedTerms<'_>,
    n: u32,
    variant: ClosedVariant,
    pole: PoleTest,
    want_dw: bool,
) -> Result<ClosedEval> {
    let k = t.k;
    if n < k {
        return Ok(ClosedEval { value: ExactScalar::zero(), dw: want_dw.then(ExactScalar::zero) });
    }
    let one = BigRational::one();
    if *t.q == one || t.q.is_zero() {
        return Err(Error::domain("closed form needs q not in {0, 1}"));
    }
    let two_q = &one + t.q;
    let mut front = BigRational::from_integer(BigInt::from(factorial(k as u64)))
        * rational_powi(&two_q, 1 - k as i64)?
        * rational_powi(&(&one - t.q).recip(), (n - k) as i64)?;
    if variant == ClosedVariant::Printed {
        front /= t.a_b;
    }
    let a_b_abs = rational_to_f64(t.a_b).abs();
    let mut sum = ExactScalar::zero();
    let mut dsum = ExactScalar::zero();
    let mut q_pow = BigRational::one(); // q^(l-k)
    let mut w_pow = BigRational::one(); // w^(l-k)
    let mut w_pow_prev = BigRational::zero(); // w^(l-k-1), 0 for l = k
    for l in k..=n {
        let j = l - k;
        let den = t.beta_b.scale(&q_pow) - ExactScalar::real(t.a_b.clone());
        let is_pole = match pole {
            PoleTest::Exact => den.is_zero(),
            PoleTest::Relative(eps) => den.is_zero() || den.abs_f64() < eps * a_b_abs,
        };
        if is_pole {
            return Err(Error::PoleAtDenominator { l });
        }
        let inv = den.recip()?;
        let mut c = binomial_q(n as u64, l as i64) * binomial_q(l as u64, k as i64);
        if j % 2 == 1 {
            c = -c;
        }
        sum = sum + inv.scale(&(&c * &w_pow));
        if want_dw && j > 0 {
            let cj = &c * BigRational::from_integer(BigInt::from(j));
            dsum = dsum + inv.scale(&(cj * &w_pow_prev));
        }
        q_pow *= t.q;
        w_pow_prev = w_pow.clone();
        w_pow *= t.w;
    }
    Ok(ClosedEval {
        value: sum.scale(&front),
        dw: want_dw.then(|| dsum.scale(&front)),
    })
}

/// `q^x` exactly when `x` is a small non-negative integer.
fn exact_q_pow(q: &BigRational, x: f64) -> Result<Option<BigRational>> {
    if x.fract() == 0.0 && x <= 4096.0 {
        Ok(Some(rational_powi(q, x as i64)?))
    } else {
        Ok(None)
    }
}

/// Relative rounding budget of [`s_poly_closed`].
pub const CLOSED_REL_BUDGET: f64 = 1e-13;

/// Floating-point production evaluator of the closed form.
///
/// Valid wherever the denominators are nonzero, including `|(beta/a)^b| >= 1`
/// where the defining series diverges and the finite sum is its analytic
/// continuation. The alternating sum cancels badly as `q -> 1`, so it is
/// tried in binary64, then in double-double, each with a running error
/// bound; when both bounds exceed [`CLOSED_REL_BUDGET`] the sum is redone in
/// exact rational arithmetic over the binary values of the inputs.
pub fn s_poly_closed(p: &ModelParams, pt: &EvalPoint, variant: ClosedVariant) -> Result<ApproxValue> {
    if pt.n < p.k {
        return Ok(ApproxValue::exact_zero(variant.method()));
    }
    if let Some(v) = closed_float::<f64>(p, pt, variant)? {
        return Ok(v);
    }
    if let Some(v) = closed_float::<Dd>(p, pt, variant)? {
        return Ok(v);
    }
    closed_via_exact(p, pt, variant)
}

fn closed_float<T: Wide>(p: &ModelParams, pt: &EvalPoint, variant: ClosedVariant) -> Result<Option<ApproxValue>> {
    let (n, k) = (pt.n, p.k);
    let big_n = n - k;
    let one = T::of(1.0);
    let q = T::of(p.q);
    let beta_b = Cx::<T>::of(p.beta.re, p.beta.im).powi(p.b);
    let a_b = T::of(p.a).powi(p.b);
    let w = T::of(p.q.powf(pt.x));
    let fact = rational_to_f64(&BigRational::from_integer(BigInt::from(factorial(k as u64))));
    let mut front = T::of(fact) * (one + q).powi(1 - k as i32) * (one - q).powi(-(big_n as i32));
    if variant == ClosedVariant::Printed {
        front = front / a_b;
    }
    let mut sum = Cx::<T>::of(0.0, 0.0);
    let mut dsum = sum;
    let (mut abs_sum, mut abs_dw) = (0.0, 0.0);
    let (mut q_pow, mut w_pow) = (one, one);
    let a_b_abs = a_b.f64().abs();
    for l in k..=n {
        let j = l - k;
        let den = beta_b.scale(q_pow).sub_real(a_b);
        if !(den.norm_f64() >= 1e-14 * a_b_abs) {
            return Err(Error::PoleAtDenominator { l });
        }
        let c = rational_to_f64(&(binomial_q(n as u64, l as i64) * binomial_q(l as u64, k as i64)));
        let c = if j % 2 == 1 { -c } else { c };
        let t = den.recip().scale(w_pow * T::of(c));
        sum = sum.add(t);
        abs_sum += t.norm_f64();
        if j > 0 {
            dsum = dsum.add(t.scale(T::of(j as f64)));
            abs_dw += j as f64 * t.norm_f64();
        }
        q_pow = q_pow * q;
        w_pow = w_pow * w;
    }
    let to64 = |z: Cx<T>| Complex64::new(z.re.f64(), z.im.f64());
    let front_abs = front.f64().abs();
    let value = to64(sum.scale(front));
    let ops = (2 * (p.b.unsigned_abs() + big_n) + 24) as f64;
    let gamma = 1.01 * T::UNIT * (ops + big_n as f64);
    let mut bound = gamma * (front_abs * abs_sum + value.norm()) + f64::EPSILON * value.norm();
    if pt.x.fract() != 0.0 {
        // w = powf(q, x) is within 2 ulp; dS/dw * w = front * sum_j j t_j
        let dw = front_abs * (to64(dsum).norm() + gamma * abs_dw);
        bound += 2.0 * f64::EPSILON * dw;
    }
    if !(value.is_finite() && bound <= CLOSED_REL_BUDGET * value.norm()) {
        return Ok(None);
    }
    let method = variant.method();
    Ok(Some(ApproxValue { value, abs_error_bound: bound, method, terms_used: (big_n + 1) as u64 }))
}

fn closed_via_exact(p: &ModelParams, pt: &EvalPoint, variant: ClosedVariant) -> Result<ApproxValue> {
    let q = rational_from_f64(p.q)?;
    let (w, w_exact) = match exact_q_pow(&q, pt.x)? {
        Some(w) => (w, true),
        None => (rational_from_f64(p.q.powf(pt.x))?, false),
    };
    let beta_b = ExactScalar::from_complex64(p.beta)?.powi(p.b as i64)?;
    let a_b = rational_powi(&rational_from_f64(p.a)?, p.b as i64)?;
    let terms = ClosedTerms { q: &q, w: &w, beta_b: &beta_b, a_b: &a_b, k: p.k };
    let eval = closed_kernel(&terms, pt.n, variant, PoleTest::Relative(1e-14), !w_exact)?;
    let value = eval.value.to_complex64();
    let mut bound = 2.0 * f64::EPSILON * value.norm();
    if let Some(dw) = eval.dw {
        bound += dw.abs_f64() * rational_to_f64(&w).abs() * 4.0 * f64::EPSILON;
    }
    Ok(ApproxValue {
        value,
        abs_error_bound: bound,
        method: Method::ExactDowncast,
        terms_used: (pt.n - p.k + 1) as u64,
    })
}

/// Exact closed form at integer `x >= 0`.
pub fn s_poly_exact(p: &ExactParams, n: u32, x: u32, variant: ClosedVariant) -> Result<ExactScalar> {
    let w = rational_powi(&p.q, x as i64)?;
    s_exact_at(p, n, &w, variant)
}

/// Exact closed form with `q^x` supplied directly as `w`.
pub(crate) fn s_exact_at(p: &ExactParams, n: u32, w: &BigRational, variant: ClosedVariant) -> Result<ExactScalar> {
    let beta_b = p.beta_pow_b();
    let a_b = p.a_pow_b();
    let terms = ClosedTerms { q: &p.q, w, beta_b: &beta_b, a_b: &a_b, k: p.k };
    Ok(closed_kernel(&terms, n, variant, PoleTest::Exact, false)?.value)
}

/// The numbers `S_0..=S_{n_max}` (polynomials at `x = 0`).
pub fn s_numbers(p: &ModelParams, n_max: u32, variant: ClosedVariant) -> Result<Vec<ApproxValue>> {
    (0..=n_max)
        .map(|n| s_poly_closed(p, &EvalPoint { n, x: 0.0 }, variant))
        .collect()
}

pub fn s_numbers_exact(p: &ExactParams, n_max: u32, variant: ClosedVariant) -> Result<Vec<ExactScalar>> {
    let w = BigRational::one();
    (0..=n_max).map(|n| s_exact_at(p, n, &w, variant)).collect()
}

/// Which form of the expansion in numbers to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionVariant {
    /// `sum_l C(n,l) q^(lx) S_l [x]_q^(n-l)` as stated.
    Printed,
    /// The same sum times `q^(-kx)`.
    Corrected,
}

impl ExpansionVariant {
    pub const ALL: [ExpansionVariant; 2] = [ExpansionVariant::Printed, ExpansionVariant::Corrected];

    pub fn as_str(self) -> &'static str {
        match self {
            ExpansionVariant::Printed => "printed",
            ExpansionVariant::Corrected => "corrected",
        }
    }
}

/// `S_n(x)` rebuilt from the numbers `S_l = S_l(0)`; the numbers come from
/// the closed form in variant `closed`.
pub fn expand_from_numbers(
    p: &ModelParams,
    pt: &EvalPoint,
    closed: ClosedVariant,
    variant: ExpansionVariant,
) -> Result<ApproxValue> {
    let numbers = s_numbers(p, pt.n, closed)?;
    let qx = q_number_unchecked(pt.x, p.q);
    let n = pt.n as u64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut abs_sum = 0.0;
    for (l, s) in numbers.iter().enumerate() {
        let c = rational_to_f64(&binomial_q(n, l as i64)) * p.q.powf(l as f64 * pt.x) * qx.powi((n - l as u64) as i32);
        let term = s.value * c;
        sum += term;
        abs_sum += term.norm();
        bound += c.abs() * s.abs_error_bound;
    }
    bound += 4.0 * (n + 2) as f64 * f64::EPSILON * abs_sum;
    if variant == ExpansionVariant::Corrected {
        let f = p.q.powf(-(p.k as f64) * pt.x);
        sum *= f;
        bound *= f;
    }
    Ok(ApproxValue { value: sum, abs_error_bound: bound, method: closed.method(), terms_used: n + 1 })
}

/// Exact expansion in numbers at integer `x`.
pub fn expand_from_numbers_exact(
    p: &ExactParams,
    n: u32,
    x: u32,
    closed: ClosedVariant,
    variant: ExpansionVariant,
) -> Result<ExactScalar> {
    let numbers = s_numbers_exact(p, n, closed)?;
    let qx = crate::qcore::q_number_exact(x, &p.q)?;
    let w = rational_powi(&p.q, x as i64)?;
    let mut sum = ExactScalar::zero();
    let mut w_pow = BigRational::one();
    for (l, s) in numbers.iter().enumerate() {
        let c = binomial_q(n as u64, l as i64) * &w_pow * rational_powi(&qx, (n as usize - l) as i64)?;
        sum = sum + s.scale(&c);
        w_pow *= &w;
    }
    if variant == ExpansionVariant::Corrected {
        sum = sum.scale(&rational_powi(&w, -(p.k as i64))?);
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;
    use crate::series::{s_poly_series, SeriesConfig};

    fn exact(q: (i64, i64), beta: (i64, i64), a: (i64, i64), b: i32, k: u32) -> ExactParams {
        ExactParams::new(
            rational(q.0, q.1),
            ExactScalar::real(rational(beta.0, beta.1)),
            rational(a.0, a.1),
            b,
            k,
        )
        .unwrap()
    }

    #[test]
    fn single_term_case() {
        let p = ModelParams::real_beta(0.5, 1.0 / 3.0, 1.0, 1, 1).unwrap();
        for v in ClosedVariant::ALL {
            let r = s_poly_closed(&p, &EvalPoint::new(1, 0.0).unwrap(), v).unwrap();
            assert!((r.value.re + 1.5).abs() < 1e-15);
        }
        let e = exact((1, 2), (1, 3), (1, 1), 1, 1);
        for v in ClosedVariant::ALL {
            assert_eq!(s_poly_exact(&e, 1, 0, v).unwrap(), ExactScalar::real(rational(-3, 2)));
        }
    }

    #[test]
    fn pole_detection() {
        let p = ModelParams::real_beta(0.5, 1.0, 1.0, 1, 1).unwrap();
        let err = s_poly_closed(&p, &EvalPoint::new(1, 0.0).unwrap(), ClosedVariant::Printed).unwrap_err();
        assert_eq!(err, Error::PoleAtDenominator { l: 1 });
        let e = exact((1, 2), (2, 1), (1, 1), 1, 1);
        // beta q^(l-k) = a at l - k = 1
        assert_eq!(s_poly_exact(&e, 3, 0, ClosedVariant::Corrected), Err(Error::PoleAtDenominator { l: 2 }));
        // below the pole index the sum is still finite
        assert!(s_poly_exact(&e, 1, 0, ClosedVariant::Corrected).is_ok());
    }

    #[test]
    fn empty_sum_below_order() {
        let e = exact((1, 3), (1, 5), (2, 1), 1, 1);
        assert!(s_poly_exact(&e, 0, 4, ClosedVariant::Printed).unwrap().is_zero());
        let e3 = exact((1, 3), (1, 5), (2, 1), 2, 3);
        for n in 0..3 {
            for v in ClosedVariant::ALL {
                assert!(s_poly_exact(&e3, n, 2, v).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn variants_differ_by_a_pow_b() {
        let e = exact((1, 2), (1, 3), (2, 1), 1, 1);
        let pr = s_poly_exact(&e, 2, 1, ClosedVariant::Printed).unwrap();
        let co = s_poly_exact(&e, 2, 1, ClosedVariant::Corrected).unwrap();
        assert!(!pr.is_zero());
        assert_eq!(co, pr.scale(&rational(2, 1)));
    }

    #[test]
    fn closed_matches_series_at_a_equal_one() {
        let p = ModelParams::real_beta(0.5, 0.3, 1.0, 1, 1).unwrap();
        let pt = EvalPoint::new(3, 0.25).unwrap();
        let s = s_poly_series(&p, &pt, &SeriesConfig::default()).unwrap().value.value;
        for v in ClosedVariant::ALL {
            let c = s_poly_closed(&p, &pt, v).unwrap();
            assert!((c.value - s).norm() <= 1e-10, "{v:?}");
        }
    }

    #[test]
    fn numbers() {
        let p = ModelParams::real_beta(0.5, 1.0 / 3.0, 1.0, 1, 1).unwrap();
        let nums = s_numbers(&p, 1, ClosedVariant::Printed).unwrap();
        assert_eq!(nums[0].value, Complex64::new(0.0, 0.0));
        assert!((nums[1].value.re + 1.5).abs() < 1e-15);
        let nums = s_numbers(&p, 4, ClosedVariant::Corrected).unwrap();
        for (n, v) in nums.iter().enumerate() {
            let s = s_poly_series(&p, &EvalPoint::new(n as u32, 0.0).unwrap(), &SeriesConfig::default()).unwrap();
            assert!((v.value - s.value.value).norm() <= 1e-10);
        }
    }

    #[test]
    fn expansion_at_zero_and_order_zero() {
        let p = ModelParams::real_beta(0.3, -0.2, 1.5, 2, 2).unwrap();
        for n in 0..6 {
            let direct = s_poly_closed(&p, &EvalPoint::new(n, 0.0).unwrap(), ClosedVariant::Corrected).unwrap();
            for v in ExpansionVariant::ALL {
                let e = expand_from_numbers(&p, &EvalPoint::new(n, 0.0).unwrap(), ClosedVariant::Corrected, v).unwrap();
                assert!((e.value - direct.value).norm() <= 1e-12 * direct.value.norm().max(1.0));
            }
        }
        let e = exact((1, 2), (1, 3), (1, 1), 1, 1);
        for v in ExpansionVariant::ALL {
            assert!(expand_from_numbers_exact(&e, 0, 3, ClosedVariant::Corrected, v).unwrap().is_zero());
        }
    }

    #[test]
    fn expansion_adjudicated_exactly() {
        let e = exact((1, 2), (1, 3), (1, 1), 1, 1);
        let direct = s_poly_exact(&e, 2, 1, ClosedVariant::Corrected).unwrap();
        let agree: Vec<_> = ExpansionVariant::ALL
            .into_iter()
            .filter(|&v| expand_from_numbers_exact(&e, 2, 1, ClosedVariant::Corrected, v).unwrap() == direct)
            .collect();
        assert_eq!(agree.len(), 1);
    }

    #[test]
    fn every_precision_tier_agrees_with_exact() {
        let params = [
            ModelParams::real_beta(0.5, 0.3, 1.0, 1, 1).unwrap(),
            ModelParams::real_beta(0.2, -0.9, 0.5, -2, 2).unwrap(),
            ModelParams::new(0.9, Complex64::new(0.2, 0.1), 2.0, 3, 1).unwrap(),
            ModelParams::real_beta(0.9, 0.1, 1.0, 3, 1).unwrap(),
            ModelParams::real_beta(0.99, 0.5, 1.0, 1, 1).unwrap(),
        ];
        for p in &params {
            for n in p.k..=12 {
                for x in [0.0, 0.25, 1.0, 2.5] {
                    let pt = EvalPoint::new(n, x).unwrap();
                    for v in ClosedVariant::ALL {
                        let slow = closed_via_exact(p, &pt, v).unwrap();
                        let tiers = [
                            closed_float::<f64>(p, &pt, v).unwrap(),
                            closed_float::<Dd>(p, &pt, v).unwrap(),
                        ];
                        for r in tiers.into_iter().flatten() {
                            let tol = r.abs_error_bound + slow.abs_error_bound;
                            assert!((r.value - slow.value).norm() <= tol, "{p:?} {pt:?} {v:?} {r:?} {slow:?}");
                            assert!(r.abs_error_bound <= CLOSED_REL_BUDGET * r.value.norm());
                        }
                    }
                }
            }
        }
        // q = 0.99 cancels past binary64 at n = 6 and past double-double at n = 12
        let p = &params[4];
        let pt = EvalPoint::new(6, 0.0).unwrap();
        assert!(closed_float::<f64>(p, &pt, ClosedVariant::Corrected).unwrap().is_none());
        assert!(closed_float::<Dd>(p, &pt, ClosedVariant::Corrected).unwrap().is_some());
        let pt = EvalPoint::new(12, 0.0).unwrap();
        assert!(closed_float::<Dd>(p, &pt, ClosedVariant::Corrected).unwrap().is_none());
        assert_eq!(s_poly_closed(p, &pt, ClosedVariant::Corrected).unwrap().method, Method::ExactDowncast);
    }

    #[test]
    fn non_integer_x_error_bound_is_small() {
        let p = ModelParams::real_beta(0.9, 0.1, 1.0, 3, 1).unwrap();
        let r = s_poly_closed(&p, &EvalPoint::new(8, 2.5).unwrap(), ClosedVariant::Corrected).unwrap();
        assert!(r.abs_error_bound <= 1e-12 * r.value.norm());
    }
}
