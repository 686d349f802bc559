//! Definition-first evaluation: truncated geometric-dominated series with
//! rigorous tail bounds.
//!
//! Every sum here has terms bounded by `scale * rho^m` with `rho < 1`, so
//! stopping after terms `0..=M` leaves a remainder of at most
//! `scale * rho^(M+1) / (1 - rho)`.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::qcore::{
    check_q, falling_ratio, q_number_unchecked, ApproxValue, EvalPoint, Method, ModelParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Target absolute truncation error.
    pub tol: f64,
    /// Hard cap on the number of terms summed.
    pub max_terms: u64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig { tol: 1e-12, max_terms: 10_000 }
    }
}

impl SeriesConfig {
    pub fn new(tol: f64, max_terms: u64) -> Result<Self> {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::domain(format!("tol = {tol} must be positive")));
        }
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be >= 1"));
        }
        Ok(SeriesConfig { tol, max_terms })
    }
}

/// A truncated sum. `converged == false` means the term budget ran out
/// before the tail bound fell below the tolerance (BudgetExceeded); the
/// partial sum and its honest bound are still reported.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: ApproxValue,
    pub converged: bool,
}

impl SeriesResult {
    fn exact_zero() -> Self {
        SeriesResult { value: ApproxValue::exact_zero(Method::Series), converged: true }
    }
}

/// Sums `term(m)` for `m = 0, 1, ...` until `scale * rho^(M+1)/(1-rho) <= tol`.
pub(crate) fn geometric_sum(
    scale: f64,
    rho: f64,
    cfg: &SeriesConfig,
    mut term: impl FnMut(u64) -> Complex64,
) -> SeriesResult {
    debug_assert!((0.0..1.0).contains(&rho));
    let mut sum = Complex64::new(0.0, 0.0);
    let mut rho_pow = rho; // rho^(m+1)
    let mut m = 0u64;
    loop {
        sum += term(m);
        let bound = scale * rho_pow / (1.0 - rho);
        m += 1;
        if bound <= cfg.tol || m >= cfg.max_terms || rho_pow == 0.0 {
            return SeriesResult {
                value: ApproxValue {
                    value: sum,
                    abs_error_bound: bound,
                    method: Method::Series,
                    terms_used: m,
                },
                converged: bound <= cfg.tol,
            };
        }
        rho_pow *= rho;
    }
}

/// `S_n(x)` from `-(n!/(n-k)!) [2]_q^(1-k) sum_m beta^(bm) a^(-bm-b) [m+x]_q^(n-k)`.
pub fn s_poly_series(p: &ModelParams, pt: &EvalPoint, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let rho = p.convergent_ratio()?;
    if pt.n < p.k {
        return Ok(SeriesResult::exact_zero());
    }
    let power = (pt.n - p.k) as i32;
    let coef = falling_ratio(pt.n as u64, p.k as u64)?.to_f64().unwrap_or(f64::INFINITY)
        * p.two_factor();
    let a_inv = p.a_inv_pow_b();
    let scale = coef * a_inv.abs() * (1.0 / (1.0 - p.q)).powi(power);
    let r = p.ratio();
    let mut r_pow = Complex64::new(1.0, 0.0);
    Ok(geometric_sum(scale, rho, cfg, |m| {
        let t = r_pow * (-coef * a_inv * q_number_unchecked(m as f64 + pt.x, p.q).powi(power));
        r_pow *= r;
        t
    }))
}

/// The generating function `-[2]_q^(1-k) t^k sum_m beta^(bm) a^(-bm-b) e^([m+x]_q t)`.
pub fn genfun_eval(p: &ModelParams, t: Complex64, x: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    let rho = p.convergent_ratio()?;
    EvalPoint::new(0, x)?;
    if !t.is_finite() {
        return Err(Error::domain("t must be finite"));
    }
    let tk = t.powi(p.k as i32);
    let front = -p.two_factor() * p.a_inv_pow_b() * tk;
    let scale = p.two_factor() * t.norm().powi(p.k as i32) * p.a_inv_pow_b().abs()
        * (t.norm() / (1.0 - p.q)).exp();
    let r = p.ratio();
    let mut r_pow = Complex64::new(1.0, 0.0);
    Ok(geometric_sum(scale, rho, cfg, |m| {
        let term = front * r_pow * (t * q_number_unchecked(m as f64 + x, p.q)).exp();
        r_pow *= r;
        term
    }))
}

fn alternating_reference(
    q: f64,
    ratio_power: u32,
    n: u32,
    x: f64,
    cfg: &SeriesConfig,
) -> Result<SeriesResult> {
    check_q(q)?;
    EvalPoint::new(n, x)?;
    if n == 0 {
        return Ok(SeriesResult::exact_zero());
    }
    let power = (n - 1) as i32;
    let front = n as f64 * (1.0 + q);
    let rho = q.powi(ratio_power as i32);
    let scale = front * (1.0 / (1.0 - q)).powi(power);
    let mut w = 1.0;
    Ok(geometric_sum(scale, rho, cfg, |l| {
        let t = front * w * q_number_unchecked(x + l as f64, q).powi(power);
        w *= -rho;
        Complex64::new(t, 0.0)
    }))
}

/// The q-Genocchi polynomial `G_{n,q}(x) = n [2]_q sum_l (-1)^l q^l [x+l]_q^(n-1)`.
pub fn q_genocchi_reference(q: f64, n: u32, x: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    alternating_reference(q, 1, n, x, cfg)
}

/// The (h,q)-Genocchi polynomial, with weights `(-1)^l q^((h-1) l)`.
pub fn hq_genocchi_reference(q: f64, h: u32, n: u32, x: f64, cfg: &SeriesConfig) -> Result<SeriesResult> {
    if h < 2 {
        return Err(Error::domain(format!("h = {h} must be >= 2")));
    }
    alternating_reference(q, h - 1, n, x, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    fn third() -> ModelParams {
        ModelParams::real_beta(0.5, 1.0 / 3.0, 1.0, 1, 1).unwrap()
    }

    #[test]
    fn geometric_case() {
        let r = s_poly_series(&third(), &EvalPoint::new(1, 0.0).unwrap(), &cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value.value.re + 1.5).abs() <= 1e-12);
        assert!(r.value.abs_error_bound <= 1e-12);
        assert_eq!(r.value.value.im, 0.0);
    }

    #[test]
    fn below_order_is_exact_zero() {
        let p = ModelParams::real_beta(0.5, 1.0 / 3.0, 1.0, 1, 2).unwrap();
        let r = s_poly_series(&p, &EvalPoint::new(1, 0.7).unwrap(), &cfg()).unwrap();
        assert_eq!(r.value.value, Complex64::new(0.0, 0.0));
        assert_eq!(r.value.abs_error_bound, 0.0);
    }

    #[test]
    fn boundary_ratio_diverges() {
        let p = ModelParams::real_beta(0.5, 1.0, -1.0, 1, 1).unwrap();
        let e = s_poly_series(&p, &EvalPoint::new(2, 0.0).unwrap(), &cfg()).unwrap_err();
        assert!(matches!(e, Error::NotConvergent { .. }));
        assert!(matches!(genfun_eval(&p, Complex64::new(0.1, 0.0), 0.0, &cfg()), Err(Error::NotConvergent { .. })));
    }

    #[test]
    fn budget_exceeded_still_returns() {
        let p = ModelParams::real_beta(0.5, 0.999, 1.0, 1, 1).unwrap();
        let tight = SeriesConfig::new(1e-12, 50).unwrap();
        let r = s_poly_series(&p, &EvalPoint::new(3, 0.5).unwrap(), &tight).unwrap();
        assert!(!r.converged);
        assert_eq!(r.value.terms_used, 50);
        assert!(r.value.abs_error_bound > 1e-12);
    }

    #[test]
    fn generating_function_at_zero() {
        let r = genfun_eval(&third(), Complex64::new(0.0, 0.0), 0.3, &cfg()).unwrap();
        assert_eq!(r.value.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn generating_function_direct_transcription() {
        // -0.05 * sum (1/3)^m exp([m]_{1/2} * 0.05), summed to double precision.
        let t = 0.05;
        let mut direct = 0.0;
        for m in 0..80 {
            let qm = (1.0 - 0.5f64.powi(m)) / 0.5;
            direct += (1.0f64 / 3.0).powi(m) * (qm * t).exp();
        }
        direct *= -t;
        let fine = SeriesConfig::new(1e-16, 10_000).unwrap();
        let r = genfun_eval(&third(), Complex64::new(t, 0.0), 0.0, &fine).unwrap();
        assert!((r.value.value.re - direct).abs() <= 1e-15);
    }

    #[test]
    fn q_genocchi_examples() {
        let r0 = q_genocchi_reference(0.5, 0, 0.0, &cfg()).unwrap();
        assert_eq!(r0.value.value.re, 0.0);
        let r1 = q_genocchi_reference(0.5, 1, 0.0, &cfg()).unwrap();
        assert!((r1.value.value.re - 1.0).abs() <= 1e-12);
        let h3 = hq_genocchi_reference(0.5, 3, 1, 0.0, &cfg()).unwrap();
        assert!((h3.value.value.re - 1.2).abs() <= 1e-12);
        assert!(hq_genocchi_reference(0.5, 1, 1, 0.0, &cfg()).is_err());
    }

    #[test]
    fn h2_coincides_with_q_genocchi() {
        for q in [0.2, 0.5, 0.8] {
            for n in 0..7 {
                for x in [0.0, 0.5, 1.0, 2.25] {
                    let a = q_genocchi_reference(q, n, x, &cfg()).unwrap().value.value;
                    let b = hq_genocchi_reference(q, 2, n, x, &cfg()).unwrap().value.value;
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn tightening_tol_stays_within_bound() {
        let params = [
            ModelParams::real_beta(0.5, 0.3, 1.0, 1, 1).unwrap(),
            ModelParams::real_beta(0.2, -0.6, 0.5, -1, 2).unwrap(),
            ModelParams::new(0.9, Complex64::new(0.3, 0.4), 2.0, 2, 3).unwrap(),
        ];
        for p in &params {
            for n in 0..8 {
                let pt = EvalPoint::new(n, 0.25).unwrap();
                let loose = s_poly_series(p, &pt, &SeriesConfig::new(1e-6, 10_000).unwrap()).unwrap();
                let tight = s_poly_series(p, &pt, &SeriesConfig::new(1e-8, 10_000).unwrap()).unwrap();
                let diff = (loose.value.value - tight.value.value).norm();
                let slack = 1e-13 * loose.value.value.norm();
                assert!(diff <= loose.value.abs_error_bound.max(tight.value.abs_error_bound) + slack);
                assert!(tight.value.terms_used >= loose.value.terms_used);
            }
        }
    }
}
