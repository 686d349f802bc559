//! The Hurwitz-type interpolation function
//! `I(s; x) = [2]_q^(1-k) sum_m beta^(bm) a^(-bm-b) / [m+x]_q^s`.
//!
//! With `|(beta/a)^b| < 1` the terms are dominated by a geometric sequence
//! uniformly for `s` in compact sets, so the series converges for every
//! complex `s`. The base `[m+x]_q` is positive for `x > 0`, so the principal
//! power is used throughout.

use num_complex::Complex64;

use num_traits::ToPrimitive;

use crate::closed::{s_poly_closed, ClosedVariant};
use crate::error::{Error, Result};
use crate::identities::{float_point, IdentityId, IdentityVerdict, IndexVariant, FLOAT_TOL};
use crate::qcore::{falling_ratio, q_number_unchecked, EvalPoint, ModelParams};
use crate::series::{geometric_sum, SeriesConfig};

/// One evaluation of the interpolation function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPoint {
    pub s: Complex64,
    pub value: Complex64,
    pub abs_error_bound: f64,
    pub terms_used: u64,
    pub converged: bool,
}

/// Upper bound on `|[m+x]_q^(-s)|` over all `m >= 0`, using
/// `[x]_q <= [m+x]_q <= 1/(1-q)`.
pub fn power_envelope(q: f64, x: f64, s_re: f64) -> f64 {
    let lo = q_number_unchecked(x, q);
    let hi = 1.0 / (1.0 - q);
    lo.powf(-s_re).max(hi.powf(-s_re))
}

pub fn zeta_eval(p: &ModelParams, s: Complex64, x: f64, cfg: &SeriesConfig) -> Result<ZetaPoint> {
    let rho = p.convergent_ratio()?;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("x = {x} must be > 0")));
    }
    if !s.is_finite() {
        return Err(Error::domain("s must be finite"));
    }
    let front = p.two_factor() * p.a_inv_pow_b();
    let scale = front.abs() * power_envelope(p.q, x, s.re);
    let r = p.ratio();
    let mut r_pow = Complex64::new(1.0, 0.0);
    let res = geometric_sum(scale, rho, cfg, |m| {
        let base = q_number_unchecked(m as f64 + x, p.q);
        let t = r_pow * front * (-s * base.ln()).exp();
        r_pow *= r;
        t
    });
    Ok(ZetaPoint {
        s,
        value: res.value.value,
        abs_error_bound: res.value.abs_error_bound,
        terms_used: res.value.terms_used,
        converged: res.converged,
    })
}

/// Values at negative integers against `-((n-k)!/n!) S_n(x)`, reading the
/// function at `s = -n` (printed) or `s = -(n-k)` (shifted). `S_n` comes from
/// the closed form in variant `closed`.
pub fn verify_interpolation(
    p: &ModelParams,
    n: u32,
    x: f64,
    variant: IndexVariant,
    closed: ClosedVariant,
    cfg: &SeriesConfig,
) -> Result<IdentityVerdict> {
    if n < p.k {
        return Err(Error::domain(format!("interpolation check needs n >= k, got n = {n}, k = {}", p.k)));
    }
    let s = match variant {
        IndexVariant::Printed => -(n as f64),
        IndexVariant::Shifted => -((n - p.k) as f64),
    };
    let lhs = zeta_eval(p, Complex64::new(s, 0.0), x, cfg)?;
    let poly = s_poly_closed(p, &EvalPoint::new(n, x)?, closed)?;
    let ff = falling_ratio(n as u64, p.k as u64)?.to_f64().unwrap_or(f64::INFINITY);
    let rhs = -poly.value / ff;
    Ok(IdentityVerdict::float(IdentityId::InterpolationThm8, variant.id(), float_point(p, n, x), lhs.value, rhs, FLOAT_TOL))
}
