//! Identity audits.
//!
//! Every identity is registered in two forms: as typeset (`Printed`) and a
//! candidate obtained by re-running the derivation from the defining series
//! (`Corrected`). Each check evaluates both sides with the definition-backed
//! evaluators and records a verdict; nothing here presumes which form holds.

mod audit;
mod verdict;

pub use audit::{
    all_identities_pass, run_audit, run_audit_selected, AuditError, AuditReport, IdentityGroup, SummaryRow,
    GRID_IDS,
};
pub use verdict::{IdentityId, IdentityVerdict, Mode, PointDesc, VariantId, VerdictValue, FLOAT_TOL, LIMIT_TOL};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::classical::{classical_euler_poly, classical_genocchi_poly, ozden_y};
use crate::closed::{
    closed_kernel, expand_from_numbers, expand_from_numbers_exact, s_exact_at, s_numbers_exact, s_poly_closed,
    s_poly_exact, ClosedTerms, ClosedVariant, ExpansionVariant, PoleTest,
};
use crate::error::{Error, Result};
use crate::exact::{rational, rational_powi, rational_to_f64, ExactParams, ExactScalar};
use crate::qcore::{binomial_q, factorial, q_number_exact, EvalPoint, ModelParams};
use crate::richardson::richardson;
use crate::series::{hq_genocchi_reference, q_genocchi_reference, s_poly_series, SeriesConfig};

/// Printed or corrected form of an identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormVariant {
    Printed,
    Corrected,
}

impl FormVariant {
    pub const ALL: [FormVariant; 2] = [FormVariant::Printed, FormVariant::Corrected];

    pub fn id(self) -> VariantId {
        match self {
            FormVariant::Printed => VariantId::Printed,
            FormVariant::Corrected => VariantId::Corrected,
        }
    }
}

impl From<ClosedVariant> for VariantId {
    fn from(v: ClosedVariant) -> Self {
        match v {
            ClosedVariant::Printed => VariantId::Printed,
            ClosedVariant::Corrected => VariantId::Corrected,
        }
    }
}

impl From<ExpansionVariant> for VariantId {
    fn from(v: ExpansionVariant) -> Self {
        match v {
            ExpansionVariant::Printed => VariantId::Printed,
            ExpansionVariant::Corrected => VariantId::Corrected,
        }
    }
}

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn fmt_c64(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_f64(z.re)
    } else {
        format!("{},{}", fmt_f64(z.re), fmt_f64(z.im))
    }
}

pub(crate) fn exact_point(p: &ExactParams, n: u32, x: u32) -> PointDesc {
    PointDesc {
        q: p.q.to_string(),
        beta: p.beta.to_string(),
        a: p.a.to_string(),
        b: p.b,
        k: p.k,
        n,
        x: x.to_string(),
        ..PointDesc::default()
    }
}

pub fn float_point(p: &ModelParams, n: u32, x: f64) -> PointDesc {
    PointDesc {
        q: fmt_f64(p.q),
        beta: fmt_c64(p.beta),
        a: fmt_f64(p.a),
        b: p.b,
        k: p.k,
        n,
        x: fmt_f64(x),
        ..PointDesc::default()
    }
}

/// `[2]_q^(1-k) k! / a^b`, the jump of the difference relation at `n = k`.
fn difference_jump(p: &ExactParams) -> Result<ExactScalar> {
    let two = BigRational::one() + &p.q;
    let v = rational_powi(&two, 1 - p.k as i64)? * BigRational::from_integer(BigInt::from(factorial(p.k as u64)))
        / p.a_pow_b();
    Ok(ExactScalar::real(v))
}

/// Umbral power `(u S + c)^n := sum_l C(n,l) u^l S_l c^(n-l)`.
fn umbral_power(numbers: &[ExactScalar], n: u32, u: &BigRational, c: &BigRational) -> Result<ExactScalar> {
    let mut sum = ExactScalar::zero();
    let mut u_pow = BigRational::one();
    for l in 0..=n as usize {
        let coeff = binomial_q(n as u64, l as i64) * &u_pow * rational_powi(c, (n as usize - l) as i64)?;
        sum = sum + numbers[l].scale(&coeff);
        u_pow *= u;
    }
    Ok(sum)
}

/// Closed form against the truncated defining series (float mode).
pub fn verify_closed_form(
    p: &ModelParams,
    pt: &EvalPoint,
    variant: ClosedVariant,
    cfg: &SeriesConfig,
) -> Result<IdentityVerdict> {
    let series = s_poly_series(p, pt, cfg)?;
    let closed = s_poly_closed(p, pt, variant)?;
    Ok(IdentityVerdict::float(
        IdentityId::ClosedFormThm3,
        variant.into(),
        float_point(p, pt.n, pt.x),
        series.value.value,
        closed.value,
        FLOAT_TOL,
    ))
}

/// Expansion in numbers, exact: `S_n(x)` against the sum over `S_l(0)`.
pub fn verify_expansion(
    p: &ExactParams,
    n: u32,
    x: u32,
    closed: ClosedVariant,
    variant: ExpansionVariant,
) -> Result<IdentityVerdict> {
    let lhs = s_poly_exact(p, n, x, closed)?;
    let rhs = expand_from_numbers_exact(p, n, x, closed, variant)?;
    Ok(IdentityVerdict::exact(IdentityId::ExpansionThm1, variant.into(), exact_point(p, n, x), lhs, rhs))
}

/// Expansion in numbers at arbitrary real `x`, against the series oracle.
pub fn verify_expansion_float(
    p: &ModelParams,
    pt: &EvalPoint,
    closed: ClosedVariant,
    variant: ExpansionVariant,
    cfg: &SeriesConfig,
) -> Result<IdentityVerdict> {
    let lhs = s_poly_series(p, pt, cfg)?;
    let rhs = expand_from_numbers(p, pt, closed, variant)?;
    Ok(IdentityVerdict::float(
        IdentityId::ExpansionThm1,
        variant.into(),
        float_point(p, pt.n, pt.x),
        lhs.value.value,
        rhs.value,
        FLOAT_TOL,
    ))
}

/// Umbral form `S_n(x) = (S + [x]_q)^n`. The corrected form is
/// `q^(-kx) (q^x S + [x]_q)^n`.
pub fn verify_umbral_expansion(
    p: &ExactParams,
    n: u32,
    x: u32,
    closed: ClosedVariant,
    variant: FormVariant,
) -> Result<IdentityVerdict> {
    let lhs = s_poly_exact(p, n, x, closed)?;
    let numbers = s_numbers_exact(p, n, closed)?;
    let qx = q_number_exact(x, &p.q)?;
    let rhs = match variant {
        FormVariant::Printed => umbral_power(&numbers, n, &BigRational::one(), &qx)?,
        FormVariant::Corrected => {
            let w = rational_powi(&p.q, x as i64)?;
            umbral_power(&numbers, n, &w, &qx)?.scale(&rational_powi(&w, -(p.k as i64))?)
        }
    };
    Ok(IdentityVerdict::exact(IdentityId::UmbralCor1, variant.id(), exact_point(p, n, x), lhs, rhs))
}

/// Symmetry under `x -> 1-x, beta -> 1/beta, q -> 1/q, a -> 1/a`.
///
/// The left side is the finite closed form with the substituted parameters
/// (a rational function, so `1/q > 1` needs no convergence). The right side
/// is `(-1)^(n-k-1) q^(n-1) F beta^b S_n(x)` with `F = a^(3b)` (printed) or
/// `F = a^b` (corrected).
pub fn verify_symmetry(
    p: &ExactParams,
    n: u32,
    x: u32,
    closed: ClosedVariant,
    variant: FormVariant,
) -> Result<IdentityVerdict> {
    let q_inv = p.q.recip();
    // (1/q)^(1-x) = q^(x-1)
    let w = rational_powi(&p.q, x as i64 - 1)?;
    let beta_b = p.beta_pow_b().recip()?;
    let a_b = p.a_pow_b().recip();
    let terms = ClosedTerms { q: &q_inv, w: &w, beta_b: &beta_b, a_b: &a_b, k: p.k };
    let lhs = closed_kernel(&terms, n, closed, PoleTest::Exact, false)?.value;

    let s = s_poly_exact(p, n, x, closed)?;
    let sign_exp = n as i64 - p.k as i64 - 1;
    let sign = if sign_exp.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
    let a_exp = match variant {
        FormVariant::Printed => 3 * p.b as i64,
        FormVariant::Corrected => p.b as i64,
    };
    let factor = sign * rational_powi(&p.q, n as i64 - 1)? * rational_powi(&p.a, a_exp)?;
    let rhs = (&p.beta_pow_b() * &s).scale(&factor);
    Ok(IdentityVerdict::exact(IdentityId::SymmetryThm4, variant.id(), exact_point(p, n, x), lhs, rhs))
}

/// Difference relation between `S_n(0)` and `S_n(1)`.
///
/// Printed: `S_n(0) - (beta/a) S_n(1) = [n = k] [2]_q^(1-k) k!/a^b`.
/// Corrected: `(beta/a)^b S_n(1) - S_n(0) = [n = k] [2]_q^(1-k) k!/a^b`.
pub fn verify_difference(p: &ExactParams, n: u32, closed: ClosedVariant, variant: FormVariant) -> Result<IdentityVerdict> {
    let s0 = s_exact_at(p, n, &BigRational::one(), closed)?;
    let s1 = s_exact_at(p, n, &p.q, closed)?;
    let lhs = match variant {
        FormVariant::Printed => {
            let beta_over_a = p.beta.scale(&p.a.recip());
            &s0 - &(&beta_over_a * &s1)
        }
        FormVariant::Corrected => &(&p.ratio() * &s1) - &s0,
    };
    let rhs = if n == p.k { difference_jump(p)? } else { ExactScalar::zero() };
    let mut point = exact_point(p, n, 0);
    point.x = "0,1".into();
    Ok(IdentityVerdict::exact(IdentityId::DifferenceThm5, variant.id(), point, lhs, rhs))
}

/// Difference relation with `S_n(1)` written umbrally through the numbers.
///
/// Printed: `S_n - beta/(a q^k) (q S + 1)^n = [n = k] [2]_q^(1-k) k!/a^b`.
/// Corrected: `(beta/a)^b q^(-k) (q S + 1)^n - S_n = [n = k] [2]_q^(1-k) k!/a^b`.
pub fn verify_umbral_difference(
    p: &ExactParams,
    n: u32,
    closed: ClosedVariant,
    variant: FormVariant,
) -> Result<IdentityVerdict> {
    let numbers = s_numbers_exact(p, n, closed)?;
    let umbral = umbral_power(&numbers, n, &p.q, &BigRational::one())?;
    let q_neg_k = rational_powi(&p.q, -(p.k as i64))?;
    let s_n = numbers[n as usize].clone();
    let lhs = match variant {
        FormVariant::Printed => {
            let coeff = p.beta.scale(&(p.a.recip() * &q_neg_k));
            &s_n - &(&coeff * &umbral)
        }
        FormVariant::Corrected => &p.ratio().scale(&q_neg_k) * &umbral - s_n,
    };
    let rhs = if n == p.k { difference_jump(p)? } else { ExactScalar::zero() };
    Ok(IdentityVerdict::exact(IdentityId::UmbralCor2, variant.id(), exact_point(p, n, 0), lhs, rhs))
}

/// Distribution formula over residues `l = 0..d`.
///
/// Right side: `[2]_q^(1-k)/[2]_{q^d}^(1-k) [d]_q^(n-k) sum_l (beta/a)^(bl)
/// S_{n,beta^d,q^d}((x+l)/d | k, a^d, b)`, times `a^((d-1)b)` in the corrected
/// form. The inner polynomial needs `(q^d)^((x+l)/d) = q^(x+l)`, which is
/// rational, so the check stays exact.
pub fn verify_distribution(
    p: &ExactParams,
    n: u32,
    x: u32,
    d: u32,
    closed: ClosedVariant,
    variant: FormVariant,
) -> Result<IdentityVerdict> {
    if d < 1 {
        return Err(Error::domain("d must be >= 1"));
    }
    let lhs = s_poly_exact(p, n, x, closed)?;
    let q_d = rational_powi(&p.q, d as i64)?;
    let sub = ExactParams::new(
        q_d.clone(),
        p.beta.powi(d as i64)?,
        rational_powi(&p.a, d as i64)?,
        p.b,
        p.k,
    )?;
    let r = p.ratio();
    let mut sum = ExactScalar::zero();
    let mut r_pow = ExactScalar::one();
    for l in 0..d {
        let w = rational_powi(&p.q, (x + l) as i64)?;
        sum = sum + &r_pow * &s_exact_at(&sub, n, &w, closed)?;
        r_pow = &r_pow * &r;
    }
    let one = BigRational::one();
    let k_exp = 1 - p.k as i64;
    let mut factor = rational_powi(&(&one + &p.q), k_exp)? / rational_powi(&(&one + &q_d), k_exp)?
        * rational_powi(&q_number_exact(d, &p.q)?, n as i64 - p.k as i64)?;
    if variant == FormVariant::Corrected {
        factor *= rational_powi(&p.a, (d as i64 - 1) * p.b as i64)?;
    }
    let rhs = sum.scale(&factor);
    let mut point = exact_point(p, n, x);
    point.d = Some(d);
    Ok(IdentityVerdict::exact(IdentityId::DistributionThm6, variant.id(), point, lhs, rhs))
}

/// Reduction to the q-Genocchi (`h = None`) or (h,q)-Genocchi polynomials:
/// `S_{n,q^(h-1),q}(x | 1, -1, 1)` against the reference series, both as
/// stated (`S = G`) and with the `[2]_q` factor that the `k = 1` weight
/// `[2]_q^(1-k) = 1` leaves out (`[2]_q S = G`).
pub fn verify_specialization(
    q: f64,
    h: Option<u32>,
    n: u32,
    x: f64,
    variant: FormVariant,
    cfg: &SeriesConfig,
) -> Result<IdentityVerdict> {
    let (beta, reference, identity) = match h {
        None => (q, q_genocchi_reference(q, n, x, cfg)?, IdentityId::SpecializationQ),
        Some(h) => (q.powi(h as i32 - 1), hq_genocchi_reference(q, h, n, x, cfg)?, IdentityId::SpecializationHq),
    };
    let p = ModelParams::real_beta(q, beta, -1.0, 1, 1)?;
    let s = s_poly_series(&p, &EvalPoint::new(n, x)?, cfg)?.value.value;
    let lhs = match variant {
        FormVariant::Printed => s,
        FormVariant::Corrected => s * (1.0 + q),
    };
    let mut point = float_point(&p, n, x);
    point.h = h;
    Ok(IdentityVerdict::float(identity, variant.id(), point, lhs, reference.value.value, FLOAT_TOL))
}

/// Both specializations (`h = None` and `h in {2, 3, 4}`) in both forms.
pub fn verify_specializations(q: f64, n: u32, x: f64, cfg: &SeriesConfig) -> Result<Vec<IdentityVerdict>> {
    let mut out = Vec::new();
    for h in [None, Some(2), Some(3), Some(4)] {
        for v in FormVariant::ALL {
            out.push(verify_specialization(q, h, n, x, v, cfg)?);
        }
    }
    Ok(out)
}

/// Which classical family a q -> 1 limit is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitTarget {
    /// `y_{n,beta}(x; k, a, b)` with the caller's parameters.
    Ozden,
    /// `E_n(x) = 2 y_{n+1,1}(x; 1, -1, 1)/(n+1)`.
    Euler,
    /// `G_n(x)/2 = y_{n,1}(x; 1, -1, 1)`.
    Genocchi,
}

impl LimitTarget {
    pub fn identity(self) -> IdentityId {
        match self {
            LimitTarget::Ozden => IdentityId::LimitOzden,
            LimitTarget::Euler => IdentityId::LimitEuler,
            LimitTarget::Genocchi => IdentityId::LimitGenocchi,
        }
    }
}

/// Rational parameters `(beta, a, b, k)` of a limit check; `q` is swept.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitParams {
    pub beta: BigRational,
    pub a: BigRational,
    pub b: i32,
    pub k: u32,
}

impl LimitParams {
    /// `beta = b = 1, a = -1, k = 1`.
    pub fn genocchi() -> Self {
        LimitParams { beta: BigRational::one(), a: -BigRational::one(), b: 1, k: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitOutcome {
    pub extrapolant: BigRational,
    pub reference: BigRational,
    pub error_estimate: BigRational,
    pub verdict: IdentityVerdict,
}

/// First and last exponent `j` of the ladder `q_j = 1 - 2^(-j)`.
pub const LIMIT_LADDER: (u32, u32) = (3, 10);
pub const RICHARDSON_ORDER: usize = 4;

/// Extrapolates exact closed-form values along `q_j = 1 - 2^(-j)` to
/// `q = 1` and compares with the classical recurrence.
pub fn verify_q1_limit(
    target: LimitTarget,
    n: u32,
    x: u32,
    params: &LimitParams,
    closed: ClosedVariant,
) -> Result<LimitOutcome> {
    let xq = BigRational::from_integer(BigInt::from(x));
    let (lp, order, scale, reference) = match target {
        LimitTarget::Ozden => {
            let r = ozden_y(n, &xq, params.k, &params.a, params.b, &params.beta)?;
            (params.clone(), n, BigRational::one(), r)
        }
        LimitTarget::Euler => {
            let r = classical_euler_poly(n, &xq);
            (LimitParams::genocchi(), n + 1, rational(2, n as i64 + 1), r)
        }
        LimitTarget::Genocchi => {
            let r = classical_genocchi_poly(n, &xq) / rational(2, 1);
            (LimitParams::genocchi(), n, BigRational::one(), r)
        }
    };
    let mut steps = Vec::new();
    let mut values = Vec::new();
    for j in LIMIT_LADDER.0..=LIMIT_LADDER.1 {
        let h = rational(1, 1i64 << j);
        let q = BigRational::one() - &h;
        let ep = ExactParams::new(q, ExactScalar::real(lp.beta.clone()), lp.a.clone(), lp.b, lp.k)?;
        let v = s_poly_exact(&ep, order, x, closed)?;
        steps.push(h);
        values.push(v.re() * &scale);
    }
    let ex = richardson(&steps, &values, RICHARDSON_ORDER)?;
    let point = PointDesc {
        q: "1".into(),
        beta: lp.beta.to_string(),
        a: lp.a.to_string(),
        b: lp.b,
        k: lp.k,
        n,
        x: x.to_string(),
        ..PointDesc::default()
    };
    let verdict = IdentityVerdict::float(
        target.identity(),
        VariantId::Printed,
        point,
        Complex64::new(rational_to_f64(&reference), 0.0),
        Complex64::new(ex.estimate.to_f64().unwrap_or(f64::NAN), 0.0),
        LIMIT_TOL,
    );
    Ok(LimitOutcome { extrapolant: ex.estimate, reference, error_estimate: ex.error_estimate, verdict })
}

/// Index convention for the values of the interpolation function at
/// negative integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexVariant {
    /// `I(-n) = -((n-k)!/n!) S_n`.
    Printed,
    /// `I(-(n-k)) = -((n-k)!/n!) S_n`.
    Shifted,
}

impl IndexVariant {
    pub const ALL: [IndexVariant; 2] = [IndexVariant::Printed, IndexVariant::Shifted];

    pub fn id(self) -> VariantId {
        match self {
            IndexVariant::Printed => VariantId::Printed,
            IndexVariant::Shifted => VariantId::Shifted,
        }
    }
}
