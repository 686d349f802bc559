use num_complex::Complex64;
use serde::Serialize;

use crate::exact::ExactScalar;

/// Float-mode relative pass tolerance (with the same absolute floor).
pub const FLOAT_TOL: f64 = 1e-9;

/// Tolerance for q -> 1 extrapolated limits.
pub const LIMIT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    /// Finite closed form against the defining series.
    ClosedFormThm3,
    ExpansionThm1,
    UmbralCor1,
    SymmetryThm4,
    DifferenceThm5,
    UmbralCor2,
    DistributionThm6,
    SpecializationQ,
    SpecializationHq,
    InterpolationThm8,
    LimitOzden,
    LimitEuler,
    LimitGenocchi,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::ClosedFormThm3,
        IdentityId::ExpansionThm1,
        IdentityId::UmbralCor1,
        IdentityId::SymmetryThm4,
        IdentityId::DifferenceThm5,
        IdentityId::UmbralCor2,
        IdentityId::DistributionThm6,
        IdentityId::SpecializationQ,
        IdentityId::SpecializationHq,
        IdentityId::InterpolationThm8,
        IdentityId::LimitOzden,
        IdentityId::LimitEuler,
        IdentityId::LimitGenocchi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::ClosedFormThm3 => "closed_form_thm3",
            IdentityId::ExpansionThm1 => "expansion_thm1",
            IdentityId::UmbralCor1 => "umbral_cor1",
            IdentityId::SymmetryThm4 => "symmetry_thm4",
            IdentityId::DifferenceThm5 => "difference_thm5",
            IdentityId::UmbralCor2 => "umbral_cor2",
            IdentityId::DistributionThm6 => "distribution_thm6",
            IdentityId::SpecializationQ => "specialization_q",
            IdentityId::SpecializationHq => "specialization_hq",
            IdentityId::InterpolationThm8 => "interpolation_thm8",
            IdentityId::LimitOzden => "limit_ozden",
            IdentityId::LimitEuler => "limit_euler",
            IdentityId::LimitGenocchi => "limit_genocchi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantId {
    Printed,
    Corrected,
    Shifted,
}

impl VariantId {
    pub fn as_str(self) -> &'static str {
        match self {
            VariantId::Printed => "printed",
            VariantId::Corrected => "corrected",
            VariantId::Shifted => "shifted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Float,
}

/// Parameter point of a verdict, rendered as text so that exact and float
/// points share one canonical shape.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct PointDesc {
    pub q: String,
    pub beta: String,
    pub a: String,
    pub b: i32,
    pub k: u32,
    pub n: u32,
    pub x: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VerdictValue {
    Exact(ExactScalar),
    Float(Complex64),
}

impl VerdictValue {
    pub fn to_complex64(&self) -> Complex64 {
        match self {
            VerdictValue::Exact(e) => e.to_complex64(),
            VerdictValue::Float(z) => *z,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityVerdict {
    pub identity: IdentityId,
    pub variant: VariantId,
    pub point: PointDesc,
    pub lhs: VerdictValue,
    pub rhs: VerdictValue,
    pub abs_diff: f64,
    pub passed: bool,
    pub mode: Mode,
    /// Relative tolerance for float verdicts; `None` in exact mode.
    pub tol: Option<f64>,
}

impl IdentityVerdict {
    /// Exact verdict: passes iff `lhs - rhs` is exactly zero.
    pub fn exact(identity: IdentityId, variant: VariantId, point: PointDesc, lhs: ExactScalar, rhs: ExactScalar) -> Self {
        let diff = &lhs - &rhs;
        IdentityVerdict {
            identity,
            variant,
            point,
            abs_diff: diff.abs_f64(),
            passed: diff.is_zero(),
            lhs: VerdictValue::Exact(lhs),
            rhs: VerdictValue::Exact(rhs),
            mode: Mode::Exact,
            tol: None,
        }
    }

    /// Float verdict: passes iff `|lhs - rhs| <= max(tol, tol |lhs|)`.
    pub fn float(identity: IdentityId, variant: VariantId, point: PointDesc, lhs: Complex64, rhs: Complex64, tol: f64) -> Self {
        let abs_diff = (lhs - rhs).norm();
        IdentityVerdict {
            identity,
            variant,
            point,
            abs_diff,
            passed: abs_diff <= tol.max(tol * lhs.norm()),
            lhs: VerdictValue::Float(lhs),
            rhs: VerdictValue::Float(rhs),
            mode: Mode::Float,
            tol: Some(tol),
        }
    }
}
