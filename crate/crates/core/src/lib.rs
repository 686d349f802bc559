//! Unified q-extension Genocchi polynomials `S_{n,beta,q}(x | k, a, b)`.
//!
//! The polynomials are the coefficients of
//!
//! ```text
//! F(t, x) = -[2]_q^(1-k) t^k sum_{m>=0} beta^(bm) a^(-bm-b) e^([m+x]_q t)
//!         = sum_n S_n(x) t^n / n!
//! ```
//!
//! This crate evaluates them three ways (truncated series with rigorous tail
//! bounds, finite closed form, exact rational arithmetic), evaluates the
//! Hurwitz-type interpolation function at complex arguments, and audits the
//! published identities for the family in as-printed and corrected forms
//! against the series definition.
//!
//! ```
//! use qgenocchi::{s_poly_series, EvalPoint, ModelParams, SeriesConfig};
//!
//! let p = ModelParams::real_beta(0.5, 1.0 / 3.0, 1.0, 1, 1).unwrap();
//! let r = s_poly_series(&p, &EvalPoint::new(1, 0.0).unwrap(), &SeriesConfig::default()).unwrap();
//! assert!((r.value.value.re + 1.5).abs() < 1e-12);
//! ```

pub mod classical;
pub mod closed;
mod dd;
pub mod error;
pub mod exact;
pub mod identities;
pub mod qcore;
pub mod report;
pub mod richardson;
pub mod series;
pub mod zeta;

pub use classical::{classical_euler_poly, classical_genocchi, classical_genocchi_poly, ozden_y};
pub use closed::{
    expand_from_numbers, expand_from_numbers_exact, s_numbers, s_numbers_exact, s_poly_closed, s_poly_exact,
    ClosedVariant, ExpansionVariant,
};
pub use error::{Error, Result};
pub use exact::{parse_rational, ExactParams, ExactScalar};
pub use identities::{run_audit, AuditReport, IdentityId, IdentityVerdict, VariantId};
pub use qcore::{binomial, falling_ratio, q_number, q_number_exact, ApproxValue, EvalPoint, Method, ModelParams};
pub use series::{genfun_eval, hq_genocchi_reference, q_genocchi_reference, s_poly_series, SeriesConfig, SeriesResult};
pub use zeta::{zeta_eval, ZetaPoint};
