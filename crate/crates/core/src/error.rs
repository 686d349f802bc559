use thiserror::Error;

/// Errors raised by the evaluators and the audit engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the admissible parameter domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The defining series diverges: |(beta/a)^b| >= 1.
    #[error("series does not converge: |(beta/a)^b| = {ratio} >= 1")]
    NotConvergent { ratio: f64 },

    /// A denominator `beta^b q^(l-k) - a^b` of the closed form vanishes.
    #[error("pole in closed form at l = {l}")]
    PoleAtDenominator { l: u32 },

    /// The recurrence coefficient `beta^b - a^b` is zero.
    #[error("degenerate recurrence: beta^b = a^b")]
    DegenerateRecurrence,

    #[error("division by zero")]
    DivisionByZero,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors of a numerical nature (divergence, poles) as opposed
    /// to invalid input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotConvergent { .. }
                | Error::PoleAtDenominator { .. }
                | Error::DegenerateRecurrence
                | Error::DivisionByZero
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
