use thiserror::Error;

/// Errors produced by the library.
///
/// Variants split into two families: precondition violations (bad exponents,
/// domains or parameters) and numerical failures (divergence, exhausted
/// budgets). [`Error::is_numerical`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Lebesgue exponent {0}: must be a number in [1, inf]")]
    InvalidExponent(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("outside the domain of the function: {0}")]
    DomainError(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error(
        "no convergence after {evaluations} evaluations (estimate {estimate:e}, error {error:e})"
    )]
    NonConvergence {
        evaluations: usize,
        estimate: f64,
        error: f64,
    },

    #[error("integrand is not finite at x = {0:e}")]
    NonFinite(f64),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergent(_) | Error::NonConvergence { .. } | Error::NonFinite(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
