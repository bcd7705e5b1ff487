use thiserror::Error;

/// Errors raised by the decay-time library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecayError {
    /// A parameter violates its type invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// A time argument was negative.
    #[error("time must be nonnegative, got {0}")]
    NegativeTime(f64),

    /// A bi-exponential term does not decay along some axis.
    #[error("term {index} is not integrable: Re(z_l) = {re_l}, Re(z_r) = {re_r}")]
    NotIntegrable { index: usize, re_l: f64, re_r: f64 },

    /// The density integrates to zero (or less) and cannot be normalized.
    #[error("density has nonpositive total mass {mass}; cannot normalize")]
    NotNormalizable { mass: f64 },

    /// Sampling or likelihood requested from a density that goes negative.
    #[error("{approach} density is negative {}; sampling refused", locate_negative(*.min_value, *.t_l, *.t_r))]
    NegativeDensity {
        approach: String,
        min_value: f64,
        t_l: f64,
        t_r: f64,
    },

    /// The rejection envelope cannot be built.
    #[error("rejection envelope is degenerate: term {index} has a non-decaying exponent")]
    EnvelopeDegenerate { index: usize },

    /// No closed form exists for the requested leading-order combination.
    #[error("no leading-order closed form for {0}")]
    UnsupportedCombination(String),

    /// Adaptive quadrature ran out of refinement depth.
    #[error("quadrature did not converge: estimate {value}, error {error_estimate:e} after {evaluations} evaluations")]
    QuadratureNonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// The reference density vanishes where the other does not.
    #[error("support mismatch at t_l={t_l}, t_r={t_r}: p = {p:e} but q = {q:e}")]
    SupportMismatch { t_l: f64, t_r: f64, p: f64, q: f64 },

    /// Binned statistics cannot reach the minimum expected count.
    #[error("too few events ({events}) for a binned test with minimum expected count {min_expected}")]
    TooFewEvents { events: usize, min_expected: f64 },

    /// Densities compared or tested against each other disagree on channel or state.
    #[error("incompatible models: {0}")]
    IncompatibleModels(String),
}

fn locate_negative(min_value: f64, t_l: f64, t_r: f64) -> String {
    if t_l == t_r {
        format!("on the diagonal (min {min_value:e} at t = {t_l})")
    } else {
        format!("(min {min_value:e} at t_l = {t_l}, t_r = {t_r})")
    }
}

pub type Result<T, E = DecayError> = std::result::Result<T, E>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> DecayError {
    DecayError::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
