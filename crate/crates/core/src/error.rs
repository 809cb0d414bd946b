use thiserror::Error;

/// Errors produced by parameter validation and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CptError {
    /// A parameter or cross-parameter constraint does not hold. `constraint`
    /// names the violated rule, e.g. `"m_minus >= m_plus"`.
    #[error("constraint `{constraint}` violated: {detail}")]
    Constraint { constraint: String, detail: String },

    #[error("invalid gamble: {0}")]
    InvalidGamble(String),

    /// The operation is undefined at this argument.
    #[error("{operation} is undefined at {argument}")]
    Domain { operation: &'static str, argument: f64 },

    /// The identity weighting function has no inflection point.
    #[error("weighting function with gamma = 1 is the identity and has no inflection point")]
    NoInflection,

    /// Target value outside the range of the value function.
    #[error("value {target} is outside the range of the value function (bound {bound})")]
    OutOfRange { target: f64, bound: f64 },

    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    OracleFailure { achieved: f64, requested: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Population scenario problem; `path` points into the scenario document.
    #[error("{path}: {message}")]
    Scenario { path: String, message: String },
}

impl CptError {
    pub(crate) fn constraint(constraint: impl Into<String>, detail: impl Into<String>) -> Self {
        CptError::Constraint {
            constraint: constraint.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn scenario(path: impl Into<String>, message: impl Into<String>) -> Self {
        CptError::Scenario {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, CptError>;
