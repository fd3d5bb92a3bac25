use thiserror::Error;

/// Errors raised by every layer of the lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed validation. `param` names the offending input.
    #[error("invalid parameter `{param}`: {reason}")]
    InvalidParameter { param: String, reason: String },

    #[error("empty support")]
    EmptySupport,

    /// The grid for axis `axis` is too small for alias-free sampling.
    #[error("grid size {size} on axis {axis} must exceed spread {spread} for alias-free evaluation")]
    Aliased { axis: usize, size: usize, spread: u64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The requested grid or convolution support exceeds the configured budget.
    #[error("budget exceeded: {what} needs {needed} points, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: usize,
    },

    /// Adaptive quadrature stopped at its grid budget before converging.
    #[error(
        "quadrature did not converge within budget: last values {previous} and {last} (relative change {rel_change:e})"
    )]
    NotConverged {
        previous: f64,
        last: f64,
        rel_change: f64,
    },

    /// Too many trials of an experiment failed.
    #[error("{failed} of {trials} trials failed (budget is under 1%): {first}")]
    TrialFailures {
        failed: usize,
        trials: usize,
        first: String,
    },

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub(crate) fn invalid(param: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            param: param.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that stem from user input rather than runtime failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::EmptySupport
                | Error::Aliased { .. }
                | Error::DimensionMismatch { .. }
                | Error::Parse { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
