//! Error taxonomy. Every failure is typed; no routine returns a silently wrong value.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A model parameter violates a structural invariant.
    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    /// The closed form does not cover this parameter family.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// No admissible Mellin–Barnes contour exists (pole families overlap).
    #[error("contour configuration error: {0}")]
    Contour(String),

    /// Refinement exhausted its budget before the error estimate met the tolerance.
    #[error("{what} did not converge: last estimate {last:e}, previous {previous:e}")]
    Convergence { what: String, last: f64, previous: f64 },

    /// An infinite series did not settle within the allowed number of terms.
    #[error("series {what} did not converge after {terms} terms: partial sum {partial:e}, last term bound {bound:e}")]
    Series { what: String, partial: f64, bound: f64, terms: usize },

    /// A probability left [0, 1] by more than roundoff.
    #[error("numerical integrity violated in {what}: value {value:e} outside admissible range")]
    Integrity { what: String, value: f64 },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn param(name: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter { name, detail: detail.into() }
    }

    /// Prefixes the failing quantity with the name of the term that produced it.
    pub fn context(self, tag: &str) -> Self {
        match self {
            Error::Convergence { what, last, previous } => {
                Error::Convergence { what: format!("{tag}: {what}"), last, previous }
            }
            Error::Series { what, partial, bound, terms } => {
                Error::Series { what: format!("{tag}: {what}"), partial, bound, terms }
            }
            Error::Contour(m) => Error::Contour(format!("{tag}: {m}")),
            Error::Integrity { what, value } => Error::Integrity { what: format!("{tag}: {what}"), value },
            other => other,
        }
    }

    /// True for failures that indicate a numerical-integrity or convergence problem
    /// rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Contour(_) | Error::Convergence { .. } | Error::Series { .. } | Error::Integrity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
