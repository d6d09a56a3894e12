use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Laplace engine could not locate a maximum inside the domain.
    #[error("no interior maximum: {0}")]
    NoInteriorMaximum(String),

    /// The objective has non-negative curvature at its maximizer.
    #[error("not strictly concave at maximum: F''({x}) = {f2}")]
    NotConcave { x: f64, f2: f64 },

    /// An iterative computation failed to converge within its budget.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks that `p` is a valid success probability in the open unit interval.
pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("p must lie in (0, 1), got {p}")))
    }
}
